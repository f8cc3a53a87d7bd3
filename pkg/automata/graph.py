"""
Transition graph representation for HOObs
Manages automaton connectivity using networkx
"""

import networkx as nx
from typing import Any, Dict, FrozenSet, Iterable, List, Optional

from automata.model import Automaton


class TransitionGraph:
    """Manages an automaton's transition structure as a directed multigraph"""

    def __init__(self, automaton: Automaton):
        """Initialize the transition graph"""
        self.automaton = automaton
        self.graph = nx.MultiDiGraph()
        self.graph.add_nodes_from(range(automaton.num_states))
        for source, event, target in automaton.sorted_transitions():
            self.graph.add_edge(source, target, key=event, event=automaton.event_names[event])

    def reachable_states(self, sources: Optional[Iterable[int]] = None) -> FrozenSet[int]:
        """
        Get all states reachable from `sources`

        Args:
            sources: Start states (defaults to the initial states)

        Returns:
            The sources together with all their descendants
        """
        if sources is None:
            sources = self.automaton.initial
        reachable = set()
        for state in sources:
            if state in reachable:
                continue
            reachable.add(state)
            reachable.update(nx.descendants(self.graph, state))
        return frozenset(reachable)

    def deadlock_states(self) -> List[int]:
        """Get the states with no outgoing transition"""
        return [node for node in self.graph.nodes() if self.graph.out_degree(node) == 0]

    def unused_events(self) -> List[str]:
        used = {event for _, _, event in self.graph.edges(keys=True)}
        return [name for i, name in enumerate(self.automaton.event_names) if i not in used]

    def get_automaton_info(self) -> Dict[str, Any]:
        """
        Get information about the automaton

        Returns:
            Dictionary with automaton information
        """
        names = self.automaton.state_names
        return {
            'num_states': self.graph.number_of_nodes(),
            'num_events': self.automaton.num_events,
            'num_transitions': self.graph.number_of_edges(),
            'deterministic': self.automaton.is_deterministic(),
            'initial': [names[q] for q in sorted(self.automaton.initial)],
            'reachable': len(self.reachable_states()),
            'strongly_connected_components': nx.number_strongly_connected_components(self.graph),
        }

    def validate_automaton(self) -> Dict[str, Any]:
        """
        Validate the automaton for common modelling issues

        Returns:
            Dictionary with validation results
        """
        issues = []
        warnings = []
        names = self.automaton.state_names

        if self.automaton.is_empty:
            issues.append("No initial state: the automaton generates no behaviour")

        reachable = self.reachable_states()
        unreachable_states = [names[q] for q in self.graph.nodes() if q not in reachable]
        if unreachable_states:
            warnings.append(f"Unreachable states: {unreachable_states}")

        deadlock_states = [names[q] for q in self.deadlock_states() if q in reachable]
        if deadlock_states:
            warnings.append(f"Deadlock states: {deadlock_states}")

        unused_events = self.unused_events()
        if unused_events:
            warnings.append(f"Events with no transition: {unused_events}")

        return {
            'valid': len(issues) == 0,
            'issues': issues,
            'warnings': warnings,
            'unreachable_states': unreachable_states,
            'deadlock_states': deadlock_states,
            'unused_events': unused_events
        }
