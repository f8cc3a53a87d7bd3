"""
Detector construction for HOObs
Polynomial-size nondeterministic surrogate of the observer
"""

import logging
from collections import deque
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from automata.errors import StateCapExceeded
from automata.model import Automaton, LabeledAutomaton, Labeling
from automata.operations import observer_successor, unobservable_closure
from config.config_manager import resolve_state_cap
from constructions.observer import render_state_set

StateSet = FrozenSet[int]


def split_successor(successor: StateSet) -> List[StateSet]:
    """Detector split of an observer successor: its 2-subsets, itself if a singleton, else nothing"""
    if len(successor) >= 2:
        return [frozenset(pair) for pair in combinations(sorted(successor), 2)]
    if len(successor) == 1:
        return [successor]
    return []


class DetectorAutomaton:
    """Nondeterministic detector; non-initial states hold one or two source states"""

    def __init__(self, source: LabeledAutomaton, states: Sequence[StateSet],
                 transitions: Set[Tuple[int, int, int]],
                 parents: Sequence[Optional[Tuple[int, int]]]):
        self.source = source
        self.states: Tuple[StateSet, ...] = tuple(states)
        self.transitions = frozenset(transitions)
        self.parents = tuple(parents)
        self.initial = 0
        self._index = {state: i for i, state in enumerate(self.states)}
        successors: Dict[Tuple[int, int], Set[int]] = {}
        for origin, label, target in self.transitions:
            successors.setdefault((origin, label), set()).add(target)
        self._successors = {key: frozenset(value) for key, value in successors.items()}

    @property
    def label_names(self) -> Tuple[str, ...]:
        return self.source.label_names

    @property
    def num_states(self) -> int:
        return len(self.states)

    def index_of(self, state: StateSet) -> Optional[int]:
        return self._index.get(frozenset(state))

    def successors(self, index: int, label: int) -> FrozenSet[int]:
        return self._successors.get((index, label), frozenset())

    def run_states(self, labels: Sequence[int]) -> FrozenSet[int]:
        """Indices of all detector states reachable under a label word"""
        current = frozenset([self.initial])
        for label in labels:
            current = frozenset(t for i in current for t in self.successors(i, label))
        return current

    def sorted_transitions(self) -> List[Tuple[int, int, int]]:
        return sorted(self.transitions)

    def state_name(self, index: int) -> str:
        return render_state_set(self.states[index], self.source.state_names)

    def state_names(self) -> List[str]:
        return [self.state_name(i) for i in range(self.num_states)]

    def to_labeled_automaton(self, state_names: Optional[Sequence[str]] = None) -> LabeledAutomaton:
        """Wrap the detector as an LFSA over its labels with identity labeling"""
        names = list(state_names) if state_names is not None else self.state_names()
        automaton = Automaton(names, self.label_names, self.sorted_transitions(), [self.initial])
        identity = Labeling(self.label_names, list(range(len(self.label_names))))
        return LabeledAutomaton(automaton, identity)


def build_detector(system: LabeledAutomaton, state_cap: Optional[int] = None) -> DetectorAutomaton:
    """
    Build the reachable detector of a labeled automaton

    The initial state is the observer's initial estimate and may hold more than
    two states; moves out of it use the same split rule as every other state.

    Args:
        system: The observed LFSA
        state_cap: Maximum number of detector states (defaults to the configured cap)

    Returns:
        The detector
    """
    cap = resolve_state_cap(state_cap)
    labels = system.labeling.sorted_label_ids()
    initial = unobservable_closure(system, system.automaton.initial)
    states: List[StateSet] = [initial]
    parents: List[Optional[Tuple[int, int]]] = [None]
    index: Dict[StateSet, int] = {initial: 0}
    transitions: Set[Tuple[int, int, int]] = set()
    queue = deque([initial])
    while queue:
        current = queue.popleft()
        current_index = index[current]
        for label in labels:
            for target in split_successor(observer_successor(system, current, label)):
                if target not in index:
                    if len(states) >= cap:
                        raise StateCapExceeded("Detector construction", cap)
                    index[target] = len(states)
                    states.append(target)
                    parents.append((current_index, label))
                    queue.append(target)
                transitions.add((current_index, label, index[target]))

    logging.debug(f"Detector built: {len(states)} states, {len(transitions)} transitions")
    return DetectorAutomaton(system, states, transitions, parents)
