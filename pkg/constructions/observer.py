"""
Observer construction for HOObs
Powerset construction with unobservable closure over a labeled automaton
"""

import logging
from collections import deque
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from automata.errors import StateCapExceeded
from automata.model import Automaton, LabeledAutomaton, Labeling
from automata.operations import observer_successor, unobservable_closure
from config.config_manager import resolve_state_cap

StateSet = FrozenSet[int]


def render_state_set(states: StateSet, names: Sequence[str]) -> str:
    """Render a set of source states canonically, e.g. {0,1}"""
    return "{" + ",".join(names[q] for q in sorted(states)) + "}"


def explore_observer(system: LabeledAutomaton, completed: bool = False,
                     edges: Optional[Dict[Tuple[int, int], int]] = None
                     ) -> Iterator[Tuple[int, StateSet, Optional[Tuple[int, int]]]]:
    """
    Breadth-first walk over the reachable observer states

    Labels are explored in lexicographic name order, so the first path found to
    each state is the shortest and, among those, the lexicographically least.

    Args:
        system: The observed LFSA
        completed: Follow label moves into the ∅ sink
        edges: When given, filled with (state, label) -> state as states are expanded

    Yields:
        (index, state set, (parent index, label) or None for the initial state)
    """
    labels = system.labeling.sorted_label_ids()
    initial = unobservable_closure(system, system.automaton.initial)
    index: Dict[StateSet, int] = {initial: 0}
    queue = deque([initial])
    yield 0, initial, None
    while queue:
        current = queue.popleft()
        current_index = index[current]
        for label in labels:
            successor = observer_successor(system, current, label) if current else frozenset()
            if not successor and not completed:
                continue
            if successor not in index:
                index[successor] = len(index)
                queue.append(successor)
                yield index[successor], successor, (current_index, label)
            if edges is not None:
                edges[(current_index, label)] = index[successor]


class ObserverAutomaton:
    """Deterministic observer of a labeled automaton"""

    def __init__(self, source: LabeledAutomaton, states: Sequence[StateSet],
                 transitions: Dict[Tuple[int, int], int],
                 parents: Sequence[Optional[Tuple[int, int]]], completed: bool = False):
        self.source = source
        self.states: Tuple[StateSet, ...] = tuple(states)
        self.transitions = dict(transitions)
        self.parents = tuple(parents)
        self.completed = completed
        self.initial = 0
        self._index = {state: i for i, state in enumerate(self.states)}

    @property
    def label_names(self) -> Tuple[str, ...]:
        return self.source.label_names

    @property
    def num_states(self) -> int:
        return len(self.states)

    def index_of(self, state: StateSet) -> Optional[int]:
        return self._index.get(frozenset(state))

    def step(self, index: int, label: int) -> Optional[int]:
        return self.transitions.get((index, label))

    def run(self, labels: Sequence[int]) -> Optional[int]:
        """
        Run the observer on a label word

        Returns:
            The index of the state reached, or None when the word is not generated
        """
        index: Optional[int] = self.initial
        for label in labels:
            index = self.transitions.get((index, label))
            if index is None:
                return None
        return index

    def run_names(self, labels: Sequence[str]) -> Optional[int]:
        return self.run(self.source.label_ids(labels))

    def path_to(self, index: int) -> Tuple[str, ...]:
        """Label word of the BFS tree path from the initial state to `index`"""
        word: List[str] = []
        parent = self.parents[index]
        while parent is not None:
            index, label = parent
            word.append(self.label_names[label])
            parent = self.parents[index]
        return tuple(reversed(word))

    def sorted_transitions(self) -> List[Tuple[int, int, int]]:
        return sorted((source, label, target)
                      for (source, label), target in self.transitions.items())

    def state_name(self, index: int) -> str:
        return render_state_set(self.states[index], self.source.state_names)

    def state_names(self) -> List[str]:
        return [self.state_name(i) for i in range(self.num_states)]

    def to_labeled_automaton(self, state_names: Optional[Sequence[str]] = None) -> LabeledAutomaton:
        """
        Wrap the observer as an LFSA over its labels with identity labeling

        Args:
            state_names: Optional names for the observer states
        """
        names = list(state_names) if state_names is not None else self.state_names()
        automaton = Automaton(names, self.label_names, self.sorted_transitions(), [self.initial])
        identity = Labeling(self.label_names, list(range(len(self.label_names))))
        return LabeledAutomaton(automaton, identity)


def build_observer(system: LabeledAutomaton, completed: bool = False,
                   state_cap: Optional[int] = None,
                   on_state: Optional[Callable[[int, StateSet], None]] = None) -> ObserverAutomaton:
    """
    Build the reachable observer of a labeled automaton

    Args:
        system: The observed LFSA
        completed: Keep label moves that produce ∅, sending them to an absorbing ∅ sink
        state_cap: Maximum number of observer states (defaults to the configured cap)
        on_state: Callback invoked for every new state as it is discovered

    Returns:
        The observer

    Raises:
        StateCapExceeded: If the observer grows beyond the cap
    """
    cap = resolve_state_cap(state_cap)
    states: List[StateSet] = []
    parents: List[Optional[Tuple[int, int]]] = []
    transitions: Dict[Tuple[int, int], int] = {}
    for index, state, parent in explore_observer(system, completed, transitions):
        if index >= cap:
            raise StateCapExceeded("Observer construction", cap)
        states.append(state)
        parents.append(parent)
        if on_state is not None:
            on_state(index, state)

    logging.debug(f"Observer built: {len(states)} states, {len(transitions)} transitions")
    return ObserverAutomaton(system, states, transitions, parents, completed)
