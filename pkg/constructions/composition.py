"""
Concurrent composition for HOObs
Synchronous product of two labeled automata over one label alphabet
"""

import logging
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

from automata.errors import StateCapExceeded, ValidationError
from automata.model import EPSILON_NAME, Automaton, LabeledAutomaton, Labeling
from config.config_manager import resolve_state_cap

EventPair = Tuple[Optional[int], Optional[int]]


class ProductAutomaton:
    """Reachable part of CC(S1, S2) with pair provenance"""

    def __init__(self, system: LabeledAutomaton, pairs: Sequence[Tuple[int, int]],
                 event_pairs: Sequence[EventPair], left: LabeledAutomaton, right: LabeledAutomaton):
        self.system = system
        self.pairs: Tuple[Tuple[int, int], ...] = tuple(pairs)
        self.event_pairs: Tuple[EventPair, ...] = tuple(event_pairs)
        self.left = left
        self.right = right
        self._index = {pair: i for i, pair in enumerate(self.pairs)}

    @property
    def automaton(self) -> Automaton:
        return self.system.automaton

    @property
    def labeling(self) -> Labeling:
        return self.system.labeling

    @property
    def num_states(self) -> int:
        return len(self.pairs)

    def index_of(self, left_state: int, right_state: int) -> Optional[int]:
        return self._index.get((left_state, right_state))

    def pair_names(self, index: int) -> Tuple[str, str]:
        left_state, right_state = self.pairs[index]
        return self.left.state_names[left_state], self.right.state_names[right_state]


def _event_name(left: LabeledAutomaton, right: LabeledAutomaton, pair: EventPair) -> str:
    first = EPSILON_NAME if pair[0] is None else left.automaton.event_names[pair[0]]
    second = EPSILON_NAME if pair[1] is None else right.automaton.event_names[pair[1]]
    return f"({first},{second})"


def concurrent_composition(left: LabeledAutomaton, right: LabeledAutomaton,
                           state_cap: Optional[int] = None) -> ProductAutomaton:
    """
    Compute the reachable part of the concurrent composition CC(left, right)

    Observable events synchronize on equal labels; unobservable events of either
    side move alone and stay unobservable.

    Args:
        left: First LFSA
        right: Second LFSA
        state_cap: Maximum number of product states (defaults to the configured cap)

    Returns:
        The product automaton

    Raises:
        ValidationError: If the label alphabets differ
        StateCapExceeded: If the product grows beyond the cap
    """
    if set(left.label_names) != set(right.label_names):
        raise ValidationError(
            f"Label alphabets differ: {sorted(left.label_names)} vs {sorted(right.label_names)}")
    cap = resolve_state_cap(state_cap)
    label_names = left.label_names
    left_auto, right_auto = left.automaton, right.automaton
    left_labels, right_labels = left.labeling, right.labeling

    def label_name(labeling: Labeling, event: int) -> Optional[str]:
        label = labeling.label_of(event)
        return None if label is None else labeling.label_names[label]

    # Event table: synchronized pairs, then left-alone, then right-alone
    event_pairs: List[EventPair] = []
    for e1 in range(left_auto.num_events):
        name = label_name(left_labels, e1)
        if name is None:
            continue
        for e2 in range(right_auto.num_events):
            if label_name(right_labels, e2) == name:
                event_pairs.append((e1, e2))
    event_pairs.extend((e1, None) for e1 in sorted(left_labels.unobservable_events()))
    event_pairs.extend((None, e2) for e2 in sorted(right_labels.unobservable_events()))
    event_index = {pair: i for i, pair in enumerate(event_pairs)}
    event_labels = []
    for e1, e2 in event_pairs:
        if e1 is None or e2 is None:
            event_labels.append(None)
        else:
            event_labels.append(label_names.index(label_name(left_labels, e1)))

    pairs: List[Tuple[int, int]] = []
    index: Dict[Tuple[int, int], int] = {}
    transitions = set()
    queue = deque()

    def intern(pair: Tuple[int, int]) -> int:
        if pair not in index:
            if len(pairs) >= cap:
                raise StateCapExceeded("Concurrent composition", cap)
            index[pair] = len(pairs)
            pairs.append(pair)
            queue.append(pair)
        return index[pair]

    initial = [intern((q1, q2)) for q1 in sorted(left_auto.initial)
               for q2 in sorted(right_auto.initial)]

    while queue:
        q1, q2 = queue.popleft()
        source = index[(q1, q2)]
        for e1 in left_auto.enabled_events(q1):
            name = label_name(left_labels, e1)
            if name is None:
                for t1 in sorted(left_auto.successors(q1, e1)):
                    transitions.add((source, event_index[(e1, None)], intern((t1, q2))))
                continue
            for e2 in right_auto.enabled_events(q2):
                if label_name(right_labels, e2) != name:
                    continue
                for t1 in sorted(left_auto.successors(q1, e1)):
                    for t2 in sorted(right_auto.successors(q2, e2)):
                        transitions.add((source, event_index[(e1, e2)], intern((t1, t2))))
        for e2 in right_auto.enabled_events(q2):
            if label_name(right_labels, e2) is None:
                for t2 in sorted(right_auto.successors(q2, e2)):
                    transitions.add((source, event_index[(None, e2)], intern((q1, t2))))

    state_names = [f"({left_auto.state_names[q1]},{right_auto.state_names[q2]})" for q1, q2 in pairs]
    automaton = Automaton(state_names, [_event_name(left, right, pair) for pair in event_pairs],
                          transitions, initial, allow_empty_initial=True)
    system = LabeledAutomaton(automaton, Labeling(label_names, event_labels))
    logging.debug(f"Concurrent composition built: {len(pairs)} states, {len(transitions)} transitions")
    return ProductAutomaton(system, pairs, event_pairs, left, right)


def self_composition(system: LabeledAutomaton, state_cap: Optional[int] = None) -> ProductAutomaton:
    """CC(S) = CC(S, S)"""
    return concurrent_composition(system, system, state_cap)
