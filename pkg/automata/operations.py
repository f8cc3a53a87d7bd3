"""
Core automaton operations for HOObs
Runs, reachability, unobservable closure and current-state estimation
"""

from collections import deque
from typing import FrozenSet, Iterable, Sequence

from automata.errors import ValidationError
from automata.graph import TransitionGraph
from automata.model import Automaton, LabeledAutomaton


def extended_transition(automaton: Automaton, source: Iterable[int],
                        word: Sequence[int]) -> FrozenSet[int]:
    """
    Compute δ(source, word) for a word of EventIds

    Args:
        automaton: The automaton
        source: Start states
        word: Event sequence

    Returns:
        The union of δ(q, word) over q in source

    Raises:
        ValidationError: If a state or event is unknown
    """
    current = frozenset(source)
    for state in current:
        if not 0 <= state < automaton.num_states:
            raise ValidationError(f"Unknown state id: {state}")
    for event in word:
        if not 0 <= event < automaton.num_events:
            raise ValidationError(f"Unknown event id: {event}")
        step = set()
        for state in current:
            step.update(automaton.successors(state, event))
        current = frozenset(step)
    return current


def extended_transition_by_name(automaton: Automaton, source: Iterable[str],
                                word: Sequence[str]) -> FrozenSet[str]:
    """Name-level wrapper around extended_transition"""
    states = extended_transition(automaton,
                                 [automaton.state_id(q) for q in source],
                                 [automaton.event_id(e) for e in word])
    return frozenset(automaton.state_names[q] for q in states)


def reachable_part(automaton: Automaton) -> Automaton:
    """
    Restrict an automaton to the states reachable from its initial states

    State order and the initial set are preserved.
    """
    reachable = TransitionGraph(automaton).reachable_states()
    kept = [q for q in range(automaton.num_states) if q in reachable]
    remap = {q: i for i, q in enumerate(kept)}
    transitions = [(remap[s], e, remap[t]) for s, e, t in automaton.transitions
                   if s in remap and t in remap]
    return Automaton([automaton.state_names[q] for q in kept], automaton.event_names,
                     transitions, [remap[q] for q in automaton.initial],
                     allow_empty_initial=automaton.is_empty)


def unobservable_closure(system: LabeledAutomaton, states: Iterable[int]) -> FrozenSet[int]:
    """
    Least superset of `states` closed under ε-labeled transitions

    Args:
        system: Labeled automaton
        states: Start set

    Returns:
        The unobservable reach of `states`
    """
    automaton = system.automaton
    silent = system.labeling.unobservable_events()
    closure = set(states)
    queue = deque(closure)
    while queue:
        state = queue.popleft()
        for event in automaton.enabled_events(state):
            if event not in silent:
                continue
            for target in automaton.successors(state, event):
                if target not in closure:
                    closure.add(target)
                    queue.append(target)
    return frozenset(closure)


def observable_step(system: LabeledAutomaton, states: Iterable[int], label: int) -> FrozenSet[int]:
    """States reached from `states` by one transition labeled `label`, before closure"""
    automaton = system.automaton
    labeling = system.labeling
    reached = set()
    for state in states:
        for event in automaton.enabled_events(state):
            if labeling.label_of(event) == label:
                reached.update(automaton.successors(state, event))
    return frozenset(reached)


def observer_successor(system: LabeledAutomaton, states: Iterable[int], label: int) -> FrozenSet[int]:
    """The observer move δ_obs(X, σ): one σ-step followed by unobservable closure"""
    return unobservable_closure(system, observable_step(system, states, label))


def current_state_estimate(system: LabeledAutomaton, labels: Sequence[int]) -> FrozenSet[int]:
    """
    Compute M(𝒮, α), the states consistent with observing α

    Args:
        system: Labeled automaton
        labels: Label sequence as LabelIds

    Returns:
        The current-state estimate; empty iff α is not generated
    """
    for label in labels:
        if not 0 <= label < system.labeling.num_labels:
            raise ValidationError(f"Unknown label id: {label}")
    estimate = unobservable_closure(system, system.automaton.initial)
    for label in labels:
        if not estimate:
            break
        estimate = observer_successor(system, estimate, label)
    return estimate
