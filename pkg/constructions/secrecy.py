"""
Strong-opacity transforms for HOObs
Non-secret sub-automaton and ◇-completion
"""

import logging
from typing import Iterable, List, Mapping, Optional, Sequence

from automata.errors import ValidationError
from automata.model import EPSILON_NAME, Automaton, LabeledAutomaton, Labeling

# File spelling of the ◇ sink state; DOT output prints it as ◇
DIAMOND_NAME = "<>"
DIAMOND_SYMBOL = "◇"


def nonsecret_subautomaton(system: LabeledAutomaton, secrets: Iterable[int]) -> LabeledAutomaton:
    """
    Remove all secret states and their transitions

    Args:
        system: The LFSA
        secrets: Secret StateIds

    Returns:
        The non-secret sub-automaton; its automaton reports `is_empty` when every
        initial state was secret
    """
    automaton = system.automaton
    secret_set = frozenset(secrets)
    for state in secret_set:
        if not 0 <= state < automaton.num_states:
            raise ValidationError(f"Unknown secret state id: {state}")
    kept = [q for q in range(automaton.num_states) if q not in secret_set]
    remap = {q: i for i, q in enumerate(kept)}
    transitions = [(remap[s], e, remap[t]) for s, e, t in automaton.transitions
                   if s in remap and t in remap]
    initial = [remap[q] for q in automaton.initial if q in remap]
    if not initial:
        logging.warning("Every initial state is secret: the non-secret behaviour is empty")
    sub = Automaton([automaton.state_names[q] for q in kept], automaton.event_names,
                    transitions, initial, allow_empty_initial=True)
    return LabeledAutomaton(sub, system.labeling)


def diamond_completion(s_ns: LabeledAutomaton, full_event_set: Sequence[str],
                       extra_labels: Optional[Mapping[str, Optional[str]]] = None) -> LabeledAutomaton:
    """
    Totalize an automaton with a fresh absorbing state ◇

    Every missing (state, event) move goes to ◇ and ◇ loops on every event.
    When the input has no initial state, ◇ becomes initial.

    Args:
        s_ns: The (non-secret) LFSA
        full_event_set: Events of the completed automaton, a superset of s_ns's events
        extra_labels: Labels of events not in s_ns ("eps" or None for ε)

    Raises:
        ValidationError: On a reserved-name clash, a missing event or a missing label
    """
    automaton = s_ns.automaton
    if automaton.has_state(DIAMOND_NAME):
        raise ValidationError(f"State name {DIAMOND_NAME!r} is reserved for the ◇ sink")
    missing = [e for e in automaton.event_names if e not in full_event_set]
    if missing:
        raise ValidationError(f"Events {missing} are not in the full event set")

    extra_labels = extra_labels or {}
    events = list(automaton.event_names) + [e for e in full_event_set if e not in automaton.event_names]
    label_names = list(s_ns.label_names)
    event_labels: List[Optional[int]] = list(s_ns.labeling.event_labels)
    for event in events[automaton.num_events:]:
        if event not in extra_labels:
            raise ValidationError(f"No label given for event {event!r}")
        label = extra_labels[event]
        if label in (None, EPSILON_NAME):
            event_labels.append(None)
            continue
        if label not in label_names:
            label_names.append(label)
        event_labels.append(label_names.index(label))

    diamond = automaton.num_states
    transitions = set(automaton.transitions)
    for state in range(automaton.num_states):
        for event in range(len(events)):
            if event >= automaton.num_events or not automaton.successors(state, event):
                transitions.add((state, event, diamond))
    for event in range(len(events)):
        transitions.add((diamond, event, diamond))

    initial = automaton.initial or frozenset([diamond])
    completed = Automaton(list(automaton.state_names) + [DIAMOND_NAME], events, transitions, initial)
    return LabeledAutomaton(completed, Labeling(label_names, event_labels))


def diamond_state_map(system: LabeledAutomaton, completed: LabeledAutomaton) -> List[Optional[int]]:
    """Map each state of a ◇-completed sub-automaton to the system's StateId, None for ◇"""
    mapping: List[Optional[int]] = []
    for name in completed.state_names:
        mapping.append(None if name == DIAMOND_NAME else system.automaton.state_id(name))
    return mapping
