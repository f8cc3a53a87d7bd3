"""
Automaton model for HOObs
Finite-state automata, labelings, projections and agents
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from automata.errors import ValidationError

# Reserved spelling of the empty label in files and on the command line
EPSILON_NAME = "eps"

Transition = Tuple[int, int, int]


def _check_unique(names: Sequence[str], what: str) -> None:
    seen = set()
    for name in names:
        if name in seen:
            raise ValidationError(f"Duplicate {what} name: {name!r}")
        seen.add(name)


class Automaton:
    """Nondeterministic finite-state automaton with interned states and events"""

    def __init__(self, state_names: Sequence[str], event_names: Sequence[str],
                 transitions: Iterable[Transition], initial: Iterable[int],
                 allow_empty_initial: bool = False):
        """
        Build an automaton from name tables and integer transitions

        Args:
            state_names: State names; the position of a name is its StateId
            event_names: Event names; the position of a name is its EventId
            transitions: (source, event, target) id triples
            initial: Initial StateIds
            allow_empty_initial: Accept an empty initial set (empty behaviour)
        """
        self._state_names = tuple(str(name) for name in state_names)
        self._event_names = tuple(str(name) for name in event_names)
        _check_unique(self._state_names, "state")
        _check_unique(self._event_names, "event")

        n_states = len(self._state_names)
        n_events = len(self._event_names)
        self._transitions = frozenset(transitions)
        for source, event, target in self._transitions:
            if not (0 <= source < n_states and 0 <= target < n_states):
                raise ValidationError(f"Transition endpoint out of range: {(source, event, target)}")
            if not 0 <= event < n_events:
                raise ValidationError(f"Transition event out of range: {(source, event, target)}")

        self._initial = frozenset(initial)
        if not self._initial and not allow_empty_initial:
            raise ValidationError("Initial state set must be nonempty")
        for state in self._initial:
            if not 0 <= state < n_states:
                raise ValidationError(f"Initial state out of range: {state}")

        successors: Dict[Tuple[int, int], set] = {}
        for source, event, target in self._transitions:
            successors.setdefault((source, event), set()).add(target)
        self._successors = {key: frozenset(targets) for key, targets in successors.items()}

        enabled: Dict[int, set] = {}
        for source, event in self._successors:
            enabled.setdefault(source, set()).add(event)
        self._enabled = {state: tuple(sorted(events)) for state, events in enabled.items()}

        self._state_index = {name: i for i, name in enumerate(self._state_names)}
        self._event_index = {name: i for i, name in enumerate(self._event_names)}

    @classmethod
    def from_names(cls, states: Sequence[str], events: Sequence[str],
                   transitions: Iterable[Tuple[str, str, str]], initial: Iterable[str],
                   allow_empty_initial: bool = False) -> "Automaton":
        """
        Build an automaton from named transitions

        Raises:
            ValidationError: If a transition or initial state names something undeclared
        """
        state_index = {name: i for i, name in enumerate(states)}
        event_index = {name: i for i, name in enumerate(events)}
        triples = []
        for source, event, target in transitions:
            for state in (source, target):
                if state not in state_index:
                    raise ValidationError(f"Unknown state in transition: {state!r}")
            if event not in event_index:
                raise ValidationError(f"Unknown event in transition: {event!r}")
            triples.append((state_index[source], event_index[event], state_index[target]))
        initial_ids = []
        for state in initial:
            if state not in state_index:
                raise ValidationError(f"Unknown initial state: {state!r}")
            initial_ids.append(state_index[state])
        return cls(states, events, triples, initial_ids, allow_empty_initial)

    @property
    def state_names(self) -> Tuple[str, ...]:
        """Get the state name table"""
        return self._state_names

    @property
    def event_names(self) -> Tuple[str, ...]:
        """Get the event name table"""
        return self._event_names

    @property
    def transitions(self) -> FrozenSet[Transition]:
        """Get the transition relation"""
        return self._transitions

    @property
    def initial(self) -> FrozenSet[int]:
        """Get the initial states"""
        return self._initial

    @property
    def num_states(self) -> int:
        return len(self._state_names)

    @property
    def num_events(self) -> int:
        return len(self._event_names)

    @property
    def is_empty(self) -> bool:
        """True when the automaton has no initial state and so generates nothing"""
        return not self._initial

    def state_id(self, name: str) -> int:
        try:
            return self._state_index[name]
        except KeyError:
            raise ValidationError(f"Unknown state: {name!r}") from None

    def event_id(self, name: str) -> int:
        try:
            return self._event_index[name]
        except KeyError:
            raise ValidationError(f"Unknown event: {name!r}") from None

    def has_state(self, name: str) -> bool:
        return name in self._state_index

    def successors(self, state: int, event: int) -> FrozenSet[int]:
        """Get δ(state, event)"""
        return self._successors.get((state, event), frozenset())

    def enabled_events(self, state: int) -> Tuple[int, ...]:
        """Get the events defined at a state, in EventId order"""
        return self._enabled.get(state, ())

    def sorted_transitions(self) -> List[Transition]:
        return sorted(self._transitions)

    def is_deterministic(self) -> bool:
        """Check for a single initial state and at most one successor per (state, event)"""
        if len(self._initial) > 1:
            return False
        return all(len(targets) == 1 for targets in self._successors.values())

    def _key(self):
        return (self._state_names, self._event_names, self._transitions, self._initial)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Automaton):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return (f"Automaton(states={self.num_states}, events={self.num_events}, "
                f"transitions={len(self._transitions)}, initial={sorted(self._initial)})")


class Labeling:
    """Labeling function from events to labels or ε (None)"""

    def __init__(self, label_names: Sequence[str], event_labels: Sequence[Optional[int]]):
        """
        Args:
            label_names: The label alphabet; the position of a name is its LabelId
            event_labels: Per EventId, the LabelId of the event or None for ε
        """
        self._label_names = tuple(str(name) for name in label_names)
        _check_unique(self._label_names, "label")
        if EPSILON_NAME in self._label_names:
            raise ValidationError(f"{EPSILON_NAME!r} is reserved and cannot be a label name")
        self._event_labels = tuple(event_labels)
        for label in self._event_labels:
            if label is not None and not 0 <= label < len(self._label_names):
                raise ValidationError(f"Label id out of range: {label}")
        self._label_index = {name: i for i, name in enumerate(self._label_names)}

    @classmethod
    def from_map(cls, automaton: Automaton, mapping: Mapping[str, Optional[str]],
                 label_names: Optional[Sequence[str]] = None) -> "Labeling":
        """
        Build a labeling from an event-name to label-name map

        Events map to None or "eps" for ε. When no alphabet is given, labels are
        ordered by their first use in event order.
        """
        for event in mapping:
            automaton.event_id(event)
        images = []
        for event in automaton.event_names:
            if event not in mapping:
                raise ValidationError(f"Labeling has no image for event {event!r}")
            label = mapping[event]
            images.append(None if label in (None, EPSILON_NAME) else str(label))
        if label_names is None:
            label_names = list(dict.fromkeys(label for label in images if label is not None))
        index = {name: i for i, name in enumerate(label_names)}
        event_labels = []
        for label in images:
            if label is not None and label not in index:
                raise ValidationError(f"Label {label!r} is not in the label alphabet")
            event_labels.append(None if label is None else index[label])
        return cls(label_names, event_labels)

    @property
    def label_names(self) -> Tuple[str, ...]:
        return self._label_names

    @property
    def event_labels(self) -> Tuple[Optional[int], ...]:
        return self._event_labels

    @property
    def num_labels(self) -> int:
        return len(self._label_names)

    def label_of(self, event: int) -> Optional[int]:
        """Get ℓ(event) as a LabelId, None meaning ε"""
        return self._event_labels[event]

    def label_id(self, name: str) -> int:
        try:
            return self._label_index[name]
        except KeyError:
            raise ValidationError(f"Unknown label: {name!r}") from None

    def observable_events(self) -> FrozenSet[int]:
        return frozenset(e for e, label in enumerate(self._event_labels) if label is not None)

    def unobservable_events(self) -> FrozenSet[int]:
        return frozenset(e for e, label in enumerate(self._event_labels) if label is None)

    def sorted_label_ids(self) -> List[int]:
        """LabelIds in lexicographic order of their names (BFS exploration order)"""
        return sorted(range(len(self._label_names)), key=lambda i: self._label_names[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Labeling):
            return NotImplemented
        return (self._label_names, self._event_labels) == (other._label_names, other._event_labels)

    def __hash__(self) -> int:
        return hash((self._label_names, self._event_labels))


@dataclass(frozen=True)
class Projection:
    """Natural projection onto a set of observable events"""
    observable: FrozenSet[str]

    def __init__(self, observable: Iterable[str]):
        object.__setattr__(self, "observable", frozenset(observable))

    def to_labeling(self, automaton: Automaton) -> Labeling:
        """Labeling with ℓ(e)=e for observable e and ε otherwise"""
        for event in self.observable:
            automaton.event_id(event)
        label_names = [e for e in automaton.event_names if e in self.observable]
        index = {name: i for i, name in enumerate(label_names)}
        return Labeling(label_names, [index.get(e) for e in automaton.event_names])

    def project(self, events: Iterable[str]) -> Tuple[str, ...]:
        return tuple(e for e in events if e in self.observable)


class LabeledAutomaton:
    """An automaton together with a labeling of its events"""

    def __init__(self, automaton: Automaton, labeling: Labeling):
        if len(labeling.event_labels) != automaton.num_events:
            raise ValidationError(
                f"Labeling covers {len(labeling.event_labels)} events, "
                f"automaton has {automaton.num_events}")
        self._automaton = automaton
        self._labeling = labeling

    @classmethod
    def project(cls, automaton: Automaton, observable: Iterable[str]) -> "LabeledAutomaton":
        """Label an automaton with the projection onto `observable`"""
        return cls(automaton, Projection(observable).to_labeling(automaton))

    @property
    def automaton(self) -> Automaton:
        return self._automaton

    @property
    def labeling(self) -> Labeling:
        return self._labeling

    @property
    def label_names(self) -> Tuple[str, ...]:
        return self._labeling.label_names

    @property
    def state_names(self) -> Tuple[str, ...]:
        return self._automaton.state_names

    def label_ids(self, labels: Iterable[str]) -> List[int]:
        """Resolve a label word given by names"""
        return [self._labeling.label_id(label) for label in labels]

    def label_word(self, events: Iterable[int]) -> Tuple[str, ...]:
        """Apply ℓ to an event sequence, dropping ε"""
        word = []
        for event in events:
            label = self._labeling.label_of(event)
            if label is not None:
                word.append(self._labeling.label_names[label])
        return tuple(word)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledAutomaton):
            return NotImplemented
        return (self._automaton, self._labeling) == (other._automaton, other._labeling)

    def __hash__(self) -> int:
        return hash((self._automaton, self._labeling))


@dataclass(frozen=True)
class AgentProfile:
    """An agent and the events it observes"""
    name: str
    observable: FrozenSet[str]

    def __init__(self, name: str, observable: Iterable[str]):
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "observable", frozenset(observable))

    def projection(self) -> Projection:
        return Projection(self.observable)

    def validate_for(self, automaton: Automaton) -> None:
        """
        Raises:
            ValidationError: If the agent observes an event the automaton lacks
        """
        unknown = sorted(self.observable - set(automaton.event_names))
        if unknown:
            raise ValidationError(f"Agent {self.name!r} observes unknown events: {unknown}")

    def labeled(self, automaton: Automaton) -> LabeledAutomaton:
        """G_{A}: the automaton labeled by this agent's projection"""
        self.validate_for(automaton)
        return LabeledAutomaton(automaton, self.projection().to_labeling(automaton))
