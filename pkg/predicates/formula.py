"""
Predicate formulas for HOObs
Leveled predicates over flattened estimates
"""

from dataclasses import dataclass
from typing import Any, FrozenSet, Iterable, Tuple, Union

from automata.errors import ValidationError
from highorder.nested import FlattenedEstimate


def _state_set(states: Iterable[int]) -> FrozenSet[int]:
    result = frozenset(states)
    for state in result:
        if not isinstance(state, int) or state < 0:
            raise ValidationError(f"Invalid state id in predicate: {state!r}")
    return result


def _cardinality(k: Any) -> int:
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise ValidationError(f"Cardinality bound must be a non-negative integer, got {k!r}")
    return k


class PredicateFormula:
    """Base class of the predicate tree"""

    @property
    def level(self) -> int:
        raise NotImplementedError

    def holds(self, value: FrozenSet[Any]) -> bool:
        """Evaluate on a raw nested frozenset of matching depth"""
        raise NotImplementedError

    def max_state(self) -> int:
        """Largest StateId mentioned, -1 when none"""
        return -1


class Atom(PredicateFormula):
    """Level-1 predicate on a set of states"""

    @property
    def level(self) -> int:
        return 1


@dataclass(frozen=True)
class Nonempty(Atom):
    def holds(self, value: FrozenSet[Any]) -> bool:
        return bool(value)


@dataclass(frozen=True)
class _StateSetAtom(Atom):
    states: FrozenSet[int]

    def __init__(self, states: Iterable[int]):
        object.__setattr__(self, "states", _state_set(states))

    def max_state(self) -> int:
        return max(self.states, default=-1)


@dataclass(frozen=True, init=False)
class SubsetOf(_StateSetAtom):
    def holds(self, value: FrozenSet[Any]) -> bool:
        return value <= self.states


@dataclass(frozen=True, init=False)
class NotSubsetOf(_StateSetAtom):
    def holds(self, value: FrozenSet[Any]) -> bool:
        return not value <= self.states


@dataclass(frozen=True, init=False)
class Equals(_StateSetAtom):
    def holds(self, value: FrozenSet[Any]) -> bool:
        return value == self.states


@dataclass(frozen=True)
class _CardAtom(Atom):
    k: int

    def __init__(self, k: int):
        object.__setattr__(self, "k", _cardinality(k))


@dataclass(frozen=True, init=False)
class CardEq(_CardAtom):
    def holds(self, value: FrozenSet[Any]) -> bool:
        return len(value) == self.k


@dataclass(frozen=True, init=False)
class CardGe(_CardAtom):
    def holds(self, value: FrozenSet[Any]) -> bool:
        return len(value) >= self.k


@dataclass(frozen=True, init=False)
class CardLe(_CardAtom):
    def holds(self, value: FrozenSet[Any]) -> bool:
        return len(value) <= self.k


@dataclass(frozen=True)
class SupersetAnyOf(Atom):
    """The set contains some member of a family of 1- or 2-element sets"""
    family: FrozenSet[FrozenSet[int]]

    def __init__(self, family: Iterable[Iterable[int]]):
        members = frozenset(_state_set(member) for member in family)
        for member in members:
            if len(member) not in (1, 2):
                raise ValidationError(
                    f"superset_any members must have 1 or 2 states, got {sorted(member)}")
        object.__setattr__(self, "family", members)

    def holds(self, value: FrozenSet[Any]) -> bool:
        return any(member <= value for member in self.family)

    def max_state(self) -> int:
        return max((max(member) for member in self.family), default=-1)


@dataclass(frozen=True)
class _Lift(PredicateFormula):
    inner: PredicateFormula

    @property
    def level(self) -> int:
        return self.inner.level + 1

    def max_state(self) -> int:
        return self.inner.max_state()


@dataclass(frozen=True)
class Exists(_Lift):
    def holds(self, value: FrozenSet[Any]) -> bool:
        return any(self.inner.holds(member) for member in value)


@dataclass(frozen=True)
class Forall(_Lift):
    def holds(self, value: FrozenSet[Any]) -> bool:
        return all(self.inner.holds(member) for member in value)


@dataclass(frozen=True)
class _Junction(PredicateFormula):
    children: Tuple[PredicateFormula, ...]

    def __init__(self, *children: PredicateFormula):
        if len(children) == 1 and isinstance(children[0], (list, tuple)):
            children = tuple(children[0])
        if not children:
            raise ValidationError(f"{type(self).__name__} needs at least one operand")
        levels = {child.level for child in children}
        if len(levels) != 1:
            raise ValidationError(f"{type(self).__name__} operands have different levels {sorted(levels)}")
        object.__setattr__(self, "children", tuple(children))

    @property
    def level(self) -> int:
        return self.children[0].level

    def max_state(self) -> int:
        return max(child.max_state() for child in self.children)


@dataclass(frozen=True, init=False)
class And(_Junction):
    def holds(self, value: FrozenSet[Any]) -> bool:
        return all(child.holds(value) for child in self.children)


@dataclass(frozen=True, init=False)
class Or(_Junction):
    def holds(self, value: FrozenSet[Any]) -> bool:
        return any(child.holds(value) for child in self.children)


@dataclass(frozen=True)
class Not(PredicateFormula):
    inner: PredicateFormula

    @property
    def level(self) -> int:
        return self.inner.level

    def holds(self, value: FrozenSet[Any]) -> bool:
        return not self.inner.holds(value)

    def max_state(self) -> int:
        return self.inner.max_state()


def evaluate(predicate: PredicateFormula, value: Union[FlattenedEstimate, Iterable[int]]) -> bool:
    """
    Evaluate a predicate on an estimate

    Args:
        predicate: The formula
        value: A FlattenedEstimate, or a plain set of StateIds for level 1

    Raises:
        ValidationError: If the predicate level differs from the estimate depth
    """
    if not isinstance(value, FlattenedEstimate):
        value = FlattenedEstimate.build(value, 1)
    if predicate.level != value.depth:
        raise ValidationError(
            f"Predicate of level {predicate.level} cannot be evaluated on a depth-{value.depth} estimate")
    return predicate.holds(value.value)
