"""
Nested states for HOObs
Recursive observer states of the order-n pipeline and their flattened estimates
"""

from dataclasses import dataclass
from typing import Any, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from automata.errors import StructuralError, ValidationError


@dataclass(frozen=True)
class NestedState:
    """
    Either Base(set of StateId) or Level(set of (StateId, NestedState) pairs)

    A Base state has depth 1; a Level state is one deeper than its children,
    which all share one depth.
    """
    base: Optional[FrozenSet[int]] = None
    pairs: Optional[FrozenSet[Tuple[int, "NestedState"]]] = None
    depth: int = 1

    @classmethod
    def of_base(cls, states: Iterable[int]) -> "NestedState":
        return cls(base=frozenset(states), depth=1)

    @classmethod
    def of_pairs(cls, pairs: Iterable[Tuple[int, "NestedState"]]) -> "NestedState":
        """
        Raises:
            StructuralError: If the pair set is empty or mixes depths
        """
        pair_set = frozenset(pairs)
        if not pair_set:
            raise StructuralError("A Level nested state needs at least one pair")
        depths = {child.depth for _, child in pair_set}
        if len(depths) != 1:
            raise StructuralError(f"Level nested state mixes depths {sorted(depths)}")
        return cls(pairs=pair_set, depth=depths.pop() + 1)

    @property
    def is_base(self) -> bool:
        return self.base is not None

    def sort_key(self) -> Tuple:
        if self.is_base:
            return tuple(sorted(self.base))
        return tuple(sorted((q, child.sort_key()) for q, child in self.pairs))

    def sorted_pairs(self) -> List[Tuple[int, "NestedState"]]:
        return sorted(self.pairs, key=lambda pair: (pair[0], pair[1].sort_key()))

    def render(self, names: Sequence[str]) -> str:
        """Canonical text, e.g. {(2,{2}),(3,{3,4,5})}"""
        if self.is_base:
            return "{" + ",".join(names[q] for q in sorted(self.base)) + "}"
        return "{" + ",".join(f"({names[q]},{child.render(names)})"
                              for q, child in self.sorted_pairs()) + "}"

    def iter_nonempty_violations(self) -> Iterator["NestedState"]:
        """Yield every empty component at any depth"""
        if self.is_base:
            if not self.base:
                yield self
            return
        if not self.pairs:
            yield self
        for _, child in self.pairs:
            yield from child.iter_nonempty_violations()


@dataclass(frozen=True)
class FlattenedEstimate:
    """
    Element of Pow_k(Q): nested frozensets with StateIds at depth 1
    """
    value: FrozenSet[Any]
    depth: int

    @classmethod
    def build(cls, obj: Iterable[Any], depth: int) -> "FlattenedEstimate":
        """
        Build from nested iterables, e.g. build([[0, 1], [2]], 2)

        Raises:
            ValidationError: If depth is not positive
        """
        if depth < 1:
            raise ValidationError(f"Estimate depth must be positive, got {depth}")

        def freeze(item: Any, level: int) -> FrozenSet[Any]:
            if level == 1:
                return frozenset(int(q) for q in item)
            return frozenset(freeze(child, level - 1) for child in item)

        return cls(freeze(obj, depth), depth)

    @classmethod
    def build_named(cls, obj: Iterable[Any], names: Sequence[str], depth: int) -> "FlattenedEstimate":
        """Like build, but with state names at depth 1"""
        index = {name: i for i, name in enumerate(names)}

        def resolve(item: Any, level: int) -> Any:
            if level == 1:
                try:
                    return [index[str(name)] for name in item]
                except KeyError as e:
                    raise ValidationError(f"Unknown state name: {e.args[0]!r}") from None
            return [resolve(child, level - 1) for child in item]

        return cls.build(resolve(obj, depth), depth)

    def members(self) -> List["FlattenedEstimate"]:
        """Members as estimates one level down (depth > 1 only)"""
        if self.depth == 1:
            raise ValidationError("A depth-1 estimate has no nested members")
        return [FlattenedEstimate(child, self.depth - 1) for child in self.value]

    def sort_key(self) -> Tuple:
        return _value_key(self.value, self.depth)

    def render(self, names: Sequence[str]) -> str:
        """Canonical text, e.g. {{0,1},{2}}"""
        return _render_value(self.value, self.depth, names)

    def to_names(self, names: Sequence[str]) -> Any:
        """Nested lists of state names in canonical order (JSON friendly)"""
        return _value_names(self.value, self.depth, names)


def _value_key(value: FrozenSet[Any], depth: int) -> Tuple:
    if depth == 1:
        return tuple(sorted(value))
    return tuple(sorted(_value_key(child, depth - 1) for child in value))


def _sorted_children(value: FrozenSet[Any], depth: int) -> List[FrozenSet[Any]]:
    return sorted(value, key=lambda child: _value_key(child, depth - 1))


def _render_value(value: FrozenSet[Any], depth: int, names: Sequence[str]) -> str:
    if depth == 1:
        return "{" + ",".join(names[q] for q in sorted(value)) + "}"
    return "{" + ",".join(_render_value(child, depth - 1, names)
                          for child in _sorted_children(value, depth)) + "}"


def _value_names(value: FrozenSet[Any], depth: int, names: Sequence[str]) -> Any:
    if depth == 1:
        return [names[q] for q in sorted(value)]
    return [_value_names(child, depth - 1, names) for child in _sorted_children(value, depth)]


def flatten_state(state: NestedState) -> FlattenedEstimate:
    """
    Replace every (q, X) pair by X, recursively

    Base sets pass through unchanged; the result has the input's depth.
    """
    return FlattenedEstimate(_flatten_value(state), state.depth)


def _flatten_value(state: NestedState) -> FrozenSet[Any]:
    if state.is_base:
        return state.base
    return frozenset(_flatten_value(child) for _, child in state.pairs)
