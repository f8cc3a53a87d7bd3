"""
Named properties for HOObs
Builtin predicate kinds and recognition of detector-verifiable shapes
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Any, FrozenSet, Iterable, Mapping, NamedTuple, Optional, Tuple, Union

from automata.errors import ValidationError
from predicates.formula import (And, CardEq, CardGe, Equals, Exists, Forall, Nonempty, Not,
                                NotSubsetOf, Or, PredicateFormula, SubsetOf, SupersetAnyOf)

BUILTIN_KINDS = (
    "cso",
    "critical_observability",
    "determinism",
    "t_det",
    "hoo_a",
    "hoo_b",
    "hoo_c",
    "order3_cso",
    "strong_cso",
    "confusion",
)


@dataclass(frozen=True)
class ScsoPredicate:
    """Strong current-state opacity on product components (q, q') with None for ◇"""
    secrets: FrozenSet[int]
    nonsecrets: FrozenSet[int]

    def __init__(self, secrets: Iterable[int], nonsecrets: Iterable[int]):
        secrets, nonsecrets = frozenset(secrets), frozenset(nonsecrets)
        if secrets & nonsecrets:
            raise ValidationError(f"States {sorted(secrets & nonsecrets)} are both secret and non-secret")
        object.__setattr__(self, "secrets", secrets)
        object.__setattr__(self, "nonsecrets", nonsecrets)

    @property
    def level(self) -> int:
        return 1

    def holds(self, pairs: Iterable[Tuple[int, Optional[int]]]) -> bool:
        """
        Every secret q paired with ◇ is also paired with some non-secret state
        """
        pairs = list(pairs)
        covered = {q for q, partner in pairs if partner is not None}
        return all(q in covered for q, partner in pairs if partner is None and q in self.secrets)

    def holds_for_product_state(self, state: int, nonsecret_estimate: FrozenSet[int]) -> bool:
        """A secret system state must come with a nonempty non-secret estimate"""
        return state not in self.secrets or bool(nonsecret_estimate)


Predicate = Union[PredicateFormula, ScsoPredicate]


class TDetShape(NamedTuple):
    """A predicate the detector stage can verify"""
    family: FrozenSet[FrozenSet[int]]
    wrappers: int
    negated: bool = False


def _states_param(params: Mapping[str, Any], key: str, kind: str, num_states: int) -> FrozenSet[int]:
    if key not in params:
        raise ValidationError(f"Property kind {kind!r} needs parameter {key!r}")
    states = frozenset(params[key])
    for state in states:
        if not isinstance(state, int) or not 0 <= state < num_states:
            raise ValidationError(f"Parameter {key!r} of {kind!r} has unknown state id {state!r}")
    return states


def _family_param(params: Mapping[str, Any], kind: str, num_states: int) -> FrozenSet[FrozenSet[int]]:
    if "t" not in params:
        raise ValidationError(f"Property kind {kind!r} needs parameter 't'")
    family = frozenset(frozenset(member) for member in params["t"])
    if not family:
        raise ValidationError(f"Parameter 't' of {kind!r} must not be empty")
    for member in family:
        for state in member:
            if not isinstance(state, int) or not 0 <= state < num_states:
                raise ValidationError(f"Parameter 't' of {kind!r} has unknown state id {state!r}")
    return family


def builtin(kind: str, params: Optional[Mapping[str, Any]], num_states: int) -> Predicate:
    """
    Build a named property

    Args:
        kind: One of BUILTIN_KINDS
        params: Resolved parameters: "secrets", "critical" (state id sets),
            "t" (family of 1- or 2-element state id sets), "order" (t_det only)
        num_states: |Q| of the system

    Returns:
        The predicate formula, or a ScsoPredicate for strong_cso

    Raises:
        ValidationError: On an unknown kind or bad parameters
    """
    params = params or {}
    all_states = frozenset(range(num_states))
    if kind == "cso":
        return NotSubsetOf(_states_param(params, "secrets", kind, num_states))
    if kind == "critical_observability":
        critical = _states_param(params, "critical", kind, num_states)
        return Or(SubsetOf(critical), SubsetOf(all_states - critical))
    if kind == "determinism":
        return CardEq(1)
    if kind == "t_det":
        order = params.get("order", 2)
        if isinstance(order, bool) or not isinstance(order, int) or order < 2:
            raise ValidationError(f"t_det needs an integer order of at least 2, got {order!r}")
        formula: PredicateFormula = And(Forall(Nonempty()),
                                        Exists(SupersetAnyOf(_family_param(params, kind, num_states))))
        for _ in range(order - 2):
            formula = Forall(formula)
        return formula
    if kind == "hoo_a":
        return And(Forall(Nonempty()), Exists(SupersetAnyOf(_family_param(params, kind, num_states))))
    if kind == "hoo_b":
        return And(Forall(Nonempty()), Exists(CardGe(2)))
    if kind == "hoo_c":
        if num_states < 1:
            raise ValidationError("hoo_c needs at least one state")
        return And(*[Exists(Not(Equals({q}))) for q in range(num_states)])
    if kind == "order3_cso":
        return Forall(Exists(CardGe(2)))
    if kind == "strong_cso":
        secrets = _states_param(params, "secrets", kind, num_states)
        return ScsoPredicate(secrets, all_states - secrets)
    if kind == "confusion":
        return Exists(Not(SupersetAnyOf(_family_param(params, kind, num_states))))
    raise ValidationError(f"Unknown property kind {kind!r}, expected one of {BUILTIN_KINDS}")


def _order2_family(predicate: PredicateFormula, num_states: int) -> Optional[FrozenSet[FrozenSet[int]]]:
    if isinstance(predicate, And) and len(predicate.children) == 2:
        rest = [child for child in predicate.children if child != Forall(Nonempty())]
        if len(rest) != 1:
            return None
        predicate = rest[0]
    if not isinstance(predicate, Exists):
        return None
    atom = predicate.inner
    if isinstance(atom, SupersetAnyOf):
        return atom.family
    if isinstance(atom, CardGe) and atom.k in (1, 2):
        return frozenset(frozenset(c) for c in combinations(range(num_states), atom.k))
    return None


def t_det_family(predicate: Predicate, num_states: int) -> Optional[TDetShape]:
    """
    Recognize predicates whose verdict only depends on 1- and 2-element
    components, so the detector stage gives the observer stage's answer

    Returns:
        The shape (family T, number of Forall wrappers, negation) or None
    """
    if not isinstance(predicate, PredicateFormula):
        return None
    if isinstance(predicate, Not):
        family = _order2_family(predicate.inner, num_states)
        return TDetShape(family, 0, True) if family else None
    wrappers = 0
    while isinstance(predicate, Forall) and _order2_family(predicate, num_states) is None:
        predicate = predicate.inner
        wrappers += 1
    family = _order2_family(predicate, num_states)
    if not family:
        return None
    return TDetShape(family, wrappers)
