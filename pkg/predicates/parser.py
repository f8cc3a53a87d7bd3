"""
Predicate text format for HOObs
Lark grammar for the s-expression format of docs/predicate_grammar.md, and the renderer
"""

from typing import Callable, Dict, FrozenSet, List, Sequence

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, UnexpectedToken, VisitError

from automata.errors import ParseError, ValidationError
from predicates.formula import (And, CardEq, CardGe, CardLe, Equals, Exists, Forall, Nonempty, Not,
                                NotSubsetOf, Or, PredicateFormula, SubsetOf, SupersetAnyOf)

# Keywords end where a state name would end, so "nothing" is not "not" followed by "hing"
PREDICATE_GRAMMAR = r"""
    ?start: formula

    formula: NONEMPTY                          -> nonempty
           | "(" NONEMPTY ")"                  -> nonempty
           | "(" SET_OP state_set ")"          -> set_atom
           | "(" CARD_OP NATURAL ")"           -> card_atom
           | "(" SUPERSET_ANY family ")"       -> superset_any
           | "(" LIFT formula ")"              -> lift
           | "(" JUNCTION formula+ ")"         -> junction

    state_set: "{" STATE* "}"
    family: "{" state_set* "}"

    NONEMPTY.2: /nonempty(?![^\s(){}])/
    SET_OP.2: /(not_subset|subset|equals)(?![^\s(){}])/
    CARD_OP.2: /card(>=|<=|=)(?![^\s(){}])/
    SUPERSET_ANY.2: /superset_any(?![^\s(){}])/
    LIFT.2: /(exists|forall|not)(?![^\s(){}])/
    JUNCTION.2: /(and|or)(?![^\s(){}])/
    NATURAL.2: /[0-9]+(?![^\s(){}])/
    STATE: /[^\s(){}]+/

    %import common.WS
    %ignore WS
"""

_PARSER = Lark(PREDICATE_GRAMMAR, parser="lalr", propagate_positions=True)

_SET_ATOMS: Dict[str, Callable] = {
    "subset": SubsetOf,
    "not_subset": NotSubsetOf,
    "equals": Equals,
}
_CARD_ATOMS: Dict[str, Callable] = {
    "card=": CardEq,
    "card>=": CardGe,
    "card<=": CardLe,
}
_JUNCTIONS: Dict[str, Callable] = {"and": And, "or": Or}
_LIFTS: Dict[str, Callable] = {"exists": Exists, "forall": Forall, "not": Not}


@v_args(meta=True)
class _FormulaBuilder(Transformer):
    """Builds formulas bottom-up; construction errors carry the position of their '('"""

    def __init__(self, state_names: Sequence[str]):
        super().__init__()
        self.state_index = {name: i for i, name in enumerate(state_names)}

    def _build(self, meta, factory: Callable, *args) -> PredicateFormula:
        try:
            return factory(*args)
        except ValidationError as e:
            raise ParseError(str(e), meta.start_pos) from None

    def nonempty(self, meta, children):
        return Nonempty()

    def set_atom(self, meta, children):
        operator, states = children
        return self._build(meta, _SET_ATOMS[str(operator)], states)

    def card_atom(self, meta, children):
        operator, number = children
        return self._build(meta, _CARD_ATOMS[str(operator)], int(number))

    def superset_any(self, meta, children):
        _, family = children
        return self._build(meta, SupersetAnyOf, family)

    def lift(self, meta, children):
        operator, inner = children
        return self._build(meta, _LIFTS[str(operator)], inner)

    def junction(self, meta, children):
        operator, *operands = children
        return self._build(meta, _JUNCTIONS[str(operator)], *operands)

    def state_set(self, meta, children: List[Token]) -> FrozenSet[int]:
        states = set()
        for token in children:
            if str(token) not in self.state_index:
                raise ParseError(f"Unknown state name {str(token)!r}", token.start_pos)
            states.add(self.state_index[str(token)])
        return frozenset(states)

    def family(self, meta, children):
        return list(children)


def _error_position(error: UnexpectedInput, text: str) -> int:
    if isinstance(error, UnexpectedToken) and error.token.type == "$END":
        return len(text)
    position = getattr(error, "pos_in_stream", None)
    if position is None or position < 0:
        return len(text)
    return position


def parse_predicate(text: str, state_names: Sequence[str]) -> PredicateFormula:
    """
    Parse predicate text such as "(forall (exists (card>= 2)))"

    Args:
        text: Predicate source
        state_names: Names of the system states, resolved to StateIds

    Raises:
        ParseError: On a syntax error, an unknown state name or inconsistent levels
    """
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as e:
        position = _error_position(e, text)
        found = "end of input" if position >= len(text) else repr(text[position:].split(None, 1)[0])
        raise ParseError(f"Unexpected {found}", position) from None
    try:
        return _FormulaBuilder(state_names).transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ParseError):
            raise e.orig_exc from None
        raise


def _render_set(states: FrozenSet[int], state_names: Sequence[str]) -> str:
    return "{" + " ".join(state_names[q] for q in sorted(states)) + "}"


def render_predicate(predicate: PredicateFormula, state_names: Sequence[str]) -> str:
    """Canonical text of a formula; parse_predicate reads it back"""
    if isinstance(predicate, Nonempty):
        return "nonempty"
    for operator, cls in _SET_ATOMS.items():
        if type(predicate) is cls:
            return f"({operator} {_render_set(predicate.states, state_names)})"
    for operator, cls in _CARD_ATOMS.items():
        if type(predicate) is cls:
            return f"({operator} {predicate.k})"
    if isinstance(predicate, SupersetAnyOf):
        members = sorted(predicate.family, key=lambda member: sorted(member))
        return "(superset_any {" + " ".join(_render_set(m, state_names) for m in members) + "})"
    for operator, cls in _LIFTS.items():
        if type(predicate) is cls:
            return f"({operator} {render_predicate(predicate.inner, state_names)})"
    for operator, cls in _JUNCTIONS.items():
        if type(predicate) is cls:
            children = " ".join(render_predicate(child, state_names) for child in predicate.children)
            return f"({operator} {children})"
    raise ValidationError(f"Cannot render predicate {predicate!r}")
