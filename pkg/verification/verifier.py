"""
Property verification for HOObs
Order-1, strong-opacity and order-n checks with shortest witnesses
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from automata.errors import NotGeneratedError, ValidationError
from automata.model import Automaton, LabeledAutomaton
from constructions.composition import concurrent_composition
from constructions.observer import build_observer, explore_observer, render_state_set
from constructions.secrecy import (DIAMOND_SYMBOL, diamond_completion, diamond_state_map,
                                   nonsecret_subautomaton)
from highorder.nested import FlattenedEstimate, NestedState
from highorder.pipeline import AgentChain, PipelineCache, order_n_observer
from predicates.builtins import Predicate, ScsoPredicate, t_det_family
from predicates.formula import PredicateFormula, evaluate

SCSO_METHODS = ("han", "diamond")
VERIFY_STAGES = ("auto", "observer", "detector")


@dataclass(frozen=True)
class Witness:
    """A shortest, then lexicographically least, violating label sequence"""
    labels: Tuple[str, ...]
    state: Union[NestedState, FrozenSet]
    rendered: str
    estimate: Optional[FlattenedEstimate] = None

    @property
    def word(self) -> str:
        return ",".join(self.labels)


@dataclass
class Verdict:
    property_name: str
    holds: bool
    witness: Optional[Witness] = None
    stats: Dict[str, Any] = field(default_factory=dict)


def _path(parents: Dict[int, Optional[Tuple[int, int]]], index: int,
          label_names: Sequence[str]) -> Tuple[str, ...]:
    word: List[str] = []
    parent = parents[index]
    while parent is not None:
        index, label = parent
        word.append(label_names[label])
        parent = parents[index]
    return tuple(reversed(word))


def verify_order1(system: LabeledAutomaton, predicate: PredicateFormula, lazy: bool = True,
                  property_name: str = "property") -> Verdict:
    """
    Check a level-1 predicate on every reachable observer state

    Args:
        system: The observed LFSA
        predicate: Level-1 formula
        lazy: Stop exploring at the first violation
        property_name: Name reported in the verdict

    Returns:
        The verdict; the witness is the BFS path to the first violating state
    """
    if predicate.level != 1:
        raise ValidationError(f"Order-1 verification needs a level-1 predicate, got level {predicate.level}")
    parents: Dict[int, Optional[Tuple[int, int]]] = {}
    witness = None
    visited = 0
    for index, states, parent in explore_observer(system):
        parents[index] = parent
        visited += 1
        if witness is None and not predicate.holds(states):
            witness = Witness(_path(parents, index, system.label_names), NestedState.of_base(states),
                              render_state_set(states, system.state_names),
                              FlattenedEstimate(states, 1))
            if lazy:
                break
    stats = {"states_visited": visited, "stage": "observer", "observer_states": visited,
             "complete": witness is None or not lazy}
    logging.debug(f"Order-1 check of {property_name}: {visited} observer states visited")
    return Verdict(property_name, witness is None, witness, stats)


def _render_pair(state: str, partner: str) -> str:
    return f"({state},{partner})"


def verify_scso(system: LabeledAutomaton, secrets: Sequence[int], method: str = "han",
                property_name: str = "strong_cso") -> Verdict:
    """
    Check strong current-state opacity

    Args:
        system: The observed LFSA
        secrets: Secret StateIds
        method: "han" walks CC(S, Obs(S_NS)); "diamond" walks Obs(CC(S, S_NS^◇))

    Returns:
        The verdict; the witness state holds the product components that violate it
    """
    if method not in SCSO_METHODS:
        raise ValidationError(f"Unknown strong-opacity method {method!r}, expected one of {SCSO_METHODS}")
    automaton = system.automaton
    secret_set = frozenset(secrets)
    predicate = ScsoPredicate(secret_set, frozenset(range(automaton.num_states)) - secret_set)
    s_ns = nonsecret_subautomaton(system, secret_set)

    if method == "han":
        nonsecret_observer = build_observer(s_ns, completed=True)
        product = concurrent_composition(system, nonsecret_observer.to_labeled_automaton())
        check = _han_violations(product, nonsecret_observer, predicate)
    else:
        completed = diamond_completion(s_ns, automaton.event_names)
        product = concurrent_composition(system, completed)
        check = _diamond_violations(product, diamond_state_map(system, completed), predicate)

    parents: Dict[int, Optional[Tuple[int, int]]] = {}
    witness = None
    visited = 0
    for index, states, parent in explore_observer(product.system):
        parents[index] = parent
        visited += 1
        rendered = check(states)
        if rendered is not None:
            witness = Witness(_path(parents, index, system.label_names),
                              frozenset(rendered), ",".join(rendered))
            break
    stats = {"states_visited": visited, "stage": method, "observer_states": visited,
             "product_states": product.num_states}
    return Verdict(property_name, witness is None, witness, stats)


def _han_violations(product, nonsecret_observer, predicate: ScsoPredicate):
    names = product.left.state_names

    def check(states: FrozenSet[int]) -> Optional[List[str]]:
        bad = []
        for p in sorted(states):
            q, r = product.pairs[p]
            estimate = nonsecret_observer.states[r]
            if not predicate.holds_for_product_state(q, estimate):
                bad.append(_render_pair(names[q], "∅"))
        return bad or None

    return check


def _diamond_violations(product, state_map: Sequence[Optional[int]], predicate: ScsoPredicate):
    names = product.left.state_names

    def check(states: FrozenSet[int]) -> Optional[List[str]]:
        pairs = [(product.pairs[p][0], state_map[product.pairs[p][1]]) for p in states]
        if predicate.holds(pairs):
            return None
        ordered = sorted(product.pairs[p] for p in states)
        return [_render_pair(names[q], DIAMOND_SYMBOL if state_map[r] is None else names[state_map[r]])
                for q, r in ordered]

    return check


def _resolve_stage(chain: AgentChain, predicate: PredicateFormula, stage: str, num_states: int) -> str:
    if stage not in VERIFY_STAGES:
        raise ValidationError(f"Unknown stage {stage!r}, expected one of {VERIFY_STAGES}")
    shape = t_det_family(predicate, num_states) if len(chain) >= 2 else None
    if stage == "detector":
        if len(chain) < 2:
            raise ValidationError("The detector stage needs a chain of at least two agents")
        if shape is None:
            raise ValidationError("The detector stage only verifies T_Det-shaped predicates")
        return "detector"
    if stage == "auto":
        return "detector" if shape is not None else "observer"
    return stage


def verify_order_n(g: Automaton, chain: AgentChain, predicate: Predicate, stage: str = "auto",
                   state_cap: Optional[int] = None, cache: Optional[PipelineCache] = None,
                   property_name: str = "property", lazy: bool = True) -> Verdict:
    """
    Check a level-n predicate on every state of the order-n observer

    Args:
        g: The system automaton
        chain: Agents A1..An; the predicate level must be n
        predicate: The formula
        stage: "auto", "observer" or "detector"
        state_cap: Maximum number of states per construction
        cache: Optional level cache
        property_name: Name reported in the verdict
        lazy: For n = 1, stop at the first violation

    Raises:
        ValidationError: On a level mismatch or a detector stage the predicate does not permit
    """
    if isinstance(predicate, ScsoPredicate):
        raise ValidationError("Strong opacity is checked with verify_scso")
    if predicate.level != len(chain):
        raise ValidationError(
            f"Predicate level {predicate.level} does not match a chain of {len(chain)} agents")
    chain.validate_for(g)
    resolved = _resolve_stage(chain, predicate, stage, g.num_states)
    if len(chain) == 1:
        return verify_order1(chain[0].labeled(g), predicate, lazy, property_name)

    hoo = order_n_observer(g, chain, resolved, state_cap, cache)
    witness = None
    for index, nested in enumerate(hoo.nested):
        estimate = hoo.estimate(index)
        if not predicate.holds(estimate.value):
            witness = Witness(hoo.observer.path_to(index), nested,
                              nested.render(g.state_names), estimate)
            break
    stats = dict(hoo.stats)
    logging.debug(f"Order-{len(chain)} check of {property_name} ({resolved} stage): "
                  f"{'holds' if witness is None else 'violated'}")
    return Verdict(property_name, witness is None, witness, stats)


def estimate_at(g: Automaton, chain: AgentChain, alpha: Sequence[str], stage: str = "observer",
                state_cap: Optional[int] = None, cache: Optional[PipelineCache] = None) -> FlattenedEstimate:
    """
    Flattened order-n estimate after observing α

    Args:
        g: The system automaton
        chain: Agents A1..An
        alpha: Label names observed by An

    Raises:
        NotGeneratedError: If α is not in P_n(L(G))
    """
    hoo = order_n_observer(g, chain, stage, state_cap, cache)
    index = hoo.run(alpha)
    if index is None:
        raise NotGeneratedError(f"Label sequence {','.join(alpha) or 'ε'} is not generated")
    return hoo.estimate(index)


def evaluate_at(g: Automaton, chain: AgentChain, predicate: PredicateFormula,
                alpha: Sequence[str], stage: str = "observer") -> bool:
    """Evaluate a predicate on the estimate at α"""
    return evaluate(predicate, estimate_at(g, chain, alpha, stage))
