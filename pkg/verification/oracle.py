"""
Brute-force oracle for HOObs
Bounded trace enumeration evaluating nested estimates by their definition
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from automata.errors import ResourceError, ValidationError
from automata.model import Automaton
from config.config_manager import OracleSettings, config_manager
from highorder.nested import FlattenedEstimate
from highorder.pipeline import AgentChain
from predicates.builtins import Predicate, ScsoPredicate
from verification.verifier import Verdict, Witness

Trace = Tuple[str, ...]


@dataclass(frozen=True)
class OracleConfig:
    max_trace_len: int = 8
    stabilization_window: int = 2
    max_traces: int = 200000

    def __post_init__(self):
        if self.max_trace_len < 1:
            raise ValidationError(f"max_trace_len must be at least 1, got {self.max_trace_len}")
        if self.stabilization_window < 0:
            raise ValidationError(f"stabilization_window must be non-negative, got {self.stabilization_window}")
        if self.max_traces < 1:
            raise ValidationError(f"max_traces must be positive, got {self.max_traces}")

    @classmethod
    def from_settings(cls, settings: Optional[OracleSettings] = None) -> "OracleConfig":
        settings = settings or config_manager.get_oracle_settings()
        return cls(settings.max_trace_len, settings.stabilization_window, settings.max_traces)


@dataclass(frozen=True)
class OracleEstimate:
    estimate: FlattenedEstimate
    stable: bool


def enumerate_traces(g: Automaton, bound: int, max_traces: Optional[int] = None) -> Dict[Trace, FrozenSet[int]]:
    """
    All traces of length at most `bound` with the states their runs end in

    Raises:
        ValidationError: If the bound is negative
        ResourceError: If more than `max_traces` traces are found
    """
    if bound < 0:
        raise ValidationError(f"Trace bound must be non-negative, got {bound}")
    traces: Dict[Trace, FrozenSet[int]] = {(): g.initial}
    frontier = dict(traces)
    for _ in range(bound):
        extended: Dict[Trace, set] = {}
        for trace, states in frontier.items():
            for state in states:
                for event in g.enabled_events(state):
                    extended.setdefault(trace + (g.event_names[event],), set()).update(g.successors(state, event))
        frontier = {trace: frozenset(states) for trace, states in extended.items()}
        traces.update(frontier)
        if max_traces is not None and len(traces) > max_traces:
            raise ResourceError(f"Trace enumeration exceeded the guard of {max_traces} traces")
        if not frontier:
            break
    return traces


class _EstimateTable:
    """Nested estimates of every projection of the traces up to one bound"""

    def __init__(self, g: Automaton, chain: AgentChain, bound: int, max_traces: Optional[int]):
        self.chain = chain
        self.traces = enumerate_traces(g, bound, max_traces)
        self._memo: Dict[Tuple[int, Trace], FrozenSet] = {}
        # by_projection[k][β]: traces s with P_{k+1}(s) = β
        self.by_projection: List[Dict[Trace, List[Trace]]] = []
        for agent in chain:
            groups: Dict[Trace, List[Trace]] = {}
            for trace in self.traces:
                groups.setdefault(agent.projection().project(trace), []).append(trace)
            self.by_projection.append(groups)

    def estimate(self, k: int, beta: Trace) -> FrozenSet:
        key = (k, beta)
        if key not in self._memo:
            traces = self.by_projection[k - 1].get(beta, [])
            if k == 1:
                value = frozenset(q for trace in traces for q in self.traces[trace])
            else:
                previous = self.chain[k - 2].projection()
                value = frozenset(self.estimate(k - 1, previous.project(trace)) for trace in traces)
            self._memo[key] = value
        return self._memo[key]

    def generated(self, k: int) -> List[Trace]:
        """Generated projections for agent k, in length then lexicographic order"""
        return sorted(self.by_projection[k - 1], key=lambda beta: (len(beta), beta))


def _check_order(chain: AgentChain, n: int) -> None:
    if not 1 <= n <= len(chain):
        raise ValidationError(f"Order {n} out of range for a chain of {len(chain)} agents")


def _window_tables(g: Automaton, chain: AgentChain, cfg: OracleConfig) -> List[_EstimateTable]:
    """Tables at the smaller bounds of the stabilization window"""
    return [_EstimateTable(g, chain, bound, cfg.max_traces)
            for bound in range(cfg.max_trace_len - 1, cfg.max_trace_len - cfg.stabilization_window - 1, -1)
            if bound >= 0]


def _is_stable(value: FrozenSet, n: int, alpha: Trace, smaller: Sequence[_EstimateTable]) -> bool:
    return all(other.estimate(n, alpha) == value for other in smaller)


def oracle_estimate_order_n(g: Automaton, chain: AgentChain, n: int, alpha: Sequence[str],
                            cfg: Optional[OracleConfig] = None) -> OracleEstimate:
    """
    Order-n estimate after α, evaluated literally over bounded traces

    Args:
        g: The system automaton
        chain: Agents; the first n are used
        n: Estimate order
        alpha: Label names observed by agent n
        cfg: Bounds

    Returns:
        The estimate at the configured bound and whether it agrees with the
        recomputations at the smaller bounds of the stabilization window
    """
    cfg = cfg or OracleConfig.from_settings()
    _check_order(chain, n)
    chain.validate_for(g)
    alpha = tuple(alpha)
    if len(alpha) > cfg.max_trace_len:
        raise ValidationError(f"|α| = {len(alpha)} exceeds the trace bound {cfg.max_trace_len}")
    value = _EstimateTable(g, chain, cfg.max_trace_len, cfg.max_traces).estimate(n, alpha)
    stable = _is_stable(value, n, alpha, _window_tables(g, chain, cfg))
    if not stable:
        logging.warning(f"Oracle estimate at {','.join(alpha) or 'ε'} is not stable "
                        f"at bound {cfg.max_trace_len}")
    return OracleEstimate(FlattenedEstimate(value, n), stable)


def oracle_estimates(g: Automaton, chain: AgentChain,
                     cfg: Optional[OracleConfig] = None) -> Dict[Trace, OracleEstimate]:
    """Order-n oracle estimate of every generated α with |α| <= B, with stability flags"""
    cfg = cfg or OracleConfig.from_settings()
    chain.validate_for(g)
    n = len(chain)
    table = _EstimateTable(g, chain, cfg.max_trace_len, cfg.max_traces)
    smaller = _window_tables(g, chain, cfg)
    estimates = {}
    for alpha in table.generated(n):
        value = table.estimate(n, alpha)
        estimates[alpha] = OracleEstimate(FlattenedEstimate(value, n), _is_stable(value, n, alpha, smaller))
    return estimates


def oracle_verify(g: Automaton, chain: AgentChain, predicate: Predicate,
                  cfg: Optional[OracleConfig] = None, property_name: str = "property") -> Verdict:
    """
    Evaluate a level-n predicate on the oracle estimate of every generated α

    Only stable estimates can produce a witness. Sequences whose estimate still
    changes inside the stabilization window are skipped and counted in
    stats["unstable"]; a verdict that holds says nothing about them.

    Raises:
        ValidationError: On a level mismatch or a strong-opacity predicate
    """
    if isinstance(predicate, ScsoPredicate):
        raise ValidationError("The oracle does not check strong opacity")
    n = len(chain)
    if predicate.level != n:
        raise ValidationError(f"Predicate level {predicate.level} does not match a chain of {n} agents")
    cfg = cfg or OracleConfig.from_settings()
    chain.validate_for(g)
    table = _EstimateTable(g, chain, cfg.max_trace_len, cfg.max_traces)
    smaller = _window_tables(g, chain, cfg)
    witness = None
    checked = 0
    unstable: List[Trace] = []
    for alpha in table.generated(n):
        value = table.estimate(n, alpha)
        if not _is_stable(value, n, alpha, smaller):
            unstable.append(alpha)
            continue
        checked += 1
        if not predicate.holds(value):
            estimate = FlattenedEstimate(value, n)
            witness = Witness(alpha, estimate.value, estimate.render(g.state_names), estimate)
            break
    if unstable:
        logging.info(f"Oracle skipped {len(unstable)} unstable sequences at bound {cfg.max_trace_len}")
    stats = {"states_visited": checked, "stage": "oracle", "observer_states": None,
             "traces": len(table.traces), "bound": cfg.max_trace_len, "unstable": len(unstable)}
    return Verdict(property_name, witness is None, witness, stats)
