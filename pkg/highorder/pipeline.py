"""
Order-n observer pipeline for HOObs
Observer of agent n estimating what agent n-1 estimates ... about the system
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from automata.errors import StructuralError, ValidationError
from automata.model import AgentProfile, Automaton, LabeledAutomaton, Projection
from constructions.composition import ProductAutomaton, concurrent_composition
from constructions.detector import DetectorAutomaton, build_detector
from constructions.observer import ObserverAutomaton, build_observer
from highorder.nested import FlattenedEstimate, NestedState, flatten_state

STAGES = ("observer", "detector")

LevelAutomaton = Union[ObserverAutomaton, DetectorAutomaton]


@dataclass(frozen=True)
class AgentChain:
    """Ordered agents A1..An; agent k estimates what agent k-1 estimates"""
    agents: Tuple[AgentProfile, ...]

    def __init__(self, agents: Sequence[AgentProfile]):
        agents = tuple(agents)
        if not agents:
            raise ValidationError("An agent chain needs at least one agent")
        object.__setattr__(self, "agents", agents)

    def __len__(self) -> int:
        return len(self.agents)

    def __iter__(self) -> Iterator[AgentProfile]:
        return iter(self.agents)

    def __getitem__(self, index: int) -> AgentProfile:
        return self.agents[index]

    @property
    def order(self) -> int:
        return len(self.agents)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(agent.name for agent in self.agents)

    def validate_for(self, automaton: Automaton) -> None:
        for agent in self.agents:
            agent.validate_for(automaton)

    def prefix(self, k: int) -> "AgentChain":
        if not 1 <= k <= len(self.agents):
            raise ValidationError(f"Chain prefix length {k} out of range 1..{len(self.agents)}")
        return AgentChain(self.agents[:k])


@dataclass
class PipelineLevel:
    """One level of the pipeline"""
    order: int
    agent: AgentProfile
    system: LabeledAutomaton
    automaton: LevelAutomaton
    nested: Tuple[NestedState, ...]
    product: Optional[ProductAutomaton] = None

    @property
    def num_states(self) -> int:
        return self.automaton.num_states


class PipelineCache:
    """Levels memoized per (system, stage, chain prefix)"""

    def __init__(self):
        self._levels: Dict[Tuple[Automaton, str, Tuple[AgentProfile, ...]], PipelineLevel] = {}
        self.hits = 0
        self.misses = 0

    def get(self, g: Automaton, stage: str, prefix: Sequence[AgentProfile]) -> Optional[PipelineLevel]:
        level = self._levels.get((g, stage, tuple(prefix)))
        if level is None:
            self.misses += 1
        else:
            self.hits += 1
        return level

    def put(self, g: Automaton, stage: str, prefix: Sequence[AgentProfile], level: PipelineLevel) -> None:
        self._levels[(g, stage, tuple(prefix))] = level

    def clear(self) -> None:
        self._levels.clear()
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._levels)


@dataclass
class HighOrderObserver:
    """Result of the order-n pipeline"""
    system: Automaton
    chain: AgentChain
    stage: str
    levels: List[PipelineLevel]
    stats: Dict[str, Any] = field(default_factory=dict)

    @property
    def observer(self) -> ObserverAutomaton:
        return self.levels[-1].automaton

    @property
    def nested(self) -> Tuple[NestedState, ...]:
        return self.levels[-1].nested

    @property
    def order(self) -> int:
        return len(self.chain)

    @property
    def label_names(self) -> Tuple[str, ...]:
        return self.observer.label_names

    @property
    def num_states(self) -> int:
        return self.observer.num_states

    def run(self, labels: Sequence[str]) -> Optional[int]:
        """Index of the final observer state reached by a label word, None if not generated"""
        return self.observer.run_names(labels)

    def estimate(self, index: int) -> FlattenedEstimate:
        return flatten_state(self.nested[index])

    def state_name(self, index: int) -> str:
        return self.nested[index].render(self.system.state_names)

    def state_names(self) -> List[str]:
        return [self.state_name(i) for i in range(self.num_states)]


def lift_composition(product: ProductAutomaton, next_projection: Projection) -> LabeledAutomaton:
    """
    Rename every product event (e1, x) to e1 and relabel by the next projection

    Parallel transitions that become duplicates merge. State ids stay aligned
    with `product.pairs`; events are the left factor's events in their order.

    Raises:
        StructuralError: If a transition moves only the right factor
    """
    left_events = product.left.automaton.event_names
    transitions = set()
    for source, event, target in product.automaton.transitions:
        first = product.event_pairs[event][0]
        if first is None:
            raise StructuralError(
                f"Cannot lift product event {product.automaton.event_names[event]!r}: "
                f"its first component is ε")
        transitions.add((source, first, target))
    lifted = Automaton(product.automaton.state_names, left_events, transitions,
                       product.automaton.initial, allow_empty_initial=True)
    return LabeledAutomaton(lifted, next_projection.to_labeling(lifted))


def nested_chain_fastpath_applicable(chain: AgentChain) -> bool:
    """True iff every consecutive pair of observable sets is ⊆-comparable"""
    for previous, current in zip(chain.agents, chain.agents[1:]):
        if not (previous.observable <= current.observable or current.observable <= previous.observable):
            return False
    return True


def _check_nested(nested: Sequence[NestedState], order: int, stage: str) -> None:
    for index, state in enumerate(nested):
        if next(state.iter_nonempty_violations(), None) is not None:
            raise StructuralError(f"Order-{order} state {index} has an empty component")
        if stage == "observer" and order == 2:
            for q, child in state.pairs:
                if q not in child.base:
                    raise StructuralError(
                        f"Order-2 state {index} pairs state {q} with an estimate excluding it")


def _first_level(g: Automaton, agent: AgentProfile, stage: str, state_cap: Optional[int]) -> PipelineLevel:
    system = agent.labeled(g)
    if stage == "detector":
        automaton = build_detector(system, state_cap=state_cap)
    else:
        automaton = build_observer(system, state_cap=state_cap)
    nested = tuple(NestedState.of_base(states) for states in automaton.states)
    return PipelineLevel(1, agent, system, automaton, nested)


def _next_level(g: Automaton, previous: PipelineLevel, agent: AgentProfile,
                stage: str, state_cap: Optional[int]) -> PipelineLevel:
    order = previous.order + 1
    observed = previous.agent.labeled(g)
    wrapped = previous.automaton.to_labeled_automaton()
    product = concurrent_composition(observed, wrapped, state_cap=state_cap)
    lifted = lift_composition(product, agent.projection())
    observer = build_observer(lifted, state_cap=state_cap)
    nested = []
    for states in observer.states:
        pairs = [(product.pairs[p][0], previous.nested[product.pairs[p][1]]) for p in states]
        nested.append(NestedState.of_pairs(pairs))
    level = PipelineLevel(order, agent, lifted, observer, tuple(nested), product)
    _check_nested(level.nested, order, stage)
    logging.debug(f"Order-{order} level built: {product.num_states} product states, "
                  f"{observer.num_states} observer states")
    return level


def order_n_observer(g: Automaton, chain: AgentChain, first_stage: str = "observer",
                     state_cap: Optional[int] = None,
                     cache: Optional[PipelineCache] = None) -> HighOrderObserver:
    """
    Build the order-n observer of a system for an agent chain

    Args:
        g: The system automaton
        chain: Agents A1..An
        first_stage: "observer" or "detector" for level 1
        state_cap: Maximum number of states per construction
        cache: Optional level cache shared between calls

    Returns:
        The high-order observer with every level

    Raises:
        ValidationError: On an unknown stage, a bad chain, or a detector stage with n < 2
        StateCapExceeded: If any construction exceeds the cap
    """
    if first_stage not in STAGES:
        raise ValidationError(f"Unknown stage {first_stage!r}, expected one of {STAGES}")
    chain.validate_for(g)
    if first_stage == "detector" and len(chain) < 2:
        raise ValidationError("The detector stage needs a chain of at least two agents")

    levels: List[PipelineLevel] = []
    for k in range(1, len(chain) + 1):
        prefix = chain.agents[:k]
        level = cache.get(g, first_stage, prefix) if cache is not None else None
        if level is None:
            if k == 1:
                level = _first_level(g, chain[0], first_stage, state_cap)
            else:
                level = _next_level(g, levels[-1], chain[k - 1], first_stage, state_cap)
            if cache is not None:
                cache.put(g, first_stage, prefix, level)
        levels.append(level)

    counts = [level.num_states for level in levels]
    stats: Dict[str, Any] = {
        "stage": first_stage,
        "level_states": counts,
        "states_visited": sum(counts),
        "observer_states": counts[-1],
    }
    if first_stage == "observer" and len(chain) >= 2 and nested_chain_fastpath_applicable(chain):
        stats["fastpath_counts"] = _compare_fastpath(g, chain, levels, state_cap)
    logging.debug(f"Order-{len(chain)} observer ({first_stage} stage): level sizes {counts}")
    return HighOrderObserver(g, chain, first_stage, levels, stats)


def _compare_fastpath(g: Automaton, chain: AgentChain, levels: Sequence[PipelineLevel],
                      state_cap: Optional[int]) -> List[Tuple[int, int, int]]:
    """Per level k >= 2: (k, pipeline count, plain observer count over E_k)"""
    rows = []
    for level in levels[1:]:
        plain = build_observer(chain[level.order - 1].labeled(g), state_cap=state_cap).num_states
        rows.append((level.order, level.num_states, plain))
        if plain != level.num_states:
            logging.warning(f"Order-{level.order} observer has {level.num_states} states, "
                            f"plain observer over the same alphabet has {plain}")
    return rows
