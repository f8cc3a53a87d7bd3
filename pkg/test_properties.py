"""
Seeded random suites checking the constructions against each other and against the oracle
"""

from itertools import combinations, product

import numpy as np
import pytest

from automata.generators import random_automaton, random_observable
from automata.model import AgentProfile, LabeledAutomaton
from automata.operations import current_state_estimate, extended_transition, reachable_part, unobservable_closure
from constructions.composition import concurrent_composition
from constructions.detector import build_detector
from constructions.observer import build_observer
from highorder.pipeline import AgentChain, nested_chain_fastpath_applicable, order_n_observer
from predicates.builtins import builtin
from verification.oracle import OracleConfig, oracle_estimates
from verification.verifier import estimate_at, verify_order_n, verify_scso

SEEDS = range(200)


def draw_system(seed, acyclic=False):
    rng = np.random.default_rng(seed)
    g = random_automaton(rng, int(rng.integers(2, 6)), int(rng.integers(1, 4)),
                         density=0.3, n_initial=int(rng.integers(1, 3)), acyclic=acyclic)
    return rng, g


def draw_chain(rng, g, n):
    return AgentChain([AgentProfile(f"A{k + 1}", random_observable(rng, g)) for k in range(n)])


@pytest.mark.parametrize("seed", SEEDS)
def test_observer_states_are_estimates(seed):
    rng, g = draw_system(seed)
    system = LabeledAutomaton.project(g, random_observable(rng, g))
    observer = build_observer(system)
    for index, states in enumerate(observer.states):
        word = observer.path_to(index)
        assert current_state_estimate(system, system.label_ids(word)) == states
        assert observer.run_names(word) == index


@pytest.mark.parametrize("seed", SEEDS)
def test_detector_covers_observer(seed):
    rng, g = draw_system(seed)
    system = LabeledAutomaton.project(g, random_observable(rng, g))
    observer = build_observer(system)
    detector = build_detector(system)
    for index, states in enumerate(observer.states):
        reached = detector.run_states(system.label_ids(observer.path_to(index)))
        members = [detector.states[i] for i in reached]
        assert all(member <= states for member in members)
        assert frozenset().union(*members) == states


@pytest.mark.parametrize("seed", SEEDS)
def test_extended_transition_composes(seed):
    rng, g = draw_system(seed)
    word = [int(e) for e in rng.integers(0, g.num_events, size=4)]
    middle = extended_transition(g, g.initial, word[:2])
    assert extended_transition(g, g.initial, word) == extended_transition(g, middle, word[2:])
    assert reachable_part(reachable_part(g)) == reachable_part(g)


@pytest.mark.parametrize("seed", SEEDS)
def test_detector_stage_agrees_with_observer_stage(seed):
    rng, g = draw_system(seed)
    chain = draw_chain(rng, g, 2)
    pairs = [sorted(int(q) for q in rng.choice(g.num_states, size=min(2, g.num_states), replace=False))]
    for predicate in (builtin("hoo_b", {}, g.num_states), builtin("hoo_a", {"t": pairs}, g.num_states)):
        by_observer = verify_order_n(g, chain, predicate, stage="observer")
        by_detector = verify_order_n(g, chain, predicate, stage="detector")
        assert by_observer.holds == by_detector.holds
        if not by_observer.holds:
            assert by_observer.witness.labels == by_detector.witness.labels


@pytest.mark.parametrize("seed", SEEDS)
def test_pipeline_matches_oracle(seed):
    rng, g = draw_system(seed, acyclic=True)
    chain = draw_chain(rng, g, 2 + seed % 2)
    cfg = OracleConfig(g.num_states, 1, 100000)
    for alpha, entry in oracle_estimates(g, chain, cfg).items():
        assert entry.stable
        assert estimate_at(g, chain, list(alpha)) == entry.estimate


@pytest.mark.parametrize("seed", SEEDS)
def test_nested_chain_count_bound(seed):
    rng, g = draw_system(seed)
    first = random_observable(rng, g)
    second = sorted(set(first) | set(random_observable(rng, g)))
    chain = AgentChain([AgentProfile("A1", first), AgentProfile("A2", second)])
    assert nested_chain_fastpath_applicable(chain)
    result = order_n_observer(g, chain)
    for order, pipeline, plain in result.stats["fastpath_counts"]:
        assert order == 2
        assert pipeline >= plain


@pytest.mark.parametrize("seed", SEEDS)
def test_strong_opacity_methods_agree(seed):
    rng, g = draw_system(seed)
    system = LabeledAutomaton.project(g, random_observable(rng, g))
    secrets = [q for q in range(g.num_states) if rng.random() < 0.3]
    han = verify_scso(system, secrets, "han")
    diamond = verify_scso(system, secrets, "diamond")
    assert han.holds == diamond.holds
    if not han.holds:
        assert han.witness.labels == diamond.witness.labels


def label_words(labels, length):
    for size in range(length + 1):
        yield from product(labels, repeat=size)


@pytest.mark.parametrize("seed", SEEDS)
def test_observer_run_matches_estimate_on_every_word(seed):
    rng, g = draw_system(seed)
    system = LabeledAutomaton.project(g, random_observable(rng, g))
    observer = build_observer(system)

    def walk(word):
        estimate = current_state_estimate(system, system.label_ids(word))
        index = observer.run_names(word)
        if not estimate:
            assert index is None
            return
        assert observer.states[index] == estimate
        if len(word) < 6:
            for label in system.label_names:
                walk(word + (label,))

    walk(())


@pytest.mark.parametrize("seed", SEEDS)
def test_detector_runs_reach_every_small_subset(seed):
    rng, g = draw_system(seed)
    system = LabeledAutomaton.project(g, random_observable(rng, g))
    observer = build_observer(system)
    detector = build_detector(system)

    def walk(index, reached, depth):
        for label in system.labeling.sorted_label_ids():
            successor = observer.step(index, label)
            if successor is None:
                continue
            estimate = observer.states[successor]
            step = frozenset(t for d in reached for t in detector.successors(d, label))
            assert all(detector.states[t] <= estimate for t in step)
            size = min(2, len(estimate))
            sized = frozenset(t for t in step if len(detector.states[t]) == size)
            ends = {detector.states[t] for t in sized}
            assert {frozenset(c) for c in combinations(sorted(estimate), size)} <= ends
            if depth < 6:
                walk(successor, sized, depth + 1)

    walk(observer.initial, frozenset([detector.initial]), 1)


@pytest.mark.parametrize("seed", SEEDS)
def test_composition_label_language(seed):
    rng, g = draw_system(seed)
    other = random_automaton(rng, int(rng.integers(2, 6)), g.num_events, density=0.3,
                             n_initial=int(rng.integers(1, 3)))
    observable = random_observable(rng, g)
    left = LabeledAutomaton.project(g, observable)
    right = LabeledAutomaton.project(other, observable)
    composed = concurrent_composition(left, right).system
    for word in label_words(left.label_names, 4):
        generated = [bool(current_state_estimate(s, s.label_ids(word))) for s in (left, right, composed)]
        assert generated[2] == (generated[0] and generated[1])


@pytest.mark.parametrize("seed", SEEDS)
def test_order2_composition_preserves_language(seed):
    rng, g = draw_system(seed)
    result = order_n_observer(g, draw_chain(rng, g, 2))
    level = result.levels[1]
    closed = concurrent_composition(level.system, level.automaton.to_labeled_automaton())
    moves = {}
    for source, event, target in closed.automaton.transitions:
        first = closed.event_pairs[event][0]
        moves.setdefault((source, first), set()).add(target)

    def walk(states, composed, depth):
        assert {level.product.pairs[closed.pairs[p][0]][0] for p in composed} == states
        if depth == 6 or not states:
            return
        for event in range(g.num_events):
            walk(extended_transition(g, states, [event]),
                 frozenset(t for p in composed for t in moves.get((p, event), ())), depth + 1)

    walk(g.initial, closed.automaton.initial, 0)


@pytest.mark.parametrize("seed", SEEDS)
def test_initial_state_carries_first_estimate(seed):
    rng, g = draw_system(seed)
    chain = draw_chain(rng, g, 2)
    result = order_n_observer(g, chain)
    first_estimate = result.levels[0].automaton.states[0]
    pairs = {(q, child.base) for q, child in result.nested[0].pairs}
    either = LabeledAutomaton.project(g, sorted(chain[0].observable | chain[1].observable))
    for q in unobservable_closure(either, g.initial):
        assert (q, first_estimate) in pairs
    if chain[0].observable <= chain[1].observable:
        second = chain[1].labeled(g)
        assert pairs == {(q, first_estimate) for q in unobservable_closure(second, g.initial)}


@pytest.mark.parametrize("seed", SEEDS)
def test_nested_chain_shapes(seed):
    rng, g = draw_system(seed)
    first = set(random_observable(rng, g))
    second = first | set(random_observable(rng, g))
    if seed % 2:
        first, second = second, first
    chain = AgentChain([AgentProfile("A1", sorted(first)), AgentProfile("A2", sorted(second))])
    result = order_n_observer(g, chain)
    watcher = chain[1].labeled(g)
    watched = chain[0].labeled(g)
    for index, state in enumerate(result.nested):
        word = result.observer.path_to(index)
        estimate = current_state_estimate(watcher, watcher.label_ids(word))
        assert {q for q, _ in state.pairs} == estimate
        children = {child.base for _, child in state.pairs}
        if first <= second:
            seen = [label for label in word if label in first]
            assert children == {current_state_estimate(watched, watched.label_ids(seen))}
            assert estimate <= next(iter(children))
        else:
            assert all(child <= estimate for child in children)
