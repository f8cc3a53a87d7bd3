"""
Graphviz export for HOObs
DOT text for automata, observers, detectors, products and high-order observers
"""

from typing import Iterable, List, Optional, Sequence, Tuple

import graphviz

from automata.errors import ValidationError
from automata.model import Automaton, LabeledAutomaton
from config.config_manager import DotSettings, config_manager
from constructions.composition import ProductAutomaton
from constructions.detector import DetectorAutomaton
from constructions.observer import ObserverAutomaton
from constructions.secrecy import DIAMOND_NAME, DIAMOND_SYMBOL
from highorder.pipeline import HighOrderObserver

Edge = Tuple[int, str, int]

START_NODE = "__start"


def _display(name: str) -> str:
    return name.replace(DIAMOND_NAME, DIAMOND_SYMBOL)


def _automaton_view(automaton: Automaton) -> Tuple[List[str], List[Edge], List[int]]:
    edges = [(s, automaton.event_names[e], t) for s, e, t in automaton.sorted_transitions()]
    return list(automaton.state_names), edges, sorted(automaton.initial)


def _labeled_view(system: LabeledAutomaton) -> Tuple[List[str], List[Edge], List[int]]:
    automaton = system.automaton
    edges = []
    for s, e, t in automaton.sorted_transitions():
        event = automaton.event_names[e]
        label = system.labeling.label_of(e)
        label_name = "ε" if label is None else system.label_names[label]
        edges.append((s, event if label_name == event else f"{event}/{label_name}", t))
    return list(automaton.state_names), edges, sorted(automaton.initial)


def _estimator_view(estimator) -> Tuple[List[str], List[Edge], List[int]]:
    labels = estimator.label_names
    edges = [(s, labels[label], t) for s, label, t in estimator.sorted_transitions()]
    return estimator.state_names(), edges, [estimator.initial]


def emit_dot(artifact, state_names: Optional[Sequence[str]] = None, secrets: Iterable[int] = (),
             options: Optional[DotSettings] = None) -> str:
    """
    Render an artifact as DOT text

    Args:
        artifact: Automaton, LabeledAutomaton, ObserverAutomaton, DetectorAutomaton,
            ProductAutomaton or HighOrderObserver
        state_names: Optional replacement node labels
        secrets: StateIds styled as secret; for a product, the left components
        options: DOT settings (defaults to the configured ones)

    Returns:
        Byte-stable DOT source
    """
    options = options or config_manager.get_dot_settings()
    secret_set = frozenset(secrets)
    if isinstance(artifact, HighOrderObserver):
        names = artifact.state_names()
        edges = [(s, artifact.label_names[label], t) for s, label, t in artifact.observer.sorted_transitions()]
        initial = [artifact.observer.initial]
        secret_nodes = set()
    elif isinstance(artifact, (ObserverAutomaton, DetectorAutomaton)):
        names, edges, initial = _estimator_view(artifact)
        secret_nodes = set()
    elif isinstance(artifact, ProductAutomaton):
        names, edges, initial = _automaton_view(artifact.automaton)
        secret_nodes = {i for i, (left, _) in enumerate(artifact.pairs) if left in secret_set}
    elif isinstance(artifact, LabeledAutomaton):
        names, edges, initial = _labeled_view(artifact)
        secret_nodes = set(secret_set)
    elif isinstance(artifact, Automaton):
        names, edges, initial = _automaton_view(artifact)
        secret_nodes = set(secret_set)
    else:
        raise ValidationError(f"Cannot render {type(artifact).__name__} as DOT")
    if state_names is not None:
        if len(state_names) != len(names):
            raise ValidationError(f"Expected {len(names)} state names, got {len(state_names)}")
        names = list(state_names)

    g = graphviz.Digraph("hoobs", graph_attr={"rankdir": options.rankdir},
                         node_attr={"shape": options.node_shape})
    g.node(START_NODE, label="", shape="none", width="0", height="0")
    for index, name in enumerate(names):
        if index in secret_nodes:
            g.node(f"s{index}", label=graphviz.nohtml(_display(name)), color=options.secret_color,
                   fontcolor=options.secret_color)
        else:
            g.node(f"s{index}", label=graphviz.nohtml(_display(name)))
    for index in initial:
        g.edge(START_NODE, f"s{index}")
    for source, label, target in edges:
        g.edge(f"s{source}", f"s{target}", label=graphviz.nohtml(_display(label)))
    return g.source
