"""
Shared fixtures: the worked example systems
"""

import pytest

from automata.model import AgentProfile, Automaton, LabeledAutomaton, Labeling
from highorder.pipeline import AgentChain


@pytest.fixture
def g1():
    """Six-state system with a d-loop behind a nondeterministic a"""
    return Automaton.from_names(
        ["0", "1", "2", "3", "4", "5"], ["a", "b", "c", "d"],
        [("0", "a", "1"), ("1", "b", "2"), ("2", "b", "3"), ("3", "c", "2"),
         ("3", "a", "4"), ("3", "a", "5"), ("4", "d", "4")],
        ["0"])


@pytest.fixture
def g1_a1(g1):
    return AgentProfile("A1", ["b", "c", "d"]).labeled(g1)


@pytest.fixture
def g1_chain():
    return AgentChain([AgentProfile("A1", ["b", "c", "d"]), AgentProfile("A2", ["a", "b"])])


@pytest.fixture
def g_cou2():
    return Automaton.from_names(
        ["0", "1", "2", "3", "4", "5"], ["a", "b", "c"],
        [("0", "c", "2"), ("2", "b", "4"), ("0", "a", "1"), ("1", "b", "3"), ("2", "b", "5")],
        ["0"])


@pytest.fixture
def usr():
    return AgentProfile("Usr", ["b", "c"])


@pytest.fixture
def intr():
    return AgentProfile("Intr", ["a", "b"])


@pytest.fixture
def g_cou3():
    return Automaton.from_names(
        ["0", "1"], ["a", "b", "c"],
        [("0", "a", "1"), ("1", "b", "0"), ("1", "c", "0")],
        ["0"])


@pytest.fixture
def scso_system():
    """q0 -a-> q1 -a-> q2 and q0 -u-> q3 -a-> q4 -a-> q5 with u unobservable"""
    automaton = Automaton.from_names(
        ["q0", "q1", "q2", "q3", "q4", "q5"], ["a", "u"],
        [("q0", "a", "q1"), ("q1", "a", "q2"), ("q0", "u", "q3"), ("q3", "a", "q4"), ("q4", "a", "q5")],
        ["q0"])
    return LabeledAutomaton(automaton, Labeling.from_map(automaton, {"a": "a", "u": "eps"}))


@pytest.fixture
def s_cou0():
    automaton = Automaton.from_names(
        ["q1", "q2", "q3", "q4"], ["a"],
        [("q1", "a", "q2"), ("q3", "a", "q4")],
        ["q1", "q3"])
    return LabeledAutomaton.project(automaton, ["a"])


