#!/usr/bin/env python3
"""
Basic test script for HOObs
Smoke tests of the core modules, runnable standalone or under pytest
"""

import sys
import os

# Add the project root to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))


def test_imports():
    """Test that all modules can be imported"""
    from automata.model import Automaton, LabeledAutomaton, AgentProfile
    from automata.graph import TransitionGraph
    from constructions.observer import build_observer
    from constructions.detector import build_detector
    from constructions.composition import concurrent_composition
    from highorder.pipeline import order_n_observer
    from predicates.parser import parse_predicate
    from verification.engine import VerificationEngine
    from formats.scenario import parse_scenario
    print("✓ All core modules imported successfully")


def test_transition_graph():
    """Test transition graph functionality"""
    from automata.model import Automaton
    from automata.graph import TransitionGraph

    automaton = Automaton.from_names(["0", "1", "9"], ["a"], [("0", "a", "1")], ["0"])
    graph = TransitionGraph(automaton)
    report = graph.validate_automaton()

    assert graph.reachable_states() == frozenset({0, 1})
    assert report["unreachable_states"] == ["9"]
    print("✓ Transition graph functionality works")
    print(f"  Automaton info: {graph.get_automaton_info()}")


def test_observer_smoke():
    """Test observer construction on a three-state system"""
    from automata.model import Automaton, AgentProfile
    from constructions.observer import build_observer

    automaton = Automaton.from_names(["0", "1", "2"], ["a", "u"], [("0", "u", "1"), ("1", "a", "2")], ["0"])
    observer = build_observer(AgentProfile("A", ["a"]).labeled(automaton))

    assert observer.state_names() == ["{0,1}", "{2}"]
    assert observer.path_to(1) == ("a",)
    print("✓ Observer construction works")
    print(f"  Observer states: {observer.state_names()}")


def main():
    """Run all tests"""
    print("HOObs Basic Tests")
    print("=" * 50)

    tests = [
        test_imports,
        test_transition_graph,
        test_observer_smoke,
    ]

    passed = 0
    total = len(tests)

    for test in tests:
        try:
            test()
            passed += 1
        except Exception as e:
            print(f"✗ {test.__name__} failed: {e}")
        print()

    print(f"Tests passed: {passed}/{total}")

    if passed == total:
        print("🎉 All tests passed! HOObs core functionality is working.")
    else:
        print("❌ Some tests failed. Please check the errors above.")


if __name__ == "__main__":
    main()
