"""
Tests for scenario files, DOT export and verdict reports
"""

import json
import os

import pytest

from automata.errors import DanglingReferenceError, DuplicateIdError, SchemaError, ValidationError
from automata.model import LabeledAutomaton
from constructions.composition import self_composition
from constructions.observer import build_observer
from constructions.secrecy import diamond_completion, nonsecret_subautomaton
from formats.dot import emit_dot
from formats.report import emit_report, verdict_to_dict
from formats.scenario import load_scenario_file, parse_scenario, scenario_to_dict, serialize_scenario
from highorder.nested import FlattenedEstimate, NestedState
from highorder.pipeline import order_n_observer
from verification.verifier import Verdict, Witness

SCENARIOS = os.path.join(os.path.dirname(os.path.abspath(__file__)), "scenarios")
SCENARIO_FILES = sorted(name for name in os.listdir(SCENARIOS) if name.endswith(".json"))


def scenario_path(name):
    return os.path.join(SCENARIOS, name)


def minimal(**overrides):
    document = {
        "name": "tiny",
        "system": {"states": ["0", "1"], "events": ["a"], "transitions": [["0", "a", "1"]], "initial": ["0"]},
    }
    document.update(overrides)
    return document


def parse(document):
    return parse_scenario(json.dumps(document))


class TestScenarioParsing:
    def test_g1(self):
        scenario = load_scenario_file(scenario_path("g1.json"))
        assert scenario.name == "g1"
        assert scenario.system.num_states == 6
        assert scenario.system.num_events == 4
        assert len(scenario.system.transitions) == 7
        assert scenario.agent_chain(["A1", "A2"]).names == ("A1", "A2")
        assert [spec.name for spec in scenario.properties] == ["determinism", "critical", "hoo_b", "hoo_c"]
        assert scenario.critical == frozenset({2})

    def test_resolve_property(self):
        scenario = load_scenario_file(scenario_path("g_cou2.json"))
        predicate, chain = scenario.resolve_property(scenario.get_property("hoo_a"))
        assert predicate.level == 2
        assert chain.names == ("Usr", "Intr")

    def test_labeling_property(self):
        scenario = load_scenario_file(scenario_path("scso.json"))
        predicate, chain = scenario.resolve_property(scenario.get_property("cso"))
        assert chain is None
        assert scenario.labeled_system().label_names == ("a",)

    def test_missing_required_field(self):
        document = minimal()
        del document["system"]["initial"]
        with pytest.raises(SchemaError) as info:
            parse(document)
        assert info.value.pointer == "/system/initial"

    def test_wrong_type(self):
        document = minimal()
        document["system"]["states"] = "0 1"
        with pytest.raises(SchemaError) as info:
            parse(document)
        assert info.value.pointer == "/system/states"

    def test_kind_and_formula_are_exclusive(self):
        with pytest.raises(SchemaError) as info:
            parse(minimal(labeling={"a": "a"},
                          properties=[{"name": "p", "kind": "determinism", "formula": "(card= 1)"}]))
        assert info.value.pointer == "/properties/0"

    def test_not_json(self):
        with pytest.raises(SchemaError):
            parse_scenario(b"{ not json")

    def test_dangling_transition_state(self):
        document = minimal()
        document["system"]["transitions"].append(["1", "a", "7"])
        with pytest.raises(DanglingReferenceError):
            parse(document)

    def test_dangling_agent(self):
        with pytest.raises(DanglingReferenceError):
            parse(minimal(properties=[{"name": "p", "kind": "determinism", "chain": ["Nobody"]}]))

    def test_dangling_t_set(self):
        with pytest.raises(DanglingReferenceError):
            parse(minimal(agents={"A": ["a"], "B": ["a"]},
                          properties=[{"name": "p", "kind": "hoo_a", "chain": ["A", "B"],
                                       "params": {"t": "missing"}}]))

    def test_duplicate_state(self):
        document = minimal()
        document["system"]["states"] = ["0", "1", "0"]
        with pytest.raises(DuplicateIdError):
            parse(document)

    def test_duplicate_property(self):
        with pytest.raises(DuplicateIdError):
            parse(minimal(labeling={"a": "a"},
                          properties=[{"name": "p", "kind": "determinism"},
                                      {"name": "p", "kind": "determinism"}]))

    def test_level_mismatch(self):
        with pytest.raises(ValidationError):
            parse(minimal(agents={"A": ["a"]},
                          properties=[{"name": "p", "formula": "(exists nonempty)", "chain": ["A"]}]))

    def test_formula_error(self):
        with pytest.raises(ValidationError):
            parse(minimal(labeling={"a": "a"}, properties=[{"name": "p", "formula": "(subset {9})"}]))

    def test_property_without_chain_needs_labeling(self):
        with pytest.raises(ValidationError):
            parse(minimal(properties=[{"name": "p", "kind": "determinism"}]))

    @pytest.mark.parametrize("name", SCENARIO_FILES)
    def test_serialize_reads_back(self, name):
        scenario = load_scenario_file(scenario_path(name))
        data = serialize_scenario(scenario)
        again = parse_scenario(data)
        assert again.system == scenario.system
        assert scenario_to_dict(again) == scenario_to_dict(scenario)
        assert serialize_scenario(again) == data


class TestDot:
    def test_automaton(self, g_cou3):
        source = emit_dot(g_cou3)
        assert source.startswith("digraph hoobs")
        assert "__start -> s0" in source
        assert "s0 -> s1" in source
        assert source == emit_dot(g_cou3)

    def test_labeled_shows_silent_events(self, scso_system):
        source = emit_dot(scso_system, secrets=[1, 3])
        assert "u/ε" in source
        assert "red" in source

    def test_diamond_symbol(self, scso_system):
        completed = diamond_completion(nonsecret_subautomaton(scso_system, [1, 3]),
                                       scso_system.automaton.event_names)
        source = emit_dot(completed)
        assert "◇" in source
        assert "<>" not in source

    def test_observer_and_high_order(self, g1, g1_a1, g1_chain):
        assert "{3,4,5}" in emit_dot(build_observer(g1_a1))
        assert "(2,{2})" in emit_dot(order_n_observer(g1, g1_chain))

    def test_product_secrets_by_left_component(self, s_cou0):
        source = emit_dot(self_composition(s_cou0), secrets=[1])
        assert "red" in source
        assert "(q1,q3)" in source

    def test_state_name_override(self, g_cou3):
        assert "middle" in emit_dot(g_cou3, state_names=["start", "middle"])
        with pytest.raises(ValidationError):
            emit_dot(g_cou3, state_names=["only"])

    def test_unknown_artifact(self):
        with pytest.raises(ValidationError):
            emit_dot("digraph")


class TestReport:
    def verdicts(self):
        holds = Verdict("cso", True, None, {"states_visited": 3})
        violated = Verdict("strong_cso_han", False, Witness(("a",), frozenset({"(q1,∅)"}), "(q1,∅)"))
        return [holds, violated]

    def test_text(self):
        lines = emit_report(self.verdicts(), "text").splitlines()
        assert lines[0] == "cso" + " " * 13 + "holds"
        assert lines[1] == "strong_cso_han  VIOLATED  a  (q1,∅)"

    def test_text_empty_word(self):
        state = NestedState.of_base({0, 1})
        verdict = Verdict("determinism", False, Witness((), state, "{0,1}"))
        assert emit_report([verdict]) == "determinism  VIOLATED  ε  {0,1}\n"

    def test_json(self):
        estimate = FlattenedEstimate.build([[3]], 2)
        verdict = Verdict("hoo_a", False, Witness(("a", "b"), NestedState.of_base({3}), "{(3,{3})}", estimate),
                          {"stage": "detector", "level_states": [4, 4]})
        entries = json.loads(emit_report([verdict], "json", ["0", "1", "2", "3"]))
        assert entries == [{
            "property": "hoo_a",
            "holds": False,
            "witness": {"labels": ["a", "b"], "word": "a,b"},
            "state": "{(3,{3})}",
            "estimate": [["3"]],
            "stats": {"stage": "detector", "level_states": [4, 4]},
        }]

    def test_holds_entry(self):
        entry = verdict_to_dict(self.verdicts()[0], [])
        assert entry["witness"] is None and entry["estimate"] is None

    def test_empty(self):
        assert emit_report([], "json") == ""
        assert emit_report([], "text") == ""

    def test_unknown_format(self):
        with pytest.raises(ValidationError):
            emit_report(self.verdicts(), "xml")
