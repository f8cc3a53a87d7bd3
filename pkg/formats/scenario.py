"""
Scenario files for HOObs
JSON scenario loading with schema validation, name resolution and serialization
"""

import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

import jsonschema
from jsonschema.exceptions import best_match

from automata.errors import DanglingReferenceError, DuplicateIdError, SchemaError, ValidationError
from automata.model import AgentProfile, Automaton, LabeledAutomaton, Labeling
from highorder.pipeline import AgentChain
from predicates.builtins import Predicate, builtin
from predicates.parser import parse_predicate

SCHEMA_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                           "schema", "scenario.schema.json")

_schema_cache: Dict[str, Any] = {}


def load_schema() -> Dict[str, Any]:
    if "scenario" not in _schema_cache:
        with open(SCHEMA_PATH, "r", encoding="utf-8") as f:
            _schema_cache["scenario"] = json.load(f)
    return _schema_cache["scenario"]


@dataclass(frozen=True)
class PropertySpec:
    """A named property: a builtin kind or a predicate formula, checked for an agent chain"""
    name: str
    kind: Optional[str] = None
    formula: Optional[str] = None
    chain: Tuple[str, ...] = ()
    params: Mapping[str, Any] = field(default_factory=dict)


@dataclass
class ScenarioFile:
    name: str
    system: Automaton
    labeling: Optional[Dict[str, str]] = None
    agents: Dict[str, AgentProfile] = field(default_factory=dict)
    secrets: FrozenSet[int] = frozenset()
    critical: Optional[FrozenSet[int]] = None
    t_sets: Dict[str, FrozenSet[FrozenSet[int]]] = field(default_factory=dict)
    properties: List[PropertySpec] = field(default_factory=list)

    def labeled_system(self) -> LabeledAutomaton:
        """The system under the scenario's own labeling"""
        if self.labeling is None:
            raise ValidationError(f"Scenario {self.name!r} has no labeling")
        return LabeledAutomaton(self.system, Labeling.from_map(self.system, self.labeling))

    def agent(self, name: str) -> AgentProfile:
        if name not in self.agents:
            raise DanglingReferenceError(f"Unknown agent {name!r}")
        return self.agents[name]

    def agent_chain(self, names: Sequence[str]) -> AgentChain:
        return AgentChain([self.agent(name) for name in names])

    def get_property(self, name: str) -> PropertySpec:
        for spec in self.properties:
            if spec.name == name:
                return spec
        raise DanglingReferenceError(f"Unknown property {name!r}")

    def resolve_property(self, spec: PropertySpec) -> Tuple[Predicate, Optional[AgentChain]]:
        """
        Build the predicate of a property and its chain

        Returns:
            (predicate, chain), chain None when the scenario labeling is observed

        Raises:
            ValidationError: On missing parameters, unresolved names or a level mismatch
        """
        chain = self.agent_chain(spec.chain) if spec.chain else None
        if chain is None:
            self.labeled_system()
        order = len(chain) if chain is not None else 1
        if spec.formula is not None:
            predicate: Predicate = parse_predicate(spec.formula, self.system.state_names)
        else:
            params: Dict[str, Any] = {"secrets": self.secrets}
            if self.critical is not None:
                params["critical"] = self.critical
            if "t" in spec.params:
                if spec.params["t"] not in self.t_sets:
                    raise DanglingReferenceError(
                        f"Property {spec.name!r} refers to unknown t_set {spec.params['t']!r}")
                params["t"] = self.t_sets[spec.params["t"]]
            params["order"] = spec.params.get("order", order)
            predicate = builtin(spec.kind, params, self.system.num_states)
        if predicate.level != order:
            raise ValidationError(
                f"Property {spec.name!r} has level {predicate.level} but its chain has {order} agents")
        return predicate, chain


def _pointer(error: jsonschema.ValidationError) -> str:
    parts = [str(part) for part in error.absolute_path]
    if error.validator == "required" and isinstance(error.instance, dict):
        missing = [key for key in error.validator_value if key not in error.instance]
        if missing:
            parts.append(missing[0])
    return "/" + "/".join(parts)


def _check_unique(names: Sequence[str], what: str) -> None:
    seen = set()
    for name in names:
        if name in seen:
            raise DuplicateIdError(f"Duplicate {what} name: {name!r}")
        seen.add(name)


def _resolve(names: Sequence[str], index: Mapping[str, int], what: str, where: str) -> List[int]:
    resolved = []
    for name in names:
        if name not in index:
            raise DanglingReferenceError(f"{where}: unknown {what} {name!r}")
        resolved.append(index[name])
    return resolved


def parse_scenario(data: Union[bytes, str]) -> ScenarioFile:
    """
    Parse and validate a scenario document

    Raises:
        SchemaError: If the document is not JSON or violates the schema
        DanglingReferenceError: If a name does not resolve
        DuplicateIdError: If a name is declared twice
        ValidationError: If a property cannot be built
    """
    try:
        document = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise SchemaError(f"Invalid JSON: {e}") from None
    error = best_match(jsonschema.Draft7Validator(load_schema()).iter_errors(document))
    if error is not None:
        raise SchemaError(error.message, _pointer(error))

    system_doc = document["system"]
    states, events = system_doc["states"], system_doc["events"]
    _check_unique(states, "state")
    _check_unique(events, "event")
    state_index = {name: i for i, name in enumerate(states)}
    event_index = {name: i for i, name in enumerate(events)}
    transitions = []
    for position, (source, event, target) in enumerate(system_doc["transitions"]):
        where = f"/system/transitions/{position}"
        (source_id,) = _resolve([source], state_index, "state", where)
        (event_id,) = _resolve([event], event_index, "event", where)
        (target_id,) = _resolve([target], state_index, "state", where)
        transitions.append((source_id, event_id, target_id))
    initial = _resolve(system_doc["initial"], state_index, "state", "/system/initial")
    system = Automaton(states, events, transitions, initial)

    labeling = document.get("labeling")
    if labeling is not None:
        _resolve(list(labeling), event_index, "event", "/labeling")
        Labeling.from_map(system, labeling)

    agents = {}
    for name, observable in document.get("agents", {}).items():
        _check_unique(observable, f"agent {name!r} event")
        _resolve(observable, event_index, "event", f"/agents/{name}")
        agents[name] = AgentProfile(name, observable)

    secrets = frozenset(_resolve(document.get("secrets", []), state_index, "state", "/secrets"))
    critical = None
    if "critical" in document:
        critical = frozenset(_resolve(document["critical"], state_index, "state", "/critical"))
    t_sets = {}
    for name, family in document.get("t_sets", {}).items():
        t_sets[name] = frozenset(frozenset(_resolve(member, state_index, "state", f"/t_sets/{name}"))
                                 for member in family)

    properties = []
    for spec in document.get("properties", []):
        properties.append(PropertySpec(spec["name"], spec.get("kind"), spec.get("formula"),
                                       tuple(spec.get("chain", ())), dict(spec.get("params", {}))))
    _check_unique([spec.name for spec in properties], "property")

    scenario = ScenarioFile(document["name"], system, dict(labeling) if labeling is not None else None,
                            agents, secrets, critical, t_sets, properties)
    for spec in properties:
        scenario.resolve_property(spec)
    return scenario


def _state_list(states: FrozenSet[int], names: Sequence[str]) -> List[str]:
    return [names[q] for q in sorted(states)]


def scenario_to_dict(scenario: ScenarioFile) -> Dict[str, Any]:
    system = scenario.system
    names = system.state_names
    document: Dict[str, Any] = {
        "name": scenario.name,
        "system": {
            "states": list(names),
            "events": list(system.event_names),
            "transitions": [[names[s], system.event_names[e], names[t]]
                            for s, e, t in system.sorted_transitions()],
            "initial": _state_list(system.initial, names),
        },
    }
    if scenario.labeling is not None:
        document["labeling"] = dict(scenario.labeling)
    if scenario.agents:
        document["agents"] = {name: [e for e in system.event_names if e in agent.observable]
                              for name, agent in scenario.agents.items()}
    if scenario.secrets:
        document["secrets"] = _state_list(scenario.secrets, names)
    if scenario.critical is not None:
        document["critical"] = _state_list(scenario.critical, names)
    if scenario.t_sets:
        document["t_sets"] = {name: [_state_list(member, names)
                                     for member in sorted(family, key=lambda m: sorted(m))]
                              for name, family in scenario.t_sets.items()}
    if scenario.properties:
        entries = []
        for spec in scenario.properties:
            entry: Dict[str, Any] = {"name": spec.name}
            if spec.kind is not None:
                entry["kind"] = spec.kind
            else:
                entry["formula"] = spec.formula
            if spec.chain:
                entry["chain"] = list(spec.chain)
            if spec.params:
                entry["params"] = dict(spec.params)
            entries.append(entry)
        document["properties"] = entries
    return document


def serialize_scenario(scenario: ScenarioFile) -> bytes:
    """Inverse of parse_scenario"""
    text = json.dumps(scenario_to_dict(scenario), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def load_scenario_file(path: str) -> ScenarioFile:
    with open(path, "rb") as f:
        return parse_scenario(f.read())
