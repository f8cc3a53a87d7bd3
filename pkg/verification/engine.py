"""
Verification engine for HOObs
Runs the properties of a scenario and exports artifacts
"""

import logging
from typing import Any, Dict, List, Optional, Sequence

from automata.errors import ValidationError
from automata.graph import TransitionGraph
from automata.model import LabeledAutomaton
from config.config_manager import config_manager
from formats.dot import emit_dot
from formats.report import emit_report
from formats.scenario import PropertySpec, ScenarioFile, load_scenario_file
from highorder.nested import FlattenedEstimate
from highorder.pipeline import AgentChain, HighOrderObserver, PipelineCache, order_n_observer
from predicates.builtins import ScsoPredicate
from predicates.parser import render_predicate
from verification.oracle import OracleConfig, oracle_estimates
from verification.verifier import Verdict, estimate_at, verify_order1, verify_order_n, verify_scso


class VerificationEngine:
    """Checks scenario properties, sharing pipeline levels between them"""

    def __init__(self, state_cap: Optional[int] = None):
        self.scenario: Optional[ScenarioFile] = None
        self.cache = PipelineCache()
        self.state_cap = state_cap
        self.results: Dict[str, Verdict] = {}
        self.default_stage = config_manager.get_default_stage()
        self.lazy_order1 = config_manager.is_lazy_order1()

    def set_scenario(self, scenario: ScenarioFile):
        """Set the scenario to verify"""
        self.scenario = scenario
        self.cache.clear()
        self.results.clear()
        graph = TransitionGraph(scenario.system)
        report = graph.validate_automaton()
        for issue in report["issues"]:
            logging.warning(f"Scenario '{scenario.name}': {issue}")
        for warning in report["warnings"]:
            logging.info(f"Scenario '{scenario.name}': {warning}")
        logging.info(f"Scenario '{scenario.name}' loaded: {len(scenario.properties)} properties, "
                     f"system {graph.get_automaton_info()}")

    def load_scenario(self, path: str) -> ScenarioFile:
        scenario = load_scenario_file(path)
        self.set_scenario(scenario)
        return scenario

    def _require_scenario(self) -> ScenarioFile:
        if self.scenario is None:
            raise ValidationError("No scenario loaded")
        return self.scenario

    def chain(self, names: Sequence[str]) -> AgentChain:
        return self._require_scenario().agent_chain(names)

    def labeled(self, agent: Optional[str] = None) -> LabeledAutomaton:
        """The system observed by an agent, or under the scenario labeling when no agent is given"""
        scenario = self._require_scenario()
        if agent is None:
            return scenario.labeled_system()
        return scenario.agent(agent).labeled(scenario.system)

    def order_n(self, chain_names: Sequence[str], stage: str = "observer") -> HighOrderObserver:
        scenario = self._require_scenario()
        return order_n_observer(scenario.system, self.chain(chain_names), stage, self.state_cap, self.cache)

    def run_property(self, spec: PropertySpec, stage: Optional[str] = None) -> Verdict:
        """
        Verify one property

        Args:
            spec: The property
            stage: "auto", "observer" or "detector" (defaults to the configured stage)

        Returns:
            The verdict, also kept in `results`
        """
        scenario = self._require_scenario()
        stage = stage or self.default_stage
        predicate, chain = scenario.resolve_property(spec)
        if isinstance(predicate, ScsoPredicate):
            system = self.labeled(chain[0].name) if chain is not None else scenario.labeled_system()
            verdict = verify_scso(system, predicate.secrets, spec.params.get("method", "han"), spec.name)
        else:
            logging.debug(f"Property '{spec.name}': {render_predicate(predicate, scenario.system.state_names)}")
            if chain is None:
                verdict = verify_order1(scenario.labeled_system(), predicate, self.lazy_order1, spec.name)
            else:
                verdict = verify_order_n(scenario.system, chain, predicate, stage, self.state_cap,
                                         self.cache, spec.name, self.lazy_order1)
        self.results[spec.name] = verdict
        logging.info(f"Property '{spec.name}' {'holds' if verdict.holds else 'is violated'}")
        return verdict

    def run_all(self, names: Optional[Sequence[str]] = None, stage: Optional[str] = None) -> List[Verdict]:
        """Verify the named properties, or all of them, in scenario order"""
        scenario = self._require_scenario()
        specs = [scenario.get_property(name) for name in names] if names else list(scenario.properties)
        return [self.run_property(spec, stage) for spec in specs]

    def estimate(self, chain_names: Sequence[str], alpha: Sequence[str], stage: str = "observer") -> FlattenedEstimate:
        scenario = self._require_scenario()
        return estimate_at(scenario.system, self.chain(chain_names), alpha, stage, self.state_cap, self.cache)

    def oracle_check(self, cfg: Optional[OracleConfig] = None) -> List[Dict[str, Any]]:
        """
        Compare pipeline estimates with oracle estimates for every property chain

        Only α whose oracle estimate is stable are compared.

        Returns:
            One entry per mismatch
        """
        scenario = self._require_scenario()
        cfg = cfg or OracleConfig.from_settings()
        chains = []
        for spec in scenario.properties:
            if spec.chain and tuple(spec.chain) not in chains:
                chains.append(tuple(spec.chain))
        mismatches = []
        for names in chains:
            hoo = self.order_n(names)
            compared = skipped = 0
            for alpha, oracle in oracle_estimates(scenario.system, self.chain(names), cfg).items():
                if not oracle.stable:
                    skipped += 1
                    continue
                compared += 1
                index = hoo.run(alpha)
                pipeline = hoo.estimate(index) if index is not None else None
                if pipeline is None or pipeline.value != oracle.estimate.value:
                    mismatches.append({
                        "chain": list(names),
                        "alpha": list(alpha),
                        "pipeline": None if pipeline is None else pipeline.render(scenario.system.state_names),
                        "oracle": oracle.estimate.render(scenario.system.state_names),
                    })
            logging.info(f"Oracle check of chain {','.join(names)}: {compared} estimates compared, "
                         f"{skipped} unstable skipped")
        return mismatches

    def export_dot(self, artifact, filename: str, secrets: Sequence[int] = ()) -> bool:
        """
        Export an artifact as a DOT file

        Returns:
            True if successful, False otherwise
        """
        try:
            source = emit_dot(artifact, secrets=secrets)
            with open(filename, 'w', encoding='utf-8') as f:
                f.write(source)
            logging.info(f"DOT exported to {filename}")
            return True
        except Exception as e:
            logging.error(f"Failed to export DOT: {e}")
            return False

    def export_report(self, filename: str, fmt: str = "json") -> bool:
        """Write the collected verdicts as a report file"""
        if self.scenario is None:
            logging.error("No scenario loaded")
            return False
        try:
            report = emit_report(list(self.results.values()), fmt, self.scenario.system.state_names)
            with open(filename, 'w', encoding='utf-8') as f:
                f.write(report)
            logging.info(f"Report exported to {filename}")
            return True
        except Exception as e:
            logging.error(f"Failed to export report: {e}")
            return False
