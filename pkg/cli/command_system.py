"""
Command Pattern Implementation for HOObs
Batch subcommands run against a verification engine
"""

import argparse
import json
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, TextIO

from automata.errors import ValidationError
from constructions.composition import concurrent_composition, self_composition
from constructions.detector import build_detector
from constructions.observer import build_observer
from formats.dot import emit_dot
from formats.report import emit_report
from verification.engine import VerificationEngine
from verification.oracle import OracleConfig

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3


def split_list(text: str) -> List[str]:
    """Comma-separated names; the empty string is the empty list"""
    return [item.strip() for item in text.split(",")] if text.strip() else []


def estimator_to_dict(artifact) -> Dict:
    """JSON view of an observer, detector or high-order observer"""
    names = artifact.state_names()
    labels = artifact.label_names
    inner = getattr(artifact, "observer", artifact)
    return {
        "states": names,
        "initial": names[inner.initial],
        "transitions": [[names[s], labels[label], names[t]] for s, label, t in inner.sorted_transitions()],
    }


class Command(ABC):
    """Abstract base class for all commands"""
    name = ""
    help = ""

    def configure(self, parser: argparse.ArgumentParser):
        """Add the command's arguments; every command reads a scenario"""
        parser.add_argument("scenario", help="Scenario JSON file")

    @abstractmethod
    def execute(self, engine: VerificationEngine, args: argparse.Namespace, out: TextIO) -> int:
        """Run the command and return its exit code"""
        pass


class ObserveCommand(Command):
    name = "observe"
    help = "Build the observer of an agent"

    def configure(self, parser):
        super().configure(parser)
        parser.add_argument("--agent", help="Observing agent (default: scenario labeling)")
        parser.add_argument("--completed", action="store_true", help="Keep the empty-set sink")
        parser.add_argument("--format", choices=["dot", "json"], default="dot")

    def execute(self, engine, args, out):
        observer = build_observer(engine.labeled(args.agent), args.completed, engine.state_cap)
        if args.format == "json":
            out.write(json.dumps(estimator_to_dict(observer), indent=2, ensure_ascii=False) + "\n")
        else:
            out.write(emit_dot(observer))
        return EXIT_OK


class DetectCommand(Command):
    name = "detect"
    help = "Build the detector of an agent"

    def configure(self, parser):
        super().configure(parser)
        parser.add_argument("--agent", help="Observing agent (default: scenario labeling)")
        parser.add_argument("--format", choices=["dot", "json"], default="dot")

    def execute(self, engine, args, out):
        detector = build_detector(engine.labeled(args.agent), engine.state_cap)
        if args.format == "json":
            out.write(json.dumps(estimator_to_dict(detector), indent=2, ensure_ascii=False) + "\n")
        else:
            out.write(emit_dot(detector))
        return EXIT_OK


def _composition(engine: VerificationEngine, agent: Optional[str], partner: str):
    system = engine.labeled(agent)
    if partner == "self":
        return self_composition(system, engine.state_cap)
    if partner == "detector":
        wrapped = build_detector(system, engine.state_cap).to_labeled_automaton()
    else:
        wrapped = build_observer(system, state_cap=engine.state_cap).to_labeled_automaton()
    return concurrent_composition(system, wrapped, engine.state_cap)


class ComposeCommand(Command):
    name = "compose"
    help = "Concurrent composition of the system with its observer, detector or itself"

    def configure(self, parser):
        super().configure(parser)
        parser.add_argument("--agent", help="Observing agent (default: scenario labeling)")
        parser.add_argument("--with", dest="partner", choices=["observer", "detector", "self"],
                            default="observer")

    def execute(self, engine, args, out):
        product = _composition(engine, args.agent, args.partner)
        out.write(emit_dot(product, secrets=engine.scenario.secrets))
        return EXIT_OK


class OrderObserverCommand(Command):
    name = "order-obs"
    help = "Build the order-n observer of an agent chain"

    def configure(self, parser):
        super().configure(parser)
        parser.add_argument("--chain", required=True, help="Comma-separated agents A1,...,An")
        parser.add_argument("--stage", choices=["observer", "detector"], default="observer")
        parser.add_argument("--format", choices=["dot", "json"], default="dot")

    def execute(self, engine, args, out):
        hoo = engine.order_n(split_list(args.chain), args.stage)
        if args.format == "json":
            document = estimator_to_dict(hoo)
            document["stats"] = hoo.stats
            out.write(json.dumps(document, indent=2, ensure_ascii=False) + "\n")
        else:
            out.write(emit_dot(hoo))
        return EXIT_OK


class VerifyCommand(Command):
    name = "verify"
    help = "Verify scenario properties"

    def configure(self, parser):
        super().configure(parser)
        parser.add_argument("--property", action="append", dest="properties", metavar="NAME",
                            help="Property to verify (repeatable, default: all)")
        parser.add_argument("--stage", choices=["auto", "observer", "detector"])
        parser.add_argument("--format", choices=["text", "json"], default="text")
        parser.add_argument("--output", help="Report file (default: stdout)")

    def execute(self, engine, args, out):
        verdicts = engine.run_all(args.properties, args.stage)
        if args.output:
            if not engine.export_report(args.output, args.format):
                return EXIT_INVALID
        else:
            out.write(emit_report(verdicts, args.format, engine.scenario.system.state_names))
        return EXIT_OK if all(v.holds for v in verdicts) else EXIT_VIOLATED


class EstimateCommand(Command):
    name = "estimate"
    help = "Print the flattened order-n estimate after a label sequence"

    def configure(self, parser):
        super().configure(parser)
        parser.add_argument("--chain", required=True, help="Comma-separated agents A1,...,An")
        parser.add_argument("--alpha", required=True, help="Comma-separated labels; empty for ε")
        parser.add_argument("--stage", choices=["observer", "detector"], default="observer")

    def execute(self, engine, args, out):
        estimate = engine.estimate(split_list(args.chain), split_list(args.alpha), args.stage)
        out.write(estimate.render(engine.scenario.system.state_names) + "\n")
        return EXIT_OK


class OracleCheckCommand(Command):
    name = "oracle-check"
    help = "Compare pipeline estimates with the brute-force oracle"

    def configure(self, parser):
        super().configure(parser)
        parser.add_argument("--bound", type=int, help="Trace length bound (default from config)")

    def execute(self, engine, args, out):
        defaults = OracleConfig.from_settings()
        cfg = OracleConfig(args.bound if args.bound is not None else defaults.max_trace_len,
                           defaults.stabilization_window, defaults.max_traces)
        mismatches = engine.oracle_check(cfg)
        for mismatch in mismatches:
            out.write(f"{','.join(mismatch['chain'])} at {','.join(mismatch['alpha']) or 'ε'}: "
                      f"pipeline {mismatch['pipeline']} oracle {mismatch['oracle']}\n")
        return EXIT_VIOLATED if mismatches else EXIT_OK


class ExportCommand(Command):
    name = "export"
    help = "Export an artifact as DOT"

    def configure(self, parser):
        super().configure(parser)
        parser.add_argument("--what", required=True, choices=["system", "obs", "det", "cc", "order-obs"])
        parser.add_argument("--agent", help="Observing agent for obs, det and cc")
        parser.add_argument("--chain", help="Comma-separated agents for order-obs")
        parser.add_argument("--output", help="Output file (default: stdout)")

    def execute(self, engine, args, out):
        scenario = engine.scenario
        secrets = ()
        if args.what == "system":
            artifact = scenario.system
            secrets = scenario.secrets
        elif args.what == "obs":
            artifact = build_observer(engine.labeled(args.agent), state_cap=engine.state_cap)
        elif args.what == "det":
            artifact = build_detector(engine.labeled(args.agent), engine.state_cap)
        elif args.what == "cc":
            artifact = _composition(engine, args.agent, "observer")
            secrets = scenario.secrets
        else:
            if not args.chain:
                raise ValidationError("export --what order-obs needs --chain")
            artifact = engine.order_n(split_list(args.chain))
        if args.output:
            return EXIT_OK if engine.export_dot(artifact, args.output, secrets) else EXIT_INVALID
        out.write(emit_dot(artifact, secrets=secrets))
        return EXIT_OK


class CommandManager:
    """Registry of the batch commands"""

    def __init__(self):
        self._commands: Dict[str, Command] = {}

    def register(self, command: Command):
        self._commands[command.name] = command

    def commands(self) -> List[Command]:
        return list(self._commands.values())

    def get(self, name: str) -> Command:
        if name not in self._commands:
            raise ValidationError(f"Unknown command {name!r}")
        return self._commands[name]

    def build_parser(self, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        subparsers = parser.add_subparsers(dest="command", required=True)
        for command in self._commands.values():
            command.configure(subparsers.add_parser(command.name, help=command.help))
        return parser

    def execute_command(self, engine: VerificationEngine, args: argparse.Namespace, out: TextIO) -> int:
        """Execute the command named in `args`"""
        return self.get(args.command).execute(engine, args, out)


def default_command_manager() -> CommandManager:
    manager = CommandManager()
    for command in (ObserveCommand(), DetectCommand(), ComposeCommand(), OrderObserverCommand(),
                    VerifyCommand(), EstimateCommand(), OracleCheckCommand(), ExportCommand()):
        manager.register(command)
    return manager
