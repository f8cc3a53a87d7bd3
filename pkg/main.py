#!/usr/bin/env python3
"""
HOObs - High-Order Observers
Batch tool for state-estimation-based properties of labeled automata
"""

import argparse
import logging
import sys
from typing import List, Optional, TextIO

from automata.errors import HoobsError, ResourceError
from cli.command_system import EXIT_INVALID, EXIT_RESOURCE, default_command_manager
from config.config_manager import config_manager
from verification.engine import VerificationEngine


def build_parser(manager=None) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hoobs", description="Observers, detectors and order-n observers of labeled automata")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log debug output to stderr")
    (manager or default_command_manager()).build_parser(parser)
    return parser


def setup_logging(verbose: bool = False):
    """Configure the root logger once; artifacts go to stdout, logs to stderr"""
    level = logging.DEBUG if verbose else getattr(
        logging, str(config_manager.get_global_setting('log_level', 'WARNING')).upper(), logging.WARNING)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s: %(message)s")


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Run one subcommand

    Returns:
        0 when everything holds, 1 on a violation or oracle mismatch,
        2 on a usage or validation error, 3 when a size guard is exceeded
    """
    out = out or sys.stdout
    manager = default_command_manager()
    parser = build_parser(manager)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INVALID
    setup_logging(args.verbose)

    try:
        engine = VerificationEngine()
        engine.load_scenario(args.scenario)
        return manager.execute_command(engine, args, out)
    except ResourceError as e:
        logging.error(str(e))
        return EXIT_RESOURCE
    except HoobsError as e:
        logging.error(str(e))
        return EXIT_INVALID
    except OSError as e:
        logging.error(f"Cannot read scenario: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
