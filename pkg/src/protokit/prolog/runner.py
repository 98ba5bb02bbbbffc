"""The solve_json execution convention.

A program is loaded, its directives run once each, then ``solve_json/0`` is
called once.  The single JSON document it writes with ``json_write`` is the
program's answer.
"""

from __future__ import annotations

import logging

from protokit.jsonio import parse_json
from protokit.prolog.builtins import NonGroundOutput
from protokit.prolog.engine import Engine, SolveLimits
from protokit.prolog.reader import Program, parse_program
from protokit.prolog.terms import Atom, PrologError
from protokit.prolog.writer import format_term

log = logging.getLogger(__name__)

ENTRY = ("solve_json", 0)


class EntryMissing(PrologError):
    pass


class EntryFailed(PrologError):
    pass


class MissingOutput(PrologError):
    pass


class MultipleOutputs(PrologError):
    pass


def run_solve_json_text(program: Program | str, limits: SolveLimits = SolveLimits(), occurs_check: bool = False) -> str:
    """Run the entry point and return the raw JSON text it wrote."""
    if isinstance(program, str):
        program = parse_program(program)
    engine = Engine(program, limits, occurs_check)
    for goal in program.directives:
        if not engine.once(goal):
            log.warning("directive failed: %s", format_term(goal))
    if ENTRY not in engine.db:
        raise EntryMissing("program does not define solve_json/0")
    if not engine.once(Atom("solve_json")):
        raise EntryFailed("solve_json/0 failed")
    if not engine.output:
        raise MissingOutput("solve_json/0 succeeded without writing JSON")
    if len(engine.output) > 1:
        raise MultipleOutputs(f"solve_json/0 wrote {len(engine.output)} JSON documents")
    return engine.output[0]


def run_solve_json(program: Program | str, limits: SolveLimits = SolveLimits(), occurs_check: bool = False):
    """Run the entry point and return the parsed JSON value."""
    return parse_json(run_solve_json_text(program, limits, occurs_check))


__all__ = [
    "EntryFailed",
    "EntryMissing",
    "MissingOutput",
    "MultipleOutputs",
    "NonGroundOutput",
    "run_solve_json",
    "run_solve_json_text",
]
