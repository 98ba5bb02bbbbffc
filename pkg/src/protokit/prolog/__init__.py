"""Subset Prolog: reader, writer, SLD engine and the solve_json runner."""

from protokit.prolog.builtins import EvaluationError, JsonTermError, NonGroundOutput, PrologTypeError
from protokit.prolog.engine import (
    DepthLimitExceeded,
    Engine,
    InstantiationError,
    ResourceLimit,
    SolveLimits,
    StepLimitExceeded,
    UnknownPredicate,
    UnsupportedBuiltin,
    solve,
    substitute,
    unify,
)
from protokit.prolog.reader import (
    Clause,
    Program,
    PrologSyntaxError,
    UnsupportedSyntax,
    parse_program,
    parse_term,
)
from protokit.prolog.runner import EntryFailed, EntryMissing, MissingOutput, MultipleOutputs, run_solve_json
from protokit.prolog.terms import NIL, Atom, Compound, CyclicTerm, PrologError, Var, make_list
from protokit.prolog.writer import format_term
