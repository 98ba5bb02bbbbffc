from protokit.pddl.grounding import ground_actions, instantiate
from protokit.pddl.model import (
    ActionSchema,
    Atom,
    Domain,
    DomainMismatch,
    GroundAction,
    Literal,
    PddlTypeError,
    PredicateDecl,
    Problem,
    TypeHierarchy,
    UnknownObject,
    UnknownPredicate,
    UnsupportedRequirement,
)
from protokit.pddl.parser import parse_domain, parse_problem
from protokit.pddl.plan import Plan, Step, parse_plan, parse_step
from protokit.pddl.printer import format_domain, format_problem
from protokit.pddl.sexpr import PddlError, PddlSyntaxError
