"""Plan simulation with VAL semantics and the per-task verifiers."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Literal as Lit, Union

from protokit.pddl.grounding import instantiate, typed_objects
from protokit.pddl.model import Atom, Domain, GroundAction, Literal, PddlError, Problem
from protokit.pddl.plan import Plan, Step


class UnsatisfiedPrecondition(PddlError):
    def __init__(self, literal: Literal):
        super().__init__(f"precondition not satisfied: {literal}")
        self.literal = literal


def apply(state: frozenset, action: GroundAction) -> frozenset:
    """Successor state; deletes are applied before adds."""
    for lit in sorted(action.precondition):
        if (lit.atom in state) != lit.positive:
            raise UnsatisfiedPrecondition(lit)
    return (state - action.delete) | action.add


def holds(state: frozenset, lit: Literal) -> bool:
    return (lit.atom in state) == lit.positive


@dataclass(frozen=True)
class Failure:
    step: int
    kind: str  # UnknownAction | ArityMismatch | UnsatisfiedPrecondition | GoalNotReached
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    final_state: frozenset
    cost: int
    failure: Failure | None = None


class _Resolver:
    """Maps lowercased plan steps back onto the domain's case-preserving names."""

    def __init__(self, domain: Domain, problem: Problem):
        self.domain = domain
        self.schemas = {a.name.lower(): a for a in domain.actions}
        self.objects = typed_objects(domain, problem)
        self.lower = {o.lower(): o for o in self.objects}

    def resolve(self, index: int, step: Step) -> GroundAction | Failure:
        schema = self.schemas.get(step.name.lower())
        if schema is None:
            return Failure(index, "UnknownAction", f"no action named {step.name!r}")
        if len(step.args) != len(schema.params):
            return Failure(
                index, "ArityMismatch",
                f"{schema.name} takes {len(schema.params)} arguments, got {len(step.args)}",
            )
        args = []
        for a, (_, ptype) in zip(step.args, schema.params):
            obj = a if a in self.objects else self.lower.get(a.lower())
            if obj is None:
                return Failure(index, "UnknownAction", f"unknown object {a!r} in {step}")
            if not self.domain.types.is_subtype(self.objects[obj], ptype):
                return Failure(index, "UnknownAction", f"object {a!r} is not of type {ptype!r}")
            args.append(obj)
        return instantiate(schema, tuple(args))


def validate_plan(domain: Domain, problem: Problem, plan: Plan) -> ValidationReport:
    resolver = _Resolver(domain, problem)
    state = problem.init
    for i, step in enumerate(plan):
        action = resolver.resolve(i, step)
        if isinstance(action, Failure):
            return ValidationReport(False, state, len(plan), action)
        try:
            state = apply(state, action)
        except UnsatisfiedPrecondition as e:
            return ValidationReport(
                False, state, len(plan), Failure(i, "UnsatisfiedPrecondition", str(e.literal))
            )
    for lit in problem.goal:
        if not holds(state, lit):
            return ValidationReport(False, state, len(plan), Failure(len(plan), "GoalNotReached", str(lit)))
    return ValidationReport(True, state, len(plan))


# task references ----------------------------------------------------------


@dataclass(frozen=True)
class GenerationRef:
    required_cost: int | None = None

    kind = "generation"


@dataclass(frozen=True)
class CompletionRef:
    full_length: int
    fixed: tuple[tuple[int, Step], ...]

    kind = "completion"

    def __post_init__(self):
        idx = [i for i, _ in self.fixed]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("completion indices must be strictly increasing")
        if idx and (idx[0] < 0 or idx[-1] >= self.full_length):
            raise ValueError("completion index out of range")

    def partial_plan(self) -> Plan:
        return Plan(tuple(s for _, s in self.fixed))


@dataclass(frozen=True)
class ReorderRef:
    actions: tuple[Step, ...]

    kind = "reordering"

    def __post_init__(self):
        if not self.actions:
            raise ValueError("reordering reference needs at least one action")


TaskReference = Union[GenerationRef, CompletionRef, ReorderRef]


@dataclass(frozen=True)
class Verdict:
    accept: bool
    reason: str
    failure_step: int | None = None

    def to_json(self) -> str:
        return json.dumps(
            {"accept": self.accept, "reason": self.reason, "failure_step": self.failure_step},
            separators=(",", ":"),
        )


def _invalid(report: ValidationReport) -> Verdict:
    f = report.failure
    return Verdict(False, f"{f.kind}: {f.detail}", f.step)


def verify_generation(domain, problem, plan: Plan, ref: GenerationRef) -> Verdict:
    report = validate_plan(domain, problem, plan)
    if not report.valid:
        return _invalid(report)
    if ref.required_cost is not None and report.cost != ref.required_cost:
        return Verdict(False, f"cost {report.cost} differs from required {ref.required_cost}")
    return Verdict(True, "valid plan")


def verify_completion(
    domain, problem, plan: Plan, ref: CompletionRef, mode: Lit["positional", "subsequence"] = "positional"
) -> Verdict:
    report = validate_plan(domain, problem, plan)
    if not report.valid:
        return _invalid(report)
    if mode == "positional":
        if len(plan) != ref.full_length:
            return Verdict(False, f"plan length {len(plan)} differs from expected {ref.full_length}")
        for i, step in ref.fixed:
            if plan[i] != step:
                return Verdict(False, f"step {i} is {plan[i]}, expected {step}", i)
        return Verdict(True, "valid plan containing the fixed steps in place")
    if mode == "subsequence":
        it = iter(enumerate(plan))
        for _, step in ref.fixed:
            if not any(s == step for _, s in it):
                return Verdict(False, f"fixed step {step} missing or out of order")
        return Verdict(True, "valid plan containing the fixed steps in order")
    raise ValueError(f"unknown completion mode {mode!r}")


def verify_reordering(domain, problem, plan: Plan, ref: ReorderRef) -> Verdict:
    report = validate_plan(domain, problem, plan)
    if not report.valid:
        return _invalid(report)
    have, want = Counter(plan.steps), Counter(ref.actions)
    if have != want:
        missing = sorted(map(str, (want - have).elements()))
        extra = sorted(map(str, (have - want).elements()))
        return Verdict(False, f"action multiset differs (missing {missing}, extra {extra})")
    return Verdict(True, "valid reordering")


def verify(domain, problem, plan: Plan, ref: TaskReference, mode: str = "positional") -> Verdict:
    if isinstance(ref, GenerationRef):
        return verify_generation(domain, problem, plan, ref)
    if isinstance(ref, CompletionRef):
        return verify_completion(domain, problem, plan, ref, mode)
    if isinstance(ref, ReorderRef):
        return verify_reordering(domain, problem, plan, ref)
    raise TypeError(f"unknown task reference {ref!r}")
