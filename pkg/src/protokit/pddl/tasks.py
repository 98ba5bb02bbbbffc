"""Completion / reordering task derivation and reference (de)serialization."""

from __future__ import annotations

import math

from protokit.pddl.model import PddlError
from protokit.pddl.plan import Plan, Step, parse_step
from protokit.pddl.validate import CompletionRef, GenerationRef, ReorderRef, TaskReference
from protokit.rng import Rng


class DegeneratePlan(PddlError):
    pass


def derive_completion_task(plan: Plan, drop_fraction: float, rng: Rng) -> CompletionRef:
    n = len(plan)
    if n < 2:
        raise DegeneratePlan("completion tasks need a plan of at least 2 steps")
    if not 0 < drop_fraction < 1:
        raise ValueError("drop_fraction must lie strictly between 0 and 1")
    n_drop = min(max(math.floor(n * drop_fraction + 0.5), 1), n - 1)
    dropped = set(rng.sample(range(n), n_drop))
    fixed = tuple((i, plan[i]) for i in range(n) if i not in dropped)
    return CompletionRef(full_length=n, fixed=fixed)


def derive_reordering_task(plan: Plan, rng: Rng) -> tuple[Plan, ReorderRef]:
    steps = list(plan.steps)
    if len(steps) < 2 or len(set(steps)) < 2:
        raise DegeneratePlan("reordering needs at least two distinct steps")
    shuffled = list(steps)
    while shuffled == steps:
        rng.shuffle(shuffled)
    return Plan(tuple(shuffled)), ReorderRef(tuple(shuffled))


def ref_to_json(ref: TaskReference, **extra) -> dict:
    if isinstance(ref, GenerationRef):
        out = {"kind": "generation", "required_cost": ref.required_cost}
    elif isinstance(ref, CompletionRef):
        out = {
            "kind": "completion",
            "full_length": ref.full_length,
            "fixed": [[i, str(s)] for i, s in ref.fixed],
        }
    elif isinstance(ref, ReorderRef):
        out = {"kind": "reordering", "actions": [str(s) for s in ref.actions]}
    else:
        raise TypeError(f"unknown task reference {ref!r}")
    out.update(extra)
    return out


def ref_from_json(obj: dict) -> TaskReference:
    kind = obj.get("kind")
    if kind == "generation":
        return GenerationRef(obj.get("required_cost"))
    if kind == "completion":
        return CompletionRef(int(obj["full_length"]), tuple((int(i), parse_step(s)) for i, s in obj["fixed"]))
    if kind == "reordering":
        return ReorderRef(tuple(parse_step(s) for s in obj["actions"]))
    raise ValueError(f"unknown task kind {kind!r}")


def plan_to_json(plan: Plan) -> list[str]:
    return [str(s) for s in plan]


def plan_from_json(items) -> Plan:
    return Plan(tuple(parse_step(s) for s in items))
