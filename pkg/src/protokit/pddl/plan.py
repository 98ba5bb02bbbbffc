"""VAL-style plan files: one parenthesized ground action per line."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from protokit.pddl.sexpr import PddlSyntaxError, SList, Token, read_all


class Step(NamedTuple):
    name: str
    args: tuple[str, ...] = ()

    @classmethod
    def of(cls, name: str, *args: str) -> "Step":
        # step identity is case-insensitive
        return cls(name.lower(), tuple(a.lower() for a in args))

    def __str__(self):
        return "(" + " ".join((self.name,) + self.args) + ")"


@dataclass(frozen=True)
class Plan:
    steps: tuple[Step, ...] = ()

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, i):
        return self.steps[i]

    @property
    def cost(self) -> int:
        return len(self.steps)

    def to_text(self) -> str:
        return "".join(f"{s}\n" for s in self.steps)


def parse_step(text: str) -> Step:
    plan = parse_plan(text)
    if len(plan) != 1:
        raise PddlSyntaxError(f"expected one action, found {len(plan)}", 1, 1)
    return plan[0]


def parse_plan(text: str) -> Plan:
    steps = []
    for form in read_all(text):
        if isinstance(form, Token):
            raise PddlSyntaxError(f"unexpected {form.text!r} outside an action", form.line, form.col)
        if not len(form):
            raise PddlSyntaxError("empty action", form.line, form.col)
        words = []
        for x in form:
            if isinstance(x, SList):
                raise PddlSyntaxError("nested list in plan step", x.line, x.col)
            words.append(x.text)
        steps.append(Step.of(*words))
    return Plan(tuple(steps))
