"""Optimal (minimum-length) planning by breadth-first search.

Unit action costs make BFS with duplicate detection optimal.  Successors are
generated in the lexicographic ground-action order, so the returned plan is
the same on every run.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Union

from protokit.pddl.grounding import ground_actions
from protokit.pddl.model import Domain, Problem
from protokit.pddl.plan import Plan, Step


@dataclass(frozen=True)
class SearchLimits:
    max_nodes: int = 1_000_000
    max_depth: int = 200
    max_seconds: float = 60.0

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_depth <= 0 or self.max_seconds <= 0:
            raise ValueError("search limits must be positive")


@dataclass(frozen=True)
class Solved:
    plan: Plan
    cost: int
    nodes_expanded: int = 0


@dataclass(frozen=True)
class Unsolvable:
    nodes_expanded: int = 0


@dataclass(frozen=True)
class LimitExceeded:
    nodes_expanded: int
    reason: str = "nodes"


SearchResult = Union[Solved, Unsolvable, LimitExceeded]


class _Compiled:
    """Ground task with atoms interned as integers and static preconditions pruned."""

    def __init__(self, domain: Domain, problem: Problem):
        dynamic = {a.predicate for s in domain.actions for a in s.add + s.delete}
        self.atoms: dict = {}
        intern = self._intern
        init = problem.init
        self.init = frozenset(intern(a) for a in init if a.predicate in dynamic)
        self.steps: list[Step] = []
        self.pre_pos: list[frozenset] = []
        self.pre_neg: list[frozenset] = []
        self.add: list[frozenset] = []
        self.delete: list[frozenset] = []
        self.triggers: dict[int, list[int]] = {}
        self.unconditional: list[int] = []
        for act in ground_actions(domain, problem):
            ok = True
            pos, neg = [], []
            for lit in act.precondition:
                if lit.atom.predicate in dynamic:
                    (pos if lit.positive else neg).append(intern(lit.atom))
                elif (lit.atom in init) != lit.positive:
                    ok = False
                    break
            if not ok:
                continue
            idx = len(self.steps)
            self.steps.append(Step.of(act.name, *act.args))
            self.pre_pos.append(frozenset(pos))
            self.pre_neg.append(frozenset(neg))
            self.add.append(frozenset(intern(a) for a in act.add))
            self.delete.append(frozenset(intern(a) for a in act.delete))
            if pos:
                self.triggers.setdefault(min(pos), []).append(idx)
            else:
                self.unconditional.append(idx)
        self.goal_pos = set()
        self.goal_neg = set()
        self.static_goal_ok = True
        for lit in problem.goal:
            if lit.atom.predicate in dynamic:
                (self.goal_pos if lit.positive else self.goal_neg).add(intern(lit.atom))
            elif (lit.atom in init) != lit.positive:
                self.static_goal_ok = False

    def _intern(self, atom) -> int:
        i = self.atoms.get(atom)
        if i is None:
            i = self.atoms[atom] = len(self.atoms)
        return i

    def is_goal(self, state: frozenset) -> bool:
        return self.static_goal_ok and self.goal_pos <= state and not (self.goal_neg & state)

    def successors(self, state: frozenset):
        cand = list(self.unconditional)
        for atom in state:
            cand.extend(self.triggers.get(atom, ()))
        cand.sort()
        for i in cand:
            if self.pre_pos[i] <= state and not (self.pre_neg[i] & state):
                yield i, (state - self.delete[i]) | self.add[i]


def solve_optimal(domain: Domain, problem: Problem, limits: SearchLimits = SearchLimits()) -> SearchResult:
    task = _Compiled(domain, problem)
    start = task.init
    if task.is_goal(start):
        return Solved(Plan(()), 0, 0)
    parents: dict[frozenset, tuple] = {start: (None, -1)}
    queue = deque([(start, 0)])
    expanded = 0
    truncated = False
    deadline = time.monotonic() + limits.max_seconds
    while queue:
        state, depth = queue.popleft()
        if depth >= limits.max_depth:
            truncated = True
            continue
        if expanded >= limits.max_nodes:
            return LimitExceeded(expanded, "nodes")
        if expanded & 1023 == 0 and time.monotonic() > deadline:
            return LimitExceeded(expanded, "seconds")
        expanded += 1
        for i, child in task.successors(state):
            if child in parents:
                continue
            parents[child] = (state, i)
            if task.is_goal(child):
                steps = []
                s = child
                while True:
                    prev, a = parents[s]
                    if prev is None:
                        break
                    steps.append(task.steps[a])
                    s = prev
                steps.reverse()
                return Solved(Plan(tuple(steps)), len(steps), expanded)
            queue.append((child, depth + 1))
    if truncated:
        return LimitExceeded(expanded, "depth")
    return Unsolvable(expanded)
