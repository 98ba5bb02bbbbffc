"""Canonical PDDL text: 2-space indent, lowercase keywords."""

from __future__ import annotations

from protokit.pddl.model import ROOT_TYPE, Domain, Problem


def _typed(pairs, omit_object=True) -> str:
    """Group consecutive names sharing a type: ``a b - t c - u``."""
    parts: list[str] = []
    i = 0
    while i < len(pairs):
        t = pairs[i][1]
        j = i
        while j < len(pairs) and pairs[j][1] == t:
            j += 1
        parts.extend(n for n, _ in pairs[i:j])
        if not (omit_object and t == ROOT_TYPE):
            parts.extend(["-", t])
        i = j
    return " ".join(parts)


def _conj(literals) -> str:
    items = [str(l) for l in literals]
    if len(items) == 1:
        return items[0]
    return "(and" + "".join(" " + s for s in items) + ")"


def format_domain(domain: Domain) -> str:
    # without :typing, parameter lists are printed bare (everything is an object)
    bare = ":typing" not in domain.requirements
    lines = [f"(define (domain {domain.name})"]
    if domain.requirements:
        lines.append("  (:requirements " + " ".join(sorted(domain.requirements)) + ")")
    if domain.types.parents:
        # grouped by parent; object-children go last where a bare trailing list means object
        rest = sorted((p for p in domain.types.parents if p[1] != ROOT_TYPE), key=lambda p: (p[1], p[0]))
        roots = [p for p in domain.types.parents if p[1] == ROOT_TYPE]
        lines.append("  (:types " + _typed(rest + roots) + ")")
    if domain.constants:
        lines.append("  (:constants " + _typed(domain.constants, omit_object=bare) + ")")
    if domain.predicates:
        lines.append("  (:predicates")
        for p in domain.predicates:
            inner = _typed(p.params, omit_object=bare)
            lines.append(f"    ({p.name}{' ' + inner if inner else ''})")
        lines[-1] += ")"
    for a in domain.actions:
        lines.append(f"  (:action {a.name}")
        lines.append(f"    :parameters ({_typed(a.params, omit_object=bare)})")
        if a.precondition:
            lines.append(f"    :precondition {_conj(a.precondition)}")
        effects = [str(x) for x in a.add] + [f"(not {x})" for x in a.delete]
        if len(effects) == 1:
            eff = effects[0]
        else:
            eff = "(and" + "".join(" " + e for e in effects) + ")"
        lines.append(f"    :effect {eff})")
    lines[-1] += ")"
    return "\n".join(lines) + "\n"


def format_problem(problem: Problem, typed: bool = True) -> str:
    lines = [f"(define (problem {problem.name})", f"  (:domain {problem.domain_name})"]
    if problem.objects:
        lines.append("  (:objects " + _typed(problem.objects, omit_object=not typed) + ")")
    lines.append("  (:init")
    for atom in sorted(problem.init):
        lines.append(f"    {atom}")
    lines[-1] += ")"
    lines.append("  (:goal (and")
    for lit in problem.goal:
        lines.append(f"    {lit}")
    lines[-1] += ")))"
    return "\n".join(lines) + "\n"
