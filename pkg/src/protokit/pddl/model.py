"""Typed STRIPS domain/problem values.

All containers are tuples or frozensets so parsed values compare structurally
and can be hashed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from protokit.pddl.sexpr import PddlError

ROOT_TYPE = "object"


class UnsupportedRequirement(PddlError):
    def __init__(self, tag: str):
        super().__init__(f"unsupported requirement or construct: {tag}")
        self.tag = tag


class PddlTypeError(PddlError):
    pass


class UnknownPredicate(PddlError):
    pass


class UnknownObject(PddlError):
    pass


class DomainMismatch(PddlError):
    pass


class Atom(NamedTuple):
    predicate: str
    args: tuple[str, ...] = ()

    def __str__(self):
        return "(" + " ".join((self.predicate,) + self.args) + ")"


class Literal(NamedTuple):
    atom: Atom
    positive: bool = True

    def __str__(self):
        return str(self.atom) if self.positive else f"(not {self.atom})"


@dataclass(frozen=True)
class TypeHierarchy:
    """Maps each declared type to its parent; ``object`` is the implicit root."""

    parents: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        # declaration order carries no meaning; sort so equal hierarchies compare equal
        object.__setattr__(self, "parents", tuple(sorted(self.parents)))
        table = dict(self.parents)
        if len(table) != len(self.parents):
            raise PddlTypeError("type declared twice")
        for child, parent in self.parents:
            if child == ROOT_TYPE:
                raise PddlTypeError("'object' cannot be redeclared")
            if parent != ROOT_TYPE and parent not in table:
                raise PddlTypeError(f"parent type {parent!r} of {child!r} is not declared")
        for child, _ in self.parents:
            seen = {child}
            t = table[child]
            while t != ROOT_TYPE:
                if t in seen:
                    raise PddlTypeError(f"cyclic type hierarchy through {child!r}")
                seen.add(t)
                t = table[t]

    @property
    def names(self) -> tuple[str, ...]:
        return (ROOT_TYPE,) + tuple(c for c, _ in self.parents)

    def __contains__(self, name: str) -> bool:
        return name == ROOT_TYPE or any(c == name for c, _ in self.parents)

    def is_subtype(self, child: str, ancestor: str) -> bool:
        if ancestor == ROOT_TYPE:
            return True
        table = dict(self.parents)
        t = child
        while True:
            if t == ancestor:
                return True
            if t == ROOT_TYPE or t not in table:
                return False
            t = table[t]


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    params: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        names = [v for v, _ in self.params]
        if len(set(names)) != len(names):
            raise PddlTypeError(f"duplicate parameter in predicate {self.name!r}")

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[tuple[str, str], ...] = ()
    precondition: tuple[Literal, ...] = ()
    add: tuple[Atom, ...] = ()
    delete: tuple[Atom, ...] = ()


@dataclass(frozen=True)
class Domain:
    name: str
    requirements: frozenset = frozenset()
    types: TypeHierarchy = field(default_factory=TypeHierarchy)
    predicates: tuple[PredicateDecl, ...] = ()
    actions: tuple[ActionSchema, ...] = ()
    constants: tuple[tuple[str, str], ...] = ()

    def predicate(self, name: str) -> PredicateDecl | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    def action(self, name: str) -> ActionSchema | None:
        for a in self.actions:
            if a.name == name:
                return a
        return None


@dataclass(frozen=True)
class Problem:
    name: str
    domain_name: str
    objects: tuple[tuple[str, str], ...] = ()
    init: frozenset = frozenset()
    goal: tuple[Literal, ...] = ()


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[str, ...]
    precondition: frozenset = frozenset()
    add: frozenset = frozenset()
    delete: frozenset = frozenset()

    @property
    def pre_pos(self) -> frozenset:
        return frozenset(l.atom for l in self.precondition if l.positive)

    @property
    def pre_neg(self) -> frozenset:
        return frozenset(l.atom for l in self.precondition if not l.positive)

    def __str__(self):
        return "(" + " ".join((self.name,) + self.args) + ")"
