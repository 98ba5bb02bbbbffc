"""Prolog term representation.

Numbers are plain Python ``int`` / ``float``.  Variables are mutable cells
bound in place by the engine (and unbound again on backtracking); everything
else is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count


class PrologError(Exception):
    """Base class for reader and engine errors."""


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, slots=True)
class Compound:
    functor: str
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError("compound terms need at least one argument")

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def key(self) -> tuple[str, int]:
        return (self.functor, len(self.args))


_var_ids = count()


class Var:
    __slots__ = ("name", "ref", "id")

    def __init__(self, name: str = "_"):
        self.name = name
        self.ref = None
        self.id = next(_var_ids)

    def __repr__(self):
        return f"Var({self.name}#{self.id})"


NIL = Atom("[]")
TRUE = Atom("true")
EMPTY = ()


def deref(t):
    while type(t) is Var:
        r = t.ref
        if r is None:
            return t
        t = r
    return t


def is_callable(t) -> bool:
    return isinstance(t, (Atom, Compound))


def make_list(items, tail=NIL):
    out = tail
    for x in reversed(list(items)):
        out = Compound(".", (x, out))
    return out


def list_items(t) -> tuple[list, object]:
    """Walk a (possibly partial) list: returns (elements, dereferenced tail)."""
    items = []
    t = deref(t)
    while type(t) is Compound and t.functor == "." and len(t.args) == 2:
        items.append(t.args[0])
        t = deref(t.args[1])
    return items, t


def proper_list(t) -> list | None:
    items, tail = list_items(t)
    return items if tail == NIL else None


class CyclicTerm(PrologError):
    pass


def copy_term(t, leaf=None):
    """Rebuild ``t`` with bindings applied; ``leaf`` maps each unbound Var.

    Iterative, so long lists do not hit the Python recursion limit.  Raises
    CyclicTerm for terms made cyclic by unification without occurs-check.
    """
    t = deref(t)
    if type(t) is not Compound:
        return leaf(t) if leaf is not None and type(t) is Var else t
    on_path = {id(t)}
    stack = [[t, 0, []]]
    while True:
        frame = stack[-1]
        c, i, new = frame
        if i == len(c.args):
            stack.pop()
            on_path.discard(id(c))
            r = Compound(c.functor, tuple(new))
            if not stack:
                return r
            stack[-1][2].append(r)
            continue
        frame[1] = i + 1
        a = deref(c.args[i])
        if type(a) is Compound:
            if id(a) in on_path:
                raise CyclicTerm("cyclic term")
            on_path.add(id(a))
            stack.append([a, 0, []])
        elif leaf is not None and type(a) is Var:
            new.append(leaf(a))
        else:
            new.append(a)


def resolve(t):
    """Copy of ``t`` with every bound variable replaced by its value."""
    return copy_term(t)


def rename_apart(t):
    """Like resolve, but unbound variables are replaced by fresh ones."""
    mapping: dict[int, Var] = {}

    def fresh(v):
        n = mapping.get(v.id)
        if n is None:
            n = mapping[v.id] = Var()
        return n

    return copy_term(t, fresh)


def term_vars(t, acc: list | None = None) -> list:
    acc = [] if acc is None else acc
    seen = {id(v) for v in acc}
    stack = [t]
    while stack:
        x = deref(stack.pop())
        if type(x) is Var:
            if id(x) not in seen:
                seen.add(id(x))
                acc.append(x)
        elif type(x) is Compound:
            stack.extend(reversed(x.args))
    return acc


def is_ground(t) -> bool:
    return not term_vars(t)


def variant(a, b) -> bool:
    """Structural equality up to a consistent renaming of variables."""
    fwd: dict[int, int] = {}
    back: dict[int, int] = {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = deref(x), deref(y)
        if type(x) is Var or type(y) is Var:
            if type(x) is not Var or type(y) is not Var:
                return False
            if fwd.setdefault(x.id, y.id) != y.id or back.setdefault(y.id, x.id) != x.id:
                return False
        elif type(x) is Compound:
            if type(y) is not Compound or x.functor != y.functor or len(x.args) != len(y.args):
                return False
            stack.extend(zip(x.args, y.args))
        elif type(x) is not type(y) or x != y:
            return False
    return True
