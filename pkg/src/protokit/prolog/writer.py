"""Canonical term text (quoted, minimally parenthesized, list sugar)."""

from __future__ import annotations

import math
import re

from protokit.prolog.reader import INFIX, PREFIX, SYMBOL_CHARS
from protokit.prolog.terms import Atom, Compound, Var, deref

_PLAIN_ATOM = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_SOLO_ATOMS = {"[]", "!", ";", "{}"}


def format_float(x: float) -> str:
    """Shortest round-trip decimal, always readable back as a float."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    s = repr(x)
    mant, e, exp = s.partition("e")
    if "." not in mant:
        mant += ".0"
    return mant + (e + exp if e else "")


def atom_needs_quotes(name: str) -> bool:
    if name in _SOLO_ATOMS or _PLAIN_ATOM.match(name):
        return False
    if name and all(c in SYMBOL_CHARS for c in name):
        return False
    return True


def quote_atom(name: str) -> str:
    if not atom_needs_quotes(name):
        return name
    out = []
    for ch in name:
        if ch == "'":
            out.append("\\'")
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        else:
            out.append(ch)
    return "'" + "".join(out) + "'"


def _is_op_atom(name: str) -> bool:
    return name in INFIX or name in PREFIX


class _Writer:
    def __init__(self, quoted: bool):
        self.quoted = quoted
        self.names: dict[int, str] = {}
        self.used: set[str] = set()

    def var_name(self, v: Var) -> str:
        name = self.names.get(v.id)
        if name is None:
            name = v.name
            if name == "_" or name in self.used:
                k = len(self.names)
                name = f"_G{k}"
                while name in self.used:
                    k += 1
                    name = f"_G{k}"
            self.names[v.id] = name
            self.used.add(name)
        return name

    def atom(self, name: str) -> str:
        return quote_atom(name) if self.quoted else name

    def fmt(self, t, max_prec: int = 1200) -> str:
        t = deref(t)
        if type(t) is Var:
            return self.var_name(t)
        if type(t) is int:
            return str(t)
        if type(t) is float:
            return format_float(t)
        if type(t) is Atom:
            s = self.atom(t.name)
            if t.name == ",":
                return "','"
            if max_prec < 999 and _is_op_atom(t.name):
                return f"({s})"
            return s
        if type(t) is Compound:
            return self.compound(t, max_prec)
        raise TypeError(f"not a Prolog term: {t!r}")

    def operand(self, t, max_prec: int) -> str:
        # an operator atom next to an operator is bracketed so it is not read as one
        t = deref(t)
        if type(t) is Atom and t.name != "," and _is_op_atom(t.name):
            return f"({self.atom(t.name)})"
        return self.fmt(t, max_prec)

    def compound(self, t: Compound, max_prec: int) -> str:
        name, args = t.functor, t.args
        if name == "." and len(args) == 2:
            return self.plist(t)
        if len(args) == 2 and name in INFIX:
            prec, typ = INFIX[name]
            lmax = prec if typ == "yfx" else prec - 1
            rmax = prec if typ == "xfy" else prec - 1
            left = self.operand(args[0], lmax)
            right = self.operand(args[1], rmax)
            if name == ",":
                s = f"{left},{right}"
            else:
                s = f"{left} {self.atom(name)} {right}"
            return f"({s})" if prec > max_prec else s
        if len(args) == 1 and name in PREFIX:
            arg = deref(args[0])
            if type(arg) in (int, float) or (type(arg) is Atom and _is_op_atom(arg.name)):
                return f"{self.atom(name)}({self.fmt(arg, 999)})"
            prec, typ = PREFIX[name]
            amax = prec if typ == "fy" else prec - 1
            inner = self.operand(arg, amax)
            sep = ""
            if inner[:1] in SYMBOL_CHARS or inner[:1] == "(" or name[:1].isalpha():
                sep = " "
            s = f"{self.atom(name)}{sep}{inner}"
            return f"({s})" if prec > max_prec else s
        inner = ",".join(self.fmt(a, 999) for a in args)
        return f"{self.atom(name)}({inner})"

    def plist(self, t) -> str:
        parts = []
        while True:
            parts.append(self.fmt(t.args[0], 999))
            tail = deref(t.args[1])
            if type(tail) is Compound and tail.functor == "." and len(tail.args) == 2:
                t = tail
                continue
            if tail == Atom("[]"):
                return "[" + ",".join(parts) + "]"
            return "[" + ",".join(parts) + "|" + self.fmt(tail, 999) + "]"


def format_term(t, quoted: bool = True) -> str:
    return _Writer(quoted).fmt(t)


def format_clause(head, body=()) -> str:
    w = _Writer(True)
    if not body:
        return w.fmt(head, 1199) + "."
    goals = ",\n    ".join(w.fmt(g, 999) for g in body)
    return f"{w.fmt(head, 1199)} :-\n    {goals}."
