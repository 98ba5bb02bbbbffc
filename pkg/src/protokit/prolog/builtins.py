"""Builtin predicates of the supported subset.

Deterministic builtins return a bool; nondeterministic ones are generators
that bind through ``engine.unify`` and yield once per solution.  Control
constructs (``,`` ``;`` ``->`` ``!`` ``\\+`` ``call/1`` ``findall/3``) live
in the engine loop itself.
"""

from __future__ import annotations

import json
import math
from functools import cmp_to_key

from protokit.prolog.terms import (
    NIL,
    Atom,
    Compound,
    CyclicTerm,
    PrologError,
    Var,
    deref,
    list_items,
    make_list,
    proper_list,
    resolve,
)


class PrologTypeError(PrologError):
    pass


class EvaluationError(PrologError):
    """Arithmetic on unbound or non-numeric values, or undefined results."""


class NonGroundOutput(PrologError):
    pass


class JsonTermError(PrologError):
    pass


OUT_OF_SUBSET: set = set()


def _inst(what: str):
    from protokit.prolog.engine import InstantiationError

    return InstantiationError(what)


# arithmetic ------------------------------------------------------------------


def _int_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _need_int(op, *xs):
    for x in xs:
        if type(x) is not int:
            raise EvaluationError(f"{op}: integer expected, got {x!r}")


def _divide(a, b):
    if b == 0:
        raise EvaluationError("division by zero")
    if type(a) is int and type(b) is int:
        if a % b == 0:
            return a // b
        return a / b
    return a / b


def _mod(a, b):
    _need_int("mod", a, b)
    if b == 0:
        raise EvaluationError("division by zero")
    return a % b


def _intdiv(a, b):
    _need_int("//", a, b)
    if b == 0:
        raise EvaluationError("division by zero")
    return _int_div(a, b)


BINARY = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _divide,
    "//": _intdiv,
    "mod": _mod,
    "min": lambda a, b: b if b < a else a,
    "max": lambda a, b: b if b > a else a,
}

UNARY = {
    "-": lambda a: -a,
    "abs": abs,
}


def evaluate(t):
    t = deref(t)
    tt = type(t)
    if tt is int or tt is float:
        return t
    if tt is Var:
        raise EvaluationError("arguments are not sufficiently instantiated")
    if tt is Compound:
        if len(t.args) == 2 and t.functor in BINARY:
            r = BINARY[t.functor](evaluate(t.args[0]), evaluate(t.args[1]))
        elif len(t.args) == 1 and t.functor in UNARY:
            r = UNARY[t.functor](evaluate(t.args[0]))
        else:
            raise EvaluationError(f"{t.functor}/{len(t.args)} is not an arithmetic function")
        if type(r) is float and not math.isfinite(r):
            raise EvaluationError("float overflow or undefined result")
        return r
    if tt is Atom:
        raise EvaluationError(f"{t.name}/0 is not an arithmetic function")
    raise EvaluationError(f"cannot evaluate {t!r}")


def _is(e, lhs, rhs):
    return e.unify(lhs, evaluate(rhs))


def _cmp(op):
    def check(e, a, b):
        return op(evaluate(a), evaluate(b))

    return check


# standard order of terms ------------------------------------------------------


def _rank(t) -> int:
    tt = type(t)
    if tt is Var:
        return 0
    if tt is int or tt is float:
        return 1
    if tt is Atom:
        return 3
    return 4


def compare_terms(a, b) -> int:
    """Standard order: Var < Number < Atom < Compound; -1, 0 or 1."""
    while True:
        a, b = deref(a), deref(b)
        ra, rb = _rank(a), _rank(b)
        if ra != rb:
            return -1 if ra < rb else 1
        if ra == 0:
            return (a.id > b.id) - (a.id < b.id)
        if ra == 1:
            if a == b:
                # 1.0 @< 1
                if type(a) is type(b):
                    return 0
                return -1 if type(a) is float else 1
            return -1 if a < b else 1
        if ra == 3:
            return (a.name > b.name) - (a.name < b.name)
        if len(a.args) != len(b.args):
            return -1 if len(a.args) < len(b.args) else 1
        if a.functor != b.functor:
            return -1 if a.functor < b.functor else 1
        for x, y in zip(a.args[:-1], b.args[:-1]):
            c = compare_terms(x, y)
            if c:
                return c
        # loop on the last argument so long lists stay off the Python stack
        a, b = a.args[-1], b.args[-1]


def _order(pred):
    def check(e, a, b):
        return pred(compare_terms(a, b))

    return check


def _structurally_equal(a, b) -> bool:
    return compare_terms(a, b) == 0


def _list_arg(t, who: str) -> list:
    items = proper_list(t)
    if items is None:
        _, tail = list_items(t)
        if type(tail) is Var:
            raise _inst(f"{who}: partial list")
        raise PrologTypeError(f"{who}: list expected")
    return items


def _msort(e, lst, out):
    items = _list_arg(lst, "msort/2")
    return e.unify(out, make_list(sorted(items, key=cmp_to_key(compare_terms))))


def _sort(e, lst, out):
    items = sorted(_list_arg(lst, "sort/2"), key=cmp_to_key(compare_terms))
    dedup = []
    for x in items:
        if not dedup or compare_terms(dedup[-1], x) != 0:
            dedup.append(x)
    return e.unify(out, make_list(dedup))


def _reverse(e, lst, out):
    return e.unify(out, make_list(reversed(_list_arg(lst, "reverse/2"))))


# type checks -------------------------------------------------------------------


def _var(e, t):
    return type(deref(t)) is Var


def _nonvar(e, t):
    return type(deref(t)) is not Var


def _atom(e, t):
    return type(deref(t)) is Atom


def _number(e, t):
    return type(deref(t)) in (int, float)


def _integer(e, t):
    return type(deref(t)) is int


# text conversion ---------------------------------------------------------------


def _codes_text(t, who: str) -> str:
    t = deref(t)
    if type(t) is Atom and t != NIL:
        # double-quoted text reads as an atom
        return t.name
    items = _list_arg(t, who)
    chars = []
    for x in items:
        x = deref(x)
        if type(x) is Var:
            raise _inst(f"{who}: unbound code")
        if type(x) is not int or x < 0:
            raise PrologTypeError(f"{who}: character code expected")
        chars.append(chr(x))
    return "".join(chars)


def _number_text(x) -> str:
    if type(x) is float:
        from protokit.prolog.writer import format_float

        return format_float(x)
    return str(x)


def _atom_codes(e, a, codes):
    a = deref(a)
    if type(a) is Atom:
        text = a.name
    elif type(a) in (int, float):
        text = _number_text(a)
    elif type(a) is Var:
        return e.unify(a, Atom(_codes_text(codes, "atom_codes/2")))
    else:
        raise PrologTypeError("atom_codes/2: atomic expected")
    return e.unify(codes, make_list([ord(c) for c in text]))


def _parse_number(text: str):
    from protokit.prolog.reader import PrologSyntaxError, tokenize

    try:
        toks = [t for t in tokenize(text.strip()) if t.kind != "eof"]
    except PrologSyntaxError:
        toks = []
    sign = 1
    if len(toks) == 2 and toks[0].kind == "name" and toks[0].value in ("-", "+"):
        sign = -1 if toks[0].value == "-" else 1
        toks = toks[1:]
    if len(toks) == 1 and toks[0].kind in ("int", "float"):
        return sign * toks[0].value
    from protokit.prolog.reader import PrologSyntaxError as _E

    raise _E(f"illegal number {text!r}", 1, 1)


def _number_codes(e, n, codes):
    n = deref(n)
    if type(n) is Var:
        return e.unify(n, _parse_number(_codes_text(codes, "number_codes/2")))
    if type(n) not in (int, float):
        raise PrologTypeError("number_codes/2: number expected")
    return e.unify(codes, make_list([ord(c) for c in _number_text(n)]))


# lists -------------------------------------------------------------------------


def _between(e, lo, hi, x):
    lo, hi, x = deref(lo), deref(hi), deref(x)
    if type(lo) is Var or type(hi) is Var:
        raise _inst("between/3")
    if type(lo) is not int:
        raise PrologTypeError("between/3: integer expected")
    if type(hi) is Atom and hi.name in ("inf", "infinite"):
        hi = math.inf
    elif type(hi) is not int:
        raise PrologTypeError("between/3: integer expected")
    if type(x) is int:
        if lo <= x <= hi:
            yield
        return
    if type(x) is not Var:
        raise PrologTypeError("between/3: integer expected")
    i = lo
    while i <= hi:
        mark = len(e.trail)
        e.unify(x, i)
        yield
        e.undo(mark)
        i += 1


def _length(e, lst, n):
    items, tail = list_items(lst)
    n = deref(n)
    if type(n) not in (Var, int):
        raise PrologTypeError("length/2: integer expected")
    if tail == NIL:
        if e.unify(n, len(items)):
            yield
        return
    if type(tail) is not Var:
        raise PrologTypeError("length/2: list expected")
    if type(n) is int:
        if n >= len(items):
            if e.unify(tail, make_list([Var() for _ in range(n - len(items))])):
                yield
        return
    k = len(items)
    while True:
        mark = len(e.trail)
        if e.unify(tail, make_list([Var() for _ in range(k - len(items))])) and e.unify(n, k):
            yield
        e.undo(mark)
        k += 1


def _nth(base):
    def nth(e, index, lst, elem):
        index = deref(index)
        if type(index) is int:
            items, tail = list_items(lst)
            i = index - base
            if i < 0:
                return
            if i < len(items):
                if e.unify(elem, items[i]):
                    yield
                return
            if type(tail) is Var:
                raise _inst("nth: partial list")
            return
        if type(index) is not Var:
            raise PrologTypeError("nth: integer expected")
        items, tail = list_items(lst)
        for i, item in enumerate(items):
            mark = len(e.trail)
            if e.unify(elem, item) and e.unify(index, i + base):
                yield
            e.undo(mark)

    return nth


# equality ----------------------------------------------------------------------


def _eq(e, a, b):
    return e.unify(a, b)


def _neq(e, a, b):
    mark = len(e.trail)
    ok = e.unify(a, b)
    e.undo(mark)
    return not ok


# JSON output -------------------------------------------------------------------

_STREAMS = {"current_output", "user_output"}


def json_text(t) -> str:
    """Serialize a json/1-style term to compact JSON text (pair order preserved)."""
    try:
        t = resolve(t)
    except CyclicTerm:
        raise NonGroundOutput("cyclic term in JSON output") from None
    return _json(t, set())


def _json(t, active: set) -> str:
    t = deref(t)
    tt = type(t)
    if tt is Var:
        raise NonGroundOutput("unbound variable in JSON output")
    if tt is int:
        return str(t)
    if tt is float:
        if not math.isfinite(t):
            raise JsonTermError("non-finite float in JSON output")
        return json.dumps(t)
    if tt is Atom:
        if t.name in ("true", "false", "null"):
            return t.name
        if t == NIL:
            return "[]"
        return json.dumps(t.name, ensure_ascii=False)
    if id(t) in active:
        raise NonGroundOutput("cyclic term in JSON output")
    active = active | {id(t)}
    if t.functor == "json" and len(t.args) == 1:
        pairs = proper_list(t.args[0])
        if pairs is None:
            raise NonGroundOutput("json/1 expects a proper list of pairs")
        parts = []
        for p in pairs:
            p = deref(p)
            if type(p) is Compound and p.functor in ("=", "-") and len(p.args) == 2:
                k, v = deref(p.args[0]), p.args[1]
            elif type(p) is Compound and len(p.args) == 1:
                k, v = Atom(p.functor), p.args[0]
            elif type(p) is Var:
                raise NonGroundOutput("unbound pair in JSON object")
            else:
                raise JsonTermError(f"not a JSON pair: {p!r}")
            if type(k) is Var:
                raise NonGroundOutput("unbound key in JSON object")
            if type(k) is Atom:
                key = k.name
            elif type(k) in (int, float):
                key = _number_text(k)
            else:
                raise JsonTermError(f"JSON key must be atomic: {k!r}")
            parts.append(json.dumps(key, ensure_ascii=False) + ":" + _json(v, active))
        return "{" + ",".join(parts) + "}"
    if t.functor == "@" and len(t.args) == 1:
        inner = deref(t.args[0])
        if type(inner) is Atom and inner.name in ("true", "false", "null"):
            return inner.name
        raise JsonTermError("@/1 expects true, false or null")
    if t.functor == "." and len(t.args) == 2:
        items, tail = list_items(t)
        if type(tail) is Var:
            raise NonGroundOutput("partial list in JSON output")
        if tail != NIL:
            raise JsonTermError("improper list in JSON output")
        return "[" + ",".join(_json(x, active) for x in items) + "]"
    raise JsonTermError(f"cannot convert {t.functor}/{len(t.args)} to JSON")


def _json_write(e, stream, term, options=NIL):
    s = deref(stream)
    if type(s) is Var:
        raise _inst("json_write: stream is unbound")
    if type(s) is not Atom or s.name not in _STREAMS:
        raise PrologTypeError(f"json_write: unsupported stream {s!r}")
    if proper_list(options) is None:
        raise PrologTypeError("json_write/3: options must be a list")
    e.output.append(json_text(term))
    return True


DETERMINISTIC = {
    ("=", 2): _eq,
    ("\\=", 2): _neq,
    ("==", 2): lambda e, a, b: _structurally_equal(a, b),
    ("\\==", 2): lambda e, a, b: not _structurally_equal(a, b),
    ("@<", 2): _order(lambda c: c < 0),
    ("@>", 2): _order(lambda c: c > 0),
    ("@=<", 2): _order(lambda c: c <= 0),
    ("@>=", 2): _order(lambda c: c >= 0),
    ("is", 2): _is,
    ("<", 2): _cmp(lambda a, b: a < b),
    ("=<", 2): _cmp(lambda a, b: a <= b),
    (">", 2): _cmp(lambda a, b: a > b),
    (">=", 2): _cmp(lambda a, b: a >= b),
    ("=:=", 2): _cmp(lambda a, b: a == b),
    ("=\\=", 2): _cmp(lambda a, b: a != b),
    ("var", 1): _var,
    ("nonvar", 1): _nonvar,
    ("atom", 1): _atom,
    ("number", 1): _number,
    ("integer", 1): _integer,
    ("atom_codes", 2): _atom_codes,
    ("number_codes", 2): _number_codes,
    ("msort", 2): _msort,
    ("sort", 2): _sort,
    ("reverse", 2): _reverse,
    ("json_write", 2): _json_write,
    ("json_write", 3): _json_write,
}

NONDETERMINISTIC = {
    ("between", 3): _between,
    ("length", 2): _length,
    ("nth0", 3): _nth(0),
    ("nth1", 3): _nth(1),
}
