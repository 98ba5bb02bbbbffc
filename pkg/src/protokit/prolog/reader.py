"""Tokenizer and operator-precedence reader for the supported Prolog subset."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from protokit.prolog.terms import NIL, Atom, Compound, PrologError, Var, make_list

log = logging.getLogger(__name__)

SYMBOL_CHARS = set("+-*/\\^<>=~:.?@#&$")
SOLO = set("!;")
PUNCT = set("()[]{},|")

INFIX = {
    ":-": (1200, "xfx"),
    "-->": (1200, "xfx"),
    ";": (1100, "xfy"),
    "->": (1050, "xfy"),
    ",": (1000, "xfy"),
    "=": (700, "xfx"),
    "\\=": (700, "xfx"),
    "==": (700, "xfx"),
    "\\==": (700, "xfx"),
    "is": (700, "xfx"),
    "<": (700, "xfx"),
    "=<": (700, "xfx"),
    ">": (700, "xfx"),
    ">=": (700, "xfx"),
    "=:=": (700, "xfx"),
    "=\\=": (700, "xfx"),
    "@<": (700, "xfx"),
    "@>": (700, "xfx"),
    "@=<": (700, "xfx"),
    "@>=": (700, "xfx"),
    "+": (500, "yfx"),
    "-": (500, "yfx"),
    "*": (400, "yfx"),
    "/": (400, "yfx"),
    "//": (400, "yfx"),
    "mod": (400, "yfx"),
}

PREFIX = {
    ":-": (1200, "fx"),
    "?-": (1200, "fx"),
    "\\+": (900, "fy"),
    "-": (200, "fy"),
}

IGNORED_DIRECTIVES = {"use_module", "ensure_loaded"}


class PrologSyntaxError(PrologError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, col {col})")
        self.line = line
        self.col = col


class UnsupportedSyntax(PrologError):
    pass


@dataclass(frozen=True)
class Tok:
    kind: str  # name | var | int | float | str | punct | end | eof
    value: object
    line: int
    col: int
    layout_before: bool = False
    functional: bool = False  # name immediately followed by '('


def _escape(text: str, i: int, quote: str, line: int, col: int) -> tuple[str, int]:
    """Decode the escape starting at text[i] == '\\'; returns (char, next index)."""
    c = text[i + 1] if i + 1 < len(text) else ""
    simple = {"n": "\n", "t": "\t", "r": "\r", "a": "\a", "b": "\b", "f": "\f", "v": "\v",
              "0": "\0", "\\": "\\", "'": "'", '"': '"', "`": "`", "e": "\x1b", "s": " "}
    if c == "\n":
        return "", i + 2
    if c == "x":
        j = i + 2
        while j < len(text) and text[j] in "0123456789abcdefABCDEF":
            j += 1
        if j < len(text) and text[j] == "\\":
            j += 1
        return chr(int(text[i + 2 : j].rstrip("\\"), 16)), j
    if c in simple and not (c == "0" and i + 2 < len(text) and text[i + 2].isdigit()):
        return simple[c], i + 2
    if c.isdigit():
        j = i + 1
        while j < len(text) and text[j] in "01234567":
            j += 1
        if j < len(text) and text[j] == "\\":
            j += 1
        return chr(int(text[i + 1 : j].rstrip("\\"), 8)), j
    raise PrologSyntaxError(f"unknown escape \\{c}", line, col)


def tokenize(text: str) -> list[Tok]:
    toks: list[Tok] = []
    i, n = 0, len(text)
    line, line_start = 1, 0
    layout = True

    def pos(k):
        return line, k - line_start + 1

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            line_start = i + 1
            i += 1
            layout = True
            continue
        if c.isspace():
            i += 1
            layout = True
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            layout = True
            continue
        if c == "/" and i + 1 < n and text[i + 1] == "*":
            j = text.find("*/", i + 2)
            if j < 0:
                raise PrologSyntaxError("unterminated block comment", *pos(i))
            line += text.count("\n", i, j)
            nl = text.rfind("\n", i, j)
            if nl >= 0:
                line_start = nl + 1
            i = j + 2
            layout = True
            continue
        ln, col = pos(i)
        start = i
        if c.isdigit():
            if c == "0" and i + 1 < n and text[i + 1] == "'":
                # 0'c character code
                j = i + 2
                if j < n and text[j] == "\\":
                    ch, j = _escape(text, j, "'", ln, col)
                elif j + 1 < n and text[j] == "'" and text[j + 1] == "'":
                    ch, j = "'", j + 2
                elif j < n:
                    ch, j = text[j], j + 1
                else:
                    raise PrologSyntaxError("incomplete character code", ln, col)
                toks.append(Tok("int", ord(ch), ln, col, layout))
                i = j
                layout = False
                continue
            if c == "0" and i + 1 < n and text[i + 1] in "xob":
                base = {"x": 16, "o": 8, "b": 2}[text[i + 1]]
                digits = {16: "0123456789abcdefABCDEF", 8: "01234567", 2: "01"}[base]
                j = i + 2
                while j < n and text[j] in digits:
                    j += 1
                if j > i + 2:
                    toks.append(Tok("int", int(text[i + 2 : j], base), ln, col, layout))
                    i = j
                    layout = False
                    continue
            j = i
            while j < n and (text[j].isdigit() or (text[j] == "_" and j + 1 < n and text[j + 1].isdigit())):
                j += 1
            is_float = False
            if j + 1 < n and text[j] == "." and text[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            raw = text[i:j].replace("_", "")
            toks.append(Tok("float" if is_float else "int", float(raw) if is_float else int(raw), ln, col, layout))
            i = j
        elif c == "_" or c.isupper():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Tok("var", text[i:j], ln, col, layout))
            i = j
        elif c.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Tok("name", text[i:j], ln, col, layout, j < n and text[j] == "("))
            i = j
        elif c in "'\"`":
            if c == "`":
                raise UnsupportedSyntax(f"back-quoted text at line {ln}")
            j = i + 1
            buf = []
            while True:
                if j >= n:
                    raise PrologSyntaxError("unterminated quoted text", ln, col)
                ch = text[j]
                if ch == c:
                    if j + 1 < n and text[j + 1] == c:
                        buf.append(c)
                        j += 2
                        continue
                    j += 1
                    break
                if ch == "\\":
                    s, j = _escape(text, j, c, ln, col)
                    buf.append(s)
                    continue
                if ch == "\n":
                    line += 1
                    line_start = j + 1
                buf.append(ch)
                j += 1
            value = "".join(buf)
            if c == "'":
                toks.append(Tok("name", value, ln, col, layout, j < n and text[j] == "("))
            else:
                toks.append(Tok("str", value, ln, col, layout))
            i = j
        elif c in SOLO:
            toks.append(Tok("name", c, ln, col, layout, i + 1 < n and text[i + 1] == "("))
            i += 1
        elif c in PUNCT:
            toks.append(Tok("punct", c, ln, col, layout))
            i += 1
        elif c in SYMBOL_CHARS:
            j = i
            while j < n and text[j] in SYMBOL_CHARS:
                j += 1
            sym = text[i:j]
            if sym == "." and (j >= n or text[j].isspace() or text[j] == "%"):
                toks.append(Tok("end", ".", ln, col, layout))
            else:
                toks.append(Tok("name", sym, ln, col, layout, j < n and text[j] == "("))
            i = j
        else:
            raise PrologSyntaxError(f"unexpected character {c!r}", ln, col)
        layout = False
    toks.append(Tok("eof", None, line, i - line_start + 1, True))
    return toks


_TERM_START_PUNCT = {"(", "[", "{"}


class _Parser:
    def __init__(self, toks: list[Tok]):
        self.toks = toks
        self.i = 0
        self.varmap: dict[str, Var] = {}
        self.varorder: list[str] = []
        self.in_arg = False

    def peek(self, k: int = 0) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, msg: str, tok: Tok | None = None):
        tok = tok or self.peek()
        raise PrologSyntaxError(msg, tok.line, tok.col)

    def expect(self, kind: str, value=None) -> Tok:
        t = self.next()
        if t.kind != kind or (value is not None and t.value != value):
            want = value if value is not None else kind
            self.error(f"expected {want!r}, found {t.value!r}", t)
        return t

    def var(self, name: str) -> Var:
        if name == "_":
            return Var("_")
        v = self.varmap.get(name)
        if v is None:
            v = self.varmap[name] = Var(name)
            self.varorder.append(name)
        return v

    def starts_term(self, t: Tok) -> bool:
        if t.kind in ("int", "float", "var", "str"):
            return True
        if t.kind == "punct":
            return t.value in _TERM_START_PUNCT
        if t.kind == "name":
            if t.value == ",":
                return True  # quoted ',' is an ordinary atom
            # a bare infix operator after a prefix operator is read as an atom operand only
            # when it cannot itself start a term
            return not (t.value in INFIX and t.value not in PREFIX and not t.functional)
        return False

    def parse(self, max_prec: int):
        left, left_prec = self.primary(max_prec)
        return self.infix(left, left_prec, max_prec)[0]

    def arg(self):
        # like SWI, an argument may hold an operator above 999 as long as it is not ','
        saved, self.in_arg = self.in_arg, True
        try:
            return self.parse(1200)
        finally:
            self.in_arg = saved

    def arglist(self, closer: str) -> list:
        args = [self.arg()]
        while self.peek().kind == "punct" and self.peek().value == ",":
            self.next()
            args.append(self.arg())
        self.expect("punct", closer)
        return args

    def primary(self, max_prec: int):
        t = self.next()
        if t.kind in ("int", "float"):
            return t.value, 0
        if t.kind == "var":
            return self.var(t.value), 0
        if t.kind == "str":
            return Atom(t.value), 0
        if t.kind == "punct":
            if t.value == "(":
                saved, self.in_arg = self.in_arg, False
                inner = self.parse(1200)
                self.in_arg = saved
                self.expect("punct", ")")
                return inner, 0
            if t.value == "[":
                if self.peek().kind == "punct" and self.peek().value == "]":
                    self.next()
                    return NIL, 0
                items = [self.arg()]
                while self.peek().kind == "punct" and self.peek().value == ",":
                    self.next()
                    items.append(self.arg())
                tail = NIL
                if self.peek().kind == "punct" and self.peek().value == "|":
                    self.next()
                    tail = self.arg()
                self.expect("punct", "]")
                return make_list(items, tail), 0
            if t.value == "{":
                raise UnsupportedSyntax(f"curly-brace terms (line {t.line})")
            self.error(f"unexpected {t.value!r}", t)
        if t.kind == "name":
            name = t.value
            if t.functional:
                self.expect("punct", "(")
                return Compound(name, tuple(self.arglist(")"))), 0
            nxt = self.peek()
            if name == "-" and nxt.kind in ("int", "float") and not nxt.layout_before:
                self.next()
                return -nxt.value, 0
            if name in PREFIX and self.starts_term(nxt):
                prec, typ = PREFIX[name]
                if prec > max_prec:
                    prec = 999 if max_prec >= 999 else max_prec
                arg_max = prec if typ == "fy" else prec - 1
                arg = self.parse(arg_max)
                return Compound(name, (arg,)), prec
            return Atom(name), 0
        if t.kind == "end":
            self.error("unexpected end of clause", t)
        self.error("unexpected end of input", t)

    def infix(self, left, left_prec: int, max_prec: int):
        while True:
            t = self.peek()
            if t.kind == "name":
                name = t.value
                if name == ",":
                    break
            elif t.kind == "punct" and t.value in (",", "|"):
                name = t.value
            else:
                break
            if name == "|" or (name == "," and self.in_arg):
                # bar as infix is only meaningful inside lists, handled there
                break
            op = INFIX.get(name)
            if op is None:
                break
            prec, typ = op
            if prec > max_prec:
                break
            left_max = prec if typ == "yfx" else prec - 1
            if left_prec > left_max:
                break
            self.next()
            right_max = prec if typ == "xfy" else prec - 1
            right = self.parse(right_max)
            left, left_prec = Compound(name, (left, right)), prec
        return left, left_prec


@dataclass
class Clause:
    head: object
    body: tuple = ()
    line: int = 0

    @property
    def is_fact(self) -> bool:
        return not self.body


@dataclass
class Program:
    clauses: list[Clause] = field(default_factory=list)
    directives: list = field(default_factory=list)

    @property
    def facts(self) -> list[Clause]:
        return [c for c in self.clauses if c.is_fact]

    @property
    def rules(self) -> list[Clause]:
        return [c for c in self.clauses if not c.is_fact]


def conjuncts(body) -> list:
    from protokit.prolog.terms import deref

    out = []
    stack = [body]
    while stack:
        g = deref(stack.pop())
        if type(g) is Compound and g.functor == "," and len(g.args) == 2:
            stack.append(g.args[1])
            stack.append(g.args[0])
        else:
            out.append(g)
    return out


def read_terms(text: str):
    """Yield (term, varnames, line) for every clause-terminated term in ``text``."""
    toks = tokenize(text)
    p = _Parser(toks)
    while p.peek().kind != "eof":
        p.varmap, p.varorder = {}, []
        first = p.peek()
        term = p.parse(1200)
        p.expect("end")
        yield term, dict(p.varmap), first.line


def parse_term(text: str):
    """Parse a single term (a trailing '.' is optional).  Returns (term, {name: Var})."""
    src = text.rstrip()
    if not src.endswith(".") or src.endswith(".."):
        src += " ."
    items = list(read_terms(src + "\n"))
    if len(items) != 1:
        raise PrologSyntaxError(f"expected one term, found {len(items)}", 1, 1)
    term, names, _ = items[0]
    return term, names


def parse_program(text: str) -> Program:
    prog = Program()
    for term, _, line in read_terms(text):
        if type(term) is Compound and term.functor == "-->" and len(term.args) == 2:
            raise UnsupportedSyntax(f"DCG rules are not supported (line {line})")
        if type(term) is Compound and term.functor in (":-", "?-") and len(term.args) == 1:
            goal = term.args[0]
            if type(goal) is Compound and goal.functor == "op" and len(goal.args) == 3:
                raise UnsupportedSyntax(f"op/3 is not supported (line {line})")
            if type(goal) is Compound and goal.functor in IGNORED_DIRECTIVES:
                log.warning("ignoring directive %s/%d at line %d", goal.functor, len(goal.args), line)
                continue
            prog.directives.append(goal)
            continue
        if type(term) is Compound and term.functor == ":-" and len(term.args) == 2:
            head, body = term.args
            goals = tuple(conjuncts(body))
        else:
            head, goals = term, ()
        if not isinstance(head, (Atom, Compound)):
            raise PrologSyntaxError(f"clause head must be callable, got {head!r}", line, 1)
        prog.clauses.append(Clause(head, goals, line))
    return prog
