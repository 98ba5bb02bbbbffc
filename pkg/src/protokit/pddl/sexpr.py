"""Tokenizer and reader for the s-expression syntax shared by PDDL files and plans."""

from __future__ import annotations

from dataclasses import dataclass, field


class PddlError(Exception):
    """Base class for every PDDL-side error."""


class PddlSyntaxError(PddlError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, col {col})")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


@dataclass
class SList:
    """A parenthesized list, remembering where it opened."""

    items: list = field(default_factory=list)
    line: int = 0
    col: int = 0

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c.isspace():
            i += 1
            col += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            tokens.append(Token(c, line, col))
            i += 1
            col += 1
        else:
            start, start_col = i, col
            while i < n and not text[i].isspace() and text[i] not in "();":
                i += 1
                col += 1
            tokens.append(Token(text[start:i], line, start_col))
    return tokens


def read_all(text: str) -> list:
    """Read every top-level form.  Atoms come back as Token, lists as SList."""
    tokens = tokenize(text)
    forms = []
    stack: list[SList] = []
    for tok in tokens:
        if tok.text == "(":
            stack.append(SList([], tok.line, tok.col))
        elif tok.text == ")":
            if not stack:
                raise PddlSyntaxError("unbalanced ')'", tok.line, tok.col)
            done = stack.pop()
            (stack[-1].items if stack else forms).append(done)
        else:
            (stack[-1].items if stack else forms).append(tok)
    if stack:
        open_ = stack[-1]
        raise PddlSyntaxError("unclosed '('", open_.line, open_.col)
    return forms


def read_one(text: str) -> SList:
    forms = read_all(text)
    if not forms:
        raise PddlSyntaxError("empty input", 1, 1)
    if len(forms) > 1:
        extra = forms[1]
        raise PddlSyntaxError("trailing content after definition", extra.line, extra.col)
    if not isinstance(forms[0], SList):
        raise PddlSyntaxError("expected '('", forms[0].line, forms[0].col)
    return forms[0]
