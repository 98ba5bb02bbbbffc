import pytest
from hypothesis import given
from hypothesis import strategies as st

from protokit.prolog import (
    NIL,
    Atom,
    Compound,
    PrologSyntaxError,
    UnsupportedSyntax,
    Var,
    format_term,
    make_list,
    parse_program,
    parse_term,
)
from protokit.prolog.terms import variant


def test_family_counts(family_text):
    prog = parse_program(family_text)
    assert len(prog.facts) == 14
    assert len(prog.rules) == 4
    assert [c.head.functor for c in prog.rules] == ["father", "mother", "grandparent", "sibling"]


def test_single_fact():
    prog = parse_program("a.")
    assert len(prog.facts) == 1 and not prog.rules
    assert prog.facts[0].head == Atom("a")


def test_is_precedence():
    prog = parse_program("f(X) :- X is 1+2.")
    (rule,) = prog.rules
    (goal,) = rule.body
    assert goal.functor == "is"
    assert goal.args[1] == Compound("+", (1, 2))
    assert variant(goal.args[0], rule.head.args[0])


def test_format_examples():
    assert format_term(Compound("parent", (Atom("john"), Atom("bob")))) == "parent(john,bob)"
    assert format_term(Compound(".", (1, Compound(".", (2, NIL))))) == "[1,2]"
    assert format_term(make_list([Atom("a")], Var("T"))).startswith("[a|")


@pytest.mark.parametrize(
    "text,expected",
    [
        ("1+2*3", "+(1,*(2,3))"),
        ("1-2-3", "-(-(1,2),3)"),
        ("a:-b,c;d", ":-(a,;(','(b,c),d))"),
        ("a->b;c", ";(->(a,b),c)"),
        ("\\+a,b", "','(\\+(a),b)"),
        ("X = -1", "=(X,-1)"),
        ("- (1)", "-(1)"),
        ("7 mod 2", "mod(7,2)"),
        ("f(a;b,c)", "f(;(a,b),c)"),
    ],
)
def test_operator_table(text, expected):
    t, _ = parse_term(text)
    assert _canonical(t) == expected


def _canonical(t):
    # plain functional notation, independent of the writer's operator handling
    if isinstance(t, Compound):
        name = "','" if t.functor == "," else t.functor
        return f"{name}({','.join(_canonical(a) for a in t.args)})"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Atom):
        return t.name
    return repr(t)


def test_comments_and_strings():
    prog = parse_program('% line\n/* block\n comment */ greet("hello world").\n')
    (fact,) = prog.facts
    assert fact.head.args[0] == Atom("hello world")


def test_clause_order_preserved():
    text = "p(3).\nq :- p(_).\np(1).\np(2).\n"
    prog = parse_program(text)
    heads = [format_term(c.head) for c in prog.clauses]
    assert heads == ["p(3)", "q", "p(1)", "p(2)"]
    assert [c.line for c in prog.clauses] == [1, 2, 3, 4]


def test_directives():
    prog = parse_program(":- use_module(library(http/json)).\n:- initialization(main).\na.\n")
    assert len(prog.clauses) == 1
    assert [d.functor for d in prog.directives] == ["initialization"]


@pytest.mark.parametrize("text", ["s --> [a].", ":- op(700, xfx, ===).", "p({a}).", "p(X) :- X = _{a: 1}."])
def test_unsupported_syntax(text):
    with pytest.raises((UnsupportedSyntax, PrologSyntaxError)):
        parse_program(text)


@pytest.mark.parametrize("text", ["s --> [a].", ":- op(700, xfx, ===).", "p({a})."])
def test_unsupported_is_specific(text):
    with pytest.raises(UnsupportedSyntax):
        parse_program(text)


def test_syntax_error_position():
    with pytest.raises(PrologSyntaxError) as info:
        parse_program("a.\nb(.\n")
    assert info.value.line == 2


def test_anonymous_vars_are_fresh():
    t, _ = parse_term("f(_, _)")
    assert t.args[0] is not t.args[1]
    t, _ = parse_term("f(X, X)")
    assert t.args[0] is t.args[1]


# round trip ---------------------------------------------------------------

NAMES = ["a", "foo", "b_1", "[]", "A b", "it's", "-", "+", "mod", "is", ";", ",", "\\+", "!", "x y"]
FUNCTORS = ["f", "g", "-", "+", "*", "/", "//", "mod", "=", "is", ",", ";", "->", ":-", "\\+", "<", "@<", "Quoted F"]


@st.composite
def terms(draw, depth=3):
    pool = st.one_of(
        st.integers(-50, 50),
        st.floats(allow_nan=False, allow_infinity=False, width=32),
        st.sampled_from(NAMES).map(Atom),
        st.sampled_from(["X", "Y", "Zed"]).map(Var),
    )
    if depth == 0:
        return draw(pool)
    kind = draw(st.integers(0, 3))
    if kind == 0:
        return draw(pool)
    if kind == 1:
        items = draw(st.lists(terms(depth - 1), max_size=3))
        tail = draw(st.one_of(st.just(NIL), st.sampled_from(["T"]).map(Var)))
        return make_list(items, tail)
    functor = draw(st.sampled_from(FUNCTORS))
    arity = draw(st.integers(1, 3))
    return Compound(functor, tuple(draw(terms(depth - 1)) for _ in range(arity)))


def _share_vars(t, table):
    # parse gives one Var per name; mirror that so variant() is the right check
    if isinstance(t, Var):
        return table.setdefault(t.name, t)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(_share_vars(a, table) for a in t.args))
    return t


@given(terms())
def test_round_trip(t):
    t = _share_vars(t, {})
    text = format_term(t)
    back, _ = parse_term(text)
    assert variant(back, t), text
    assert format_term(back) == text
