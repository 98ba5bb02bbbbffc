import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import datalog_text, herbrand_model, random_datalog

from protokit.prolog import (
    Atom,
    Compound,
    DepthLimitExceeded,
    EntryFailed,
    EntryMissing,
    EvaluationError,
    InstantiationError,
    MissingOutput,
    MultipleOutputs,
    NonGroundOutput,
    SolveLimits,
    StepLimitExceeded,
    UnknownPredicate,
    UnsupportedBuiltin,
    Var,
    format_term,
    parse_term,
    run_solve_json,
    solve,
    substitute,
    unify,
)
from protokit.prolog.runner import run_solve_json_text


def answers(program, goal, limits=SolveLimits()):
    return [{k: format_term(v) for k, v in sol.items()} for sol in solve(program, goal, limits)]


def first(program, goal):
    return next(iter(answers(program, goal)), None)


# unification --------------------------------------------------------------


def test_unify_identity():
    t, _ = parse_term("f(a, g(1, [b]))")
    assert unify(t, t, {}) == {}


def test_unify_family_pair():
    a, va = parse_term("parent(X, bob)")
    b, vb = parse_term("parent(john, Y)")
    s = unify(a, b, {})
    assert s == {va["X"]: Atom("john"), vb["Y"]: Atom("bob")}


def test_occurs_check():
    t, v = parse_term("X = f(X)")
    x, fx = t.args
    assert unify(x, fx, {}, occurs_check=True) is None
    assert unify(x, fx, {}) is not None
    assert answers("p.", "\\+ \\+ X = f(X)") == [{"X": "X"}]


def test_unify_does_not_bind_cells():
    a, v = parse_term("f(X, b)")
    b, _ = parse_term("f(a, Y)")
    unify(a, b, {})
    assert v["X"].ref is None


VARS = [Var("X"), Var("Y"), Var("Z")]
GROUND = [Atom("a"), Atom("b"), Compound("g", (Atom("a"),)), Compound("g", (Atom("b"),))]


@st.composite
def small_terms(draw, depth=2):
    if depth == 0 or draw(st.booleans()):
        return draw(st.sampled_from(VARS + GROUND[:2]))
    if draw(st.booleans()):
        return Compound("g", (draw(small_terms(depth - 1)),))
    return Compound("f", (draw(small_terms(depth - 1)), draw(small_terms(depth - 1))))


def _ground_unifiers(a, b):
    # brute force over a finite candidate set of ground substitutions
    cands = GROUND + [Compound("g", (g,)) for g in GROUND] + [Compound("f", (x, y)) for x in GROUND[:2] for y in GROUND[:2]]
    for combo in itertools.product(cands, repeat=len(VARS)):
        tau = dict(zip(VARS, combo))
        if substitute(a, tau) == substitute(b, tau):
            yield tau


@given(small_terms(), small_terms())
def test_unify_is_mgu(a, b):
    sigma = unify(a, b, {}, occurs_check=True)
    back = unify(b, a, {}, occurs_check=True)
    assert (sigma is None) == (back is None)
    taus = list(itertools.islice(_ground_unifiers(a, b), 50))
    if sigma is None:
        assert not taus
        return
    assert substitute(a, sigma) == substitute(b, sigma)
    for tau in taus:
        for v in VARS:
            assert substitute(substitute(v, sigma), tau) == substitute(v, tau)


# resolution ---------------------------------------------------------------


def test_family_queries(family_text):
    assert answers(family_text, "parent(bob, Child)") == [{"Child": "ann"}, {"Child": "james"}]
    assert answers(family_text, "grandparent(GP, carol)") == [{"GP": "john"}, {"GP": "mary"}]
    assert answers(family_text, "sibling(lisa, bob)") == [{}, {}]
    assert first(family_text, "sibling(lisa, bob)") == {}
    assert answers(family_text, "father(F, ann)") == [{"F": "bob"}]
    assert answers(family_text, "mother(lisa, carol)") == [{}]
    assert answers(family_text, "sibling(carol, _)") == []


def test_family_sibling_raw_sld_order(family_text):
    pairs = [(s["X"], s["Y"]) for s in answers(family_text, "sibling(X, Y)")]
    assert pairs == [
        ("bob", "lisa"),
        ("lisa", "bob"),
        ("bob", "lisa"),
        ("lisa", "bob"),
        ("ann", "james"),
        ("james", "ann"),
    ]


def test_between_mod():
    assert answers("p.", "between(1, 3, X), X mod 2 =:= 1") == [{"X": "1"}, {"X": "3"}]


CUT_PROGRAM = """
max_cut(X, Y, X) :- X >= Y, !.
max_cut(_, Y, Y).
max_plain(X, Y, X) :- X >= Y.
max_plain(X, Y, Y) :- X < Y.
first_member(X, L) :- member(X, L), !.
t(1). t(2). t(3).
u(X) :- t(X), X > 1, !.
u(9).
"""


def test_cut_prunes_clause_and_left_goals():
    assert answers(CUT_PROGRAM, "max_cut(3, 2, M)") == [{"M": "3"}]
    assert answers(CUT_PROGRAM, "first_member(X, [a, b, c])") == [{"X": "a"}]
    assert answers(CUT_PROGRAM, "u(X)") == [{"X": "2"}]
    # cut inside the body of a called predicate does not cut the caller
    assert answers(CUT_PROGRAM, "t(A), u(B)") == [{"A": str(i), "B": "2"} for i in (1, 2, 3)]


@pytest.mark.parametrize(
    "with_cut,without",
    [
        ("max_cut(5, 2, M)", "max_plain(5, 2, M)"),
        ("max_cut(2, 5, M)", "max_plain(2, 5, M)"),
        ("max_cut(4, 4, M)", "max_plain(4, 4, M)"),
        ("first_member(X, [c, a, b])", "member(X, [c, a, b])"),
        ("u(X)", "t(X), X > 1"),
    ],
)
def test_cut_soundness(with_cut, without):
    assert first(CUT_PROGRAM, with_cut) == first(CUT_PROGRAM, without)


def test_cut_in_if_then_else_and_negation():
    prog = "q(1). q(2). r(X) :- ( q(X) -> true ; X = none ). s(X) :- \\+ q(X)."
    assert answers(prog, "r(X)") == [{"X": "1"}]
    assert answers(prog, "r(3)") == []
    assert answers(prog, "s(3)") == [{}]
    assert answers(prog, "s(1)") == []
    assert answers(prog, "(q(X), X > 1 ; X = z)") == [{"X": "2"}, {"X": "z"}]
    assert answers(prog, "call((q(X), !))") == [{"X": "1"}]


@pytest.mark.parametrize(
    "goal,expected",
    [
        ("X is 7 / 2", "3.5"),
        ("X is 6 / 2", "3"),
        ("X is -7 // 2", "-3"),
        ("X is -7 mod 2", "1"),
        ("X is max(2, 3.0) + min(1, 2) + abs(-4)", "8.0"),
        ("X is - (2 * 3)", "-6"),
        ("findall(X-Y, member(X-Y, [1-a, 2-b]), L), length(L, X)", "2"),
        ("length(X, 2), X = [a|_]", "[a,_G0]"),
        ("nth0(1, [a, b, c], X)", "b"),
        ("nth1(1, [a, b, c], X)", "a"),
        ("reverse([1, 2, 3], X)", "[3,2,1]"),
        ("msort([b, a, c, a], X)", "[a,a,b,c]"),
        ("sort([b, a, c, a], X)", "[a,b,c]"),
        ("sort([2, 1.0, a, f(x), \"b\"], X)", "[1.0,2,a,b,f(x)]"),
        ("append(X, [c], [a, b, c])", "[a,b]"),
        ("atom_codes(X, [104, 105])", "hi"),
        ("atom_codes(hi, X)", "[104,105]"),
        ("number_codes(X, [52, 50])", "42"),
        ("number_codes(3.5, X)", "[51,46,53]"),
    ],
)
def test_builtins(goal, expected):
    sols = answers("p.", goal)
    if expected is None:
        assert sols == []
        return
    assert sols[0]["X"] == expected


@pytest.mark.parametrize(
    "goal,ok",
    [
        ("var(_)", True),
        ("nonvar(a)", True),
        ("atom(a)", True),
        ("atom(1)", False),
        ("number(1.5)", True),
        ("integer(1.0)", False),
        ("a == a", True),
        ("X == Y", False),
        ("f(X) \\== f(Y)", True),
        ("a \\= b", True),
        ("f(X) \\= f(a)", False),
        ("1 =:= 1.0", True),
        ("1 =\\= 2", True),
        ("2 =< 2", True),
        ("3 < 2", False),
        ("fail", False),
        ("true", True),
        ("a @< b", True),
    ],
)
def test_type_and_comparison_builtins(goal, ok):
    assert bool(answers("p.", goal)) is ok


@pytest.mark.parametrize(
    "goal,error",
    [
        ("X is Y + 1", EvaluationError),
        ("X is foo + 1", EvaluationError),
        ("X is 1 / 0", EvaluationError),
        ("nope(1)", UnknownPredicate),
        ("assertz(p(1))", UnsupportedBuiltin),
        ("format(\"~w\", [a])", UnsupportedBuiltin),
        ("call(_)", InstantiationError),
    ],
)
def test_errors(goal, error):
    with pytest.raises(error):
        answers("p.", goal)


def test_unknown_predicate_name():
    with pytest.raises(UnknownPredicate) as info:
        answers("p :- q(1, 2).", "p")
    assert "q/2" in str(info.value)


def test_limits():
    loop = "loop :- loop."
    with pytest.raises(StepLimitExceeded):
        answers(loop, "loop", SolveLimits(max_steps=1000, max_depth=10**9))
    deep = "down(0). down(N) :- N > 0, M is N - 1, down(M), true."
    with pytest.raises(DepthLimitExceeded):
        answers(deep, "down(500)", SolveLimits(max_depth=100))
    assert answers(deep, "down(500)") == [{}]
    assert len(answers("p.", "between(1, inf, X)", SolveLimits(max_solutions=5))) == 5


def test_long_list_is_iterative():
    prog = "count([], 0). count([_|T], N) :- count(T, M), N is M + 1.\n"
    sols = answers(prog + "mk(0, []). mk(N, [N|T]) :- N > 0, M is N - 1, mk(M, T).", "mk(3000, L), count(L, N)")
    assert sols[0]["N"] == "3000"


def test_program_clauses_shadow_library():
    prog = "member(x, _)."
    assert answers(prog, "member(X, [a])") == [{"X": "x"}]


# solve_json ---------------------------------------------------------------


def test_solve_json_no_solution():
    prog = "solve_json :- json_write(current_output, json([result='No valid solution found']))."
    assert run_solve_json(prog) == {"result": "No valid solution found"}


def test_solve_json_width_option():
    prog = "solve_json :- json_write(current_output, json([n=3]), [width(0)])."
    assert run_solve_json(prog) == {"n": 3}


def test_solve_json_family(data_dir):
    prog = (data_dir / "family_solve_json.pl").read_text()
    assert run_solve_json(prog) == {"grandparents": ["john", "mary"]}
    assert run_solve_json_text(prog) == run_solve_json_text(prog)


def test_solve_json_encoding():
    prog = (
        "solve_json :- json_write(current_output, "
        "json([a=[1, 2.5, x], b=true, c=null, d=json([e=f]), g=[], h=\"hi there\", i= @(false), j-1, k(2)]))."
    )
    assert run_solve_json(prog) == {
        "a": [1, 2.5, "x"],
        "b": True,
        "c": None,
        "d": {"e": "f"},
        "g": [],
        "h": "hi there",
        "i": False,
        "j": 1,
        "k": 2,
    }


def test_solve_json_directives_run_first():
    prog = ":- use_module(library(http/json)).\n:- true.\nsolve_json :- X = 1, json_write(current_output, json([x=X]))."
    assert run_solve_json(prog) == {"x": 1}


@pytest.mark.parametrize(
    "prog,error",
    [
        ("p.", EntryMissing),
        ("solve_json :- fail.", EntryFailed),
        ("solve_json :- json_write(current_output, json([x=_])).", NonGroundOutput),
        ("solve_json :- X = f(X), json_write(current_output, json([x=X])).", NonGroundOutput),
        ("solve_json.", MissingOutput),
        ("solve_json :- json_write(current_output, json([a=1])), json_write(current_output, json([a=2])).", MultipleOutputs),
    ],
)
def test_solve_json_errors(prog, error):
    with pytest.raises(error):
        run_solve_json(prog)


def test_solve_json_deterministic_bytes():
    prog = "item(3). item(1). item(2).\nsolve_json :- findall(X, item(X), L), msort(L, S), json_write(current_output, json([sorted=S, f=0.1]))."
    outs = {run_solve_json_text(prog) for _ in range(3)}
    assert len(outs) == 1


# oracle -------------------------------------------------------------------


def check_against_herbrand(seed):
    rng = random.Random(seed)
    facts, rules, arity = random_datalog(rng)
    text = datalog_text(facts, rules)
    model = herbrand_model(facts, rules)
    limits = SolveLimits(max_solutions=10**9)
    for pred, k in sorted(arity.items()):
        names = [f"V{i}" for i in range(k)]
        goal = f"{pred}({', '.join(names)})"
        got = set()
        for sol in solve(text, goal, limits):
            got.add(tuple(sol[n].name for n in names))
        expected = {args for p, args in model if p == pred}
        if got != expected:
            return text, pred, got, expected
    return None


@given(st.integers(0, 2**32))
def test_engine_matches_bottom_up(seed):
    assert check_against_herbrand(seed) is None
