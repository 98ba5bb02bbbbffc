from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from protokit.pddl import Atom, Literal, parse_domain, parse_problem
from protokit.pddl.generators import GenSpec, domain_for, generate_instance
from protokit.pddl.model import Problem
from protokit.pddl.planner import LimitExceeded, SearchLimits, Solved, Unsolvable, solve_optimal
from protokit.pddl.validate import validate_plan

from oracles import bfs_min_cost, brute_force_min_cost


def _two_blocks(goal):
    init = frozenset({Atom("ontable", ("a",)), Atom("ontable", ("b",)), Atom("clear", ("a",)), Atom("clear", ("b",)), Atom("handempty")})
    return domain_for("blocksworld"), Problem("two", "blocksworld", (("a", "object"), ("b", "object")), init, goal)


def test_goal_in_init_is_zero_cost():
    d, p = _two_blocks((Literal(Atom("ontable", ("a",))),))
    res = solve_optimal(d, p)
    assert isinstance(res, Solved) and res.cost == 0 and len(res.plan) == 0


def test_two_blocks_stack():
    d, p = _two_blocks((Literal(Atom("on", ("a", "b"))),))
    res = solve_optimal(d, p)
    assert res.cost == 2
    assert [str(s) for s in res.plan] == ["(pick-up a)", "(stack a b)"]
    assert brute_force_min_cost(d, p, 3) == 2


def test_unreachable_goal_is_unsolvable():
    d = parse_domain("""(define (domain u) (:predicates (p) (q))
      (:action a :parameters () :precondition (p) :effect (not (p))))""")
    p = parse_problem("(define (problem u1) (:domain u) (:init (p)) (:goal (q)))", d)
    assert isinstance(solve_optimal(d, p), Unsolvable)


def test_node_limit():
    d, p = generate_instance(GenSpec("blocksworld", seed=3, blocks=5, walk=20))
    res = solve_optimal(d, p, SearchLimits(max_nodes=3))
    assert isinstance(res, LimitExceeded)


def test_depth_limit():
    d, p = generate_instance(GenSpec("npuzzle", seed=1, walk=6))
    best = solve_optimal(d, p).cost
    if best > 1:
        res = solve_optimal(d, p, SearchLimits(max_depth=best - 1))
        assert isinstance(res, LimitExceeded) and res.reason == "depth"


def test_limits_must_be_positive():
    with pytest.raises(ValueError):
        SearchLimits(max_nodes=0)


def test_plan_is_deterministic():
    d, p = generate_instance(GenSpec("logistics", seed=8))
    assert solve_optimal(d, p).plan.to_text() == solve_optimal(d, p).plan.to_text()


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_optimal_vs_naive_bfs_blocksworld(seed):
    d, p = generate_instance(GenSpec("blocksworld", seed=seed, blocks=3))
    res = solve_optimal(d, p)
    assert res.cost == bfs_min_cost(d, p, 12)
    assert validate_plan(d, p, res.plan).valid


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_optimal_vs_naive_bfs_npuzzle(seed):
    d, p = generate_instance(GenSpec("npuzzle", seed=seed, side=2, walk=5))
    assert solve_optimal(d, p).cost == bfs_min_cost(d, p, 12)


def test_negative_precondition_respected():
    d = parse_domain("""(define (domain n) (:requirements :strips :negative-preconditions)
      (:predicates (a) (b) (blocked))
      (:action go :parameters () :precondition (and (a) (not (blocked))) :effect (b))
      (:action unblock :parameters () :precondition (blocked) :effect (not (blocked))))""")
    p = parse_problem("(define (problem n1) (:domain n) (:init (a) (blocked)) (:goal (b)))", d)
    res = solve_optimal(d, p)
    assert [s.name for s in res.plan] == ["unblock", "go"]
