import pytest
from hypothesis import given, strategies as st

from protokit.pddl import (
    Atom,
    PddlSyntaxError,
    PddlTypeError,
    UnknownObject,
    UnknownPredicate,
    UnsupportedRequirement,
    format_domain,
    format_problem,
    ground_actions,
    parse_domain,
    parse_problem,
)
from protokit.pddl.generators import BLOCKSWORLD_DOMAIN, LOGISTICS_DOMAIN, NPUZZLE_DOMAIN, GenSpec, instance_texts

TINY = """
(define (domain tiny)
  (:requirements :strips :typing :negative-preconditions)
  (:types room)
  (:predicates (at ?r - room) (lit ?r - room))
  (:action go
    :parameters (?a ?b - room)
    :precondition (and (at ?a) (not (lit ?b)))
    :effect (and (at ?b) (not (at ?a)))))
"""


def test_puzzle8_domain_shape(puzzle8):
    domain, problem = puzzle8
    assert domain.name == "n-puzzle-typed"
    assert [p.name for p in domain.predicates] == ["at", "neighbor", "empty"]
    move = domain.action("move")
    assert [n for n, _ in move.params] == ["?tile", "?from", "?to"]
    assert len(move.precondition) == 3
    assert len(move.add) == 2 and len(move.delete) == 2
    assert problem.name == "n-puzzle-3"
    assert len(problem.objects) == 17


def test_puzzle8_grounds_to_648_moves(puzzle8):
    # 8 tiles x 9 positions x 9 positions; static neighbor facts are not consulted
    assert len(ground_actions(*puzzle8)) == 648


def test_grounding_is_lexicographic(puzzle8):
    acts = ground_actions(*puzzle8)
    keys = [(a.name, a.args) for a in acts]
    assert keys == sorted(keys)


def test_keywords_case_insensitive_names_keep_case():
    d = parse_domain(TINY.replace(":action", ":ACTION").replace("define", "DEFINE"))
    assert d.action("go") is not None
    p = parse_problem("(define (problem q) (:domain tiny) (:objects Hall - room) (:init (at Hall)) (:goal (at Hall)))", d)
    assert ("Hall", "room") in p.objects


def test_negative_precondition_parsed():
    d = parse_domain(TINY)
    lits = d.action("go").precondition
    assert any(not l.positive for l in lits)


@pytest.mark.parametrize(
    "snippet, tag",
    [
        ("(:requirements :strips :conditional-effects)", ":conditional-effects"),
        ("(:requirements :adl)", ":adl"),
        ("(:requirements :fluents)", ":fluents"),
    ],
)
def test_unsupported_requirement(snippet, tag):
    text = f"(define (domain x) {snippet} (:predicates (p)))"
    with pytest.raises(UnsupportedRequirement) as e:
        parse_domain(text)
    assert e.value.tag == tag


def test_forall_in_effect_is_unsupported():
    text = TINY.replace("(and (at ?b) (not (at ?a)))", "(forall (?x - room) (lit ?x))")
    with pytest.raises(UnsupportedRequirement):
        parse_domain(text)


def test_undeclared_predicate_in_action():
    with pytest.raises(UnknownPredicate):
        parse_domain(TINY.replace("(not (lit ?b))", "(not (dark ?b))"))


def test_wrong_arity():
    with pytest.raises(PddlTypeError):
        parse_domain(TINY.replace("(at ?b)", "(at ?b ?a)"))


def test_unknown_object_in_init():
    d = parse_domain(TINY)
    with pytest.raises(UnknownObject):
        parse_problem("(define (problem q) (:domain tiny) (:objects a - room) (:init (at b)) (:goal (at a)))", d)


def test_unbalanced_parens_reports_position():
    with pytest.raises(PddlSyntaxError) as e:
        parse_domain("(define (domain x)\n  (:predicates (p)")
    assert e.value.line >= 1


def test_comments_ignored():
    d = parse_domain("; header\n" + TINY.replace("(:types room)", "(:types room) ; rooms"))
    assert d.name == "tiny"


@pytest.mark.parametrize("text", [BLOCKSWORLD_DOMAIN, LOGISTICS_DOMAIN, NPUZZLE_DOMAIN, TINY])
def test_print_parse_roundtrip_domain(text):
    d = parse_domain(text)
    assert parse_domain(format_domain(d)) == d


@given(st.sampled_from(["blocksworld", "logistics", "npuzzle"]), st.integers(0, 10_000))
def test_print_parse_roundtrip_generated(kind, seed):
    dtext, ptext = instance_texts(GenSpec(kind, seed=seed))
    d = parse_domain(dtext)
    p = parse_problem(ptext, d)
    assert parse_domain(format_domain(d)) == d
    assert parse_problem(format_problem(p, typed=":typing" in d.requirements), d) == p
    assert format_domain(parse_domain(dtext)) == dtext


def test_atom_text():
    assert str(Atom("on", ("a", "b"))) == "(on a b)"
