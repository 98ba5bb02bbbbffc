import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from protokit.jsonio import (
    Diff,
    DuplicateKey,
    JsonSyntaxError,
    NoBlockFound,
    canonical_bytes,
    canonical_dumps,
    compare,
    equal,
    extract_fenced,
    format_path,
    parse_json,
)


def test_parse_examples():
    assert parse_json('{"result":"No valid solution found"}') == {"result": "No valid solution found"}
    assert parse_json("[]") == []
    with pytest.raises(DuplicateKey) as info:
        parse_json('{"a":1,"a":2}')
    assert info.value.path == ("a",)


def test_nested_duplicate_path():
    with pytest.raises(DuplicateKey) as info:
        parse_json('{"x":[{"k":1},{"k":2,"k":3}]}')
    assert format_path(info.value.path) == "$.x[1].k"


@pytest.mark.parametrize("text", ["{'a':1}", "[1,]", "NaN", "[Infinity]", "1e999", "", "{\"a\" 1}", "[1] x"])
def test_strict_grammar(text):
    with pytest.raises(JsonSyntaxError):
        parse_json(text)


def test_syntax_error_offset():
    with pytest.raises(JsonSyntaxError) as info:
        parse_json('{"a": tru}')
    assert info.value.offset == 6


def test_compare_examples():
    assert compare({"a": 1, "b": 2}, {"b": 2, "a": 1}) == []
    assert compare({"n": 1}, {"n": 1.0}) == []
    assert compare({"xs": [1, 2]}, {"xs": [2, 1]}) == [Diff(("xs", 0), "ValueMismatch"), Diff(("xs", 1), "ValueMismatch")]


def test_compare_kinds():
    assert compare({"a": 1}, {}) == [Diff(("a",), "Missing")]
    assert compare({}, {"b": None}) == [Diff(("b",), "Extra")]
    assert compare([1], [1, 2]) == [Diff((1,), "Extra")]
    assert compare({"a": "1"}, {"a": 1}) == [Diff(("a",), "TypeMismatch")]
    assert compare(True, 1) == [Diff((), "TypeMismatch")]
    assert compare(None, None) == []


def test_numeric_tolerance():
    assert equal(0.1 + 0.2, 0.3)
    assert equal(1e20, 1e20 * (1 + 1e-12))
    assert not equal(1.0, 1.0001)
    assert not equal(10**17, 10**17 + 1)
    assert equal(0.0, -0.0)


# properties ---------------------------------------------------------------

scalars = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(-(10**6), 10**6),
    st.text(max_size=5),
)
values = st.recursive(
    scalars,
    lambda inner: st.one_of(st.lists(inner, max_size=4), st.dictionaries(st.text(max_size=3), inner, max_size=4)),
    max_leaves=12,
)

# floats on a coarse lattice: distinct points are far apart relative to the tolerance
lattice = st.integers(-1000, 1000).map(lambda k: k / 8)
lattice_values = st.recursive(
    st.one_of(lattice, st.integers(-5, 5)),
    lambda inner: st.one_of(st.lists(inner, max_size=3), st.dictionaries(st.sampled_from("abc"), inner, max_size=3)),
    max_leaves=8,
)


@given(values)
def test_reflexive_and_reparse(v):
    assert equal(v, v)
    assert equal(v, parse_json(json.dumps(v)))
    assert equal(v, parse_json(canonical_dumps(v)))


@given(lattice_values, lattice_values)
def test_symmetric(a, b):
    assert equal(a, b) == equal(b, a)


@given(lattice_values, lattice_values, lattice_values)
def test_transitive(a, b, c):
    if equal(a, b) and equal(b, c):
        assert equal(a, c)


@given(values, values)
def test_canonical_bytes_iff_equal(a, b):
    assert equal(a, b) == (canonical_bytes(a) == canonical_bytes(b))


@given(st.dictionaries(st.text(max_size=3), st.integers(), max_size=5))
def test_canonical_ignores_key_order(d):
    rev = dict(reversed(list(d.items())))
    assert canonical_bytes(d) == canonical_bytes(rev)


def test_canonical_format():
    assert canonical_dumps({"b": [1, 2.0], "a": "é", "c": 0.5}) == '{"a":"é","b":[1,2],"c":0.5}'


# fenced blocks ------------------------------------------------------------


def test_extract_last_json_block():
    text = 'Let me think.\n```json\n{"draft": 1}\n```\nSo the answer:\n```json\n{"result": "No valid solution found"}\n```\n'
    assert parse_json(extract_fenced(text, "json")) == {"result": "No valid solution found"}


def test_extract_second_pddl_block():
    text = "```pddl\n(a)\n```\nthen\n```PDDL\n(b)\n(c)\n```"
    assert extract_fenced(text, "pddl") == "(b)\n(c)"


def test_extract_ignores_other_tags():
    text = "```json\n{}\n```\n```prolog\nfoo.\n```"
    assert extract_fenced(text, "json") == "{}"


@pytest.mark.parametrize("text", ["no fences here", "```\n{}\n```", "```json {}```"])
def test_no_block(text):
    with pytest.raises(NoBlockFound):
        extract_fenced(text, "json")
