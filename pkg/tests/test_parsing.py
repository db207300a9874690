import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import free_product_backends, free_product_equation, vc_backends, vc_equation
from expeq.groups import FreeProduct, InvalidGroupSpec, VirtuallyCyclicGroup
from expeq.parsing import (
    ParseError,
    parse_box,
    parse_equation,
    parse_group_file,
    parse_semilinear,
    parse_solution,
    tokenize,
)
from expeq.semilinear import ZLinearSet, ZSemilinearSet

GROUPS = Path(__file__).resolve().parent.parent / "groupfiles"


def load(name):
    return parse_group_file((GROUPS / name).read_text())


def test_group_files_load():
    d = load("dinf.grp")["Dinf"]
    assert isinstance(d, VirtuallyCyclicGroup) and d.eps == (1, -1)
    f = load("free2.grp")["F"]
    assert isinstance(f, FreeProduct) and len(f.factors) == 2
    g = load("z_c2.grp")["G"]
    assert g.factors[1].size == 2


def test_invalid_group_file_raises():
    with pytest.raises(InvalidGroupSpec):
        load("bad_c3.grp")
    assert parse_group_file((GROUPS / "bad_c3.grp").read_text(), validate=False)["C3"].violations()


@pytest.mark.parametrize("text", [
    "group X = nonsense",
    "group F = free_product(a, b)",
    "group a = integers\ngroup F = free_product(a, a)",
    "oops X = integers",
])
def test_bad_group_statements(text):
    with pytest.raises((ParseError, ValueError)):
        parse_group_file(text)


def test_dihedral_equation():
    D = load("dinf.grp")["Dinf"]
    e = parse_equation("t * h^x1 * t * h^x2 = 1", D)
    assert e.n == 2 and e.variables == ("x1", "x2")
    assert e.coefficients == ((1, 0), (1, 0)) and e.bases == ((0, 1), (0, 1))


def test_parenthesized_words():
    F = load("free2.grp")["F"]
    e = parse_equation("(a b)^x1 * b^-1 a^-1 ^x2 = 1", F)
    assert e.bases == (((0, 1), (1, 1)), ((1, -1), (0, -1)))
    assert parse_equation(e.render(), F) == e


def test_inverse_variable_and_trailing_constant():
    F = load("free2.grp")["F"]
    e = parse_equation("a^-x1 * b = 1", F)
    assert e.bases == (((0, -1),),) and e.coefficients == (((1, 1),),)


def test_vc_pair_literals():
    D = load("dinf.grp")["Dinf"]
    assert parse_equation("(t, 2)^x = 1", D).bases == ((1, 2),)
    assert parse_equation("Dinf(1,-1)^x = 1", D).bases == ((1, -1),)


@pytest.mark.parametrize("text,fragment", [
    ("a^x1 * b^x2 * a^-1^x3 = 1", "nested exponent"),
    ("a^x1 * b^x1 = 1", "repeated variable"),
    ("= 1", "empty left side"),
    ("c^x1 = 1", "unknown symbol"),
    ("a b = 1", "no variables"),
    ("a^x1 = 2", "right side"),
    ("a^x1 * = 1", "expected a word"),
])
def test_equation_errors(text, fragment):
    F = load("free2.grp")["F"]
    with pytest.raises(ParseError) as exc:
        parse_equation(text, F)
    assert fragment in str(exc.value)
    assert "column" in str(exc.value)


def test_tokenizer_rejects_stray_characters():
    with pytest.raises(ParseError):
        tokenize("a $ b")


def test_small_formats():
    assert parse_solution("(2,0,-2,0)") == (2, 0, -2, 0)
    assert parse_box("-4:4", 3) == [(-4, 4)] * 3
    assert parse_box("0:1,-2:2", 2) == [(0, 1), (-2, 2)]
    with pytest.raises(ParseError):
        parse_box("0:1,0:1", 3)
    with pytest.raises(ParseError):
        parse_semilinear("EMPTY")
    assert parse_semilinear("EMPTY", 2) == ZSemilinearSet.empty(2)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 3), st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), max_size=3),
       st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_semilinear_render_round_trip(k, periods, base):
    pieces = tuple(ZLinearSet(2, base, tuple(periods[:j])) for j in range(k))
    s = ZSemilinearSet(2, pieces)
    assert parse_semilinear(s.render(), 2) == s


FP = sorted(free_product_backends())


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(FP), st.integers(1, 4), st.integers(0, 10**6))
def test_free_product_equation_round_trip(name, n, seed):
    G = free_product_backends()[name]
    e = free_product_equation(random.Random(seed), G, n)
    assert parse_equation(e.render(), G) == e


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2), st.integers(1, 3), st.integers(0, 10**6))
def test_vc_equation_round_trip(k, n, seed):
    G = vc_backends()[k]
    e = vc_equation(random.Random(seed), G, n)
    assert parse_equation(e.render(), G) == e
