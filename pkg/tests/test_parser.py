import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpsaode.arith import GaussianField, GaussianRational, ParamField, RationalField
from fpsaode.diffpoly import DiffPoly
from fpsaode.errors import (
    ExponentOverflowError,
    ImaginaryUnitError,
    ParseError,
    UndeclaredParameterError,
)
from fpsaode.parser import parse_constant, parse_diffpoly, render_diffpoly

from support import random_diffpoly

Q = RationalField()
G = GaussianField()
P = ParamField(["p", "q"])


def test_examples():
    F = parse_diffpoly("x*y'' - 3*y' + x^2*y^2", Q)
    assert F.order() == 2
    assert F.terms == {
        (1, ((2, 1),)): 1,
        (0, ((1, 1),)): -3,
        (2, ((0, 2),)): 1,
    }
    assert parse_diffpoly("y", Q) == DiffPoly.y(Q, 0)
    a = parse_diffpoly("x*(y^(2)-1)^2 + (y-x)*(y^(1)-1)", Q)
    b = parse_diffpoly("x*y''^2 - 2*x*y'' + x + y*y' - y - x*y' + x", Q)
    assert a == b


def test_derivative_spellings_agree():
    assert parse_diffpoly("y'''", Q) == parse_diffpoly("y^(3)", Q) == DiffPoly.y(Q, 3)
    assert parse_diffpoly("y^(0)", Q) == DiffPoly.y(Q, 0)


def test_constants():
    assert parse_constant("-3/4", Q) == Fraction(-3, 4)
    assert parse_constant("(1-i)/2", G) == GaussianRational(Fraction(1, 2), Fraction(-1, 2))
    p = P.gen("p")
    assert parse_constant("1/(p+1)", P) == P.inv(p + 1)


@pytest.mark.parametrize("text,span", [("x + * y", (4, 5)), ("2x", (1, 2)), ("y^(2", (4, 5))])
def test_syntax_errors_carry_spans(text, span):
    with pytest.raises(ParseError) as info:
        parse_diffpoly(text, Q)
    assert info.value.span == span
    assert info.value.code == "syntax-error"


def test_empty_input():
    with pytest.raises(ParseError):
        parse_diffpoly("", Q)
    with pytest.raises(ParseError):
        parse_diffpoly("   ", Q)


def test_name_and_unit_errors():
    with pytest.raises(UndeclaredParameterError):
        parse_diffpoly("p*y", Q)
    with pytest.raises(UndeclaredParameterError):
        parse_diffpoly("r*y", P)
    with pytest.raises(ImaginaryUnitError):
        parse_diffpoly("i*y", Q)
    with pytest.raises(ImaginaryUnitError):
        parse_constant("1 + i", P)


def test_exponent_overflow():
    with pytest.raises(ExponentOverflowError):
        parse_diffpoly("y^100000", Q)


def test_division_needs_constant_divisor():
    with pytest.raises(ParseError):
        parse_diffpoly("1/y", Q)
    with pytest.raises(ParseError):
        parse_diffpoly("y/(1-1)", Q)


def test_render_examples():
    assert render_diffpoly(DiffPoly.zero(Q)) == "0"
    F = parse_diffpoly("(2+3*i)*y^2*x - i", G)
    assert "i" in render_diffpoly(F)
    assert parse_diffpoly(render_diffpoly(F), G) == F


# -- properties ---------------------------------------------------------------


def _coefficient(rng, field):
    a = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    if field is G:
        return GaussianRational(a, Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
    if field is P:
        p, q = P.gen("p"), P.gen("q")
        num = P.convert(a) + rng.randint(-2, 2) * p * q + rng.randint(-2, 2) * p
        return num * P.inv(P.one + rng.randint(0, 2) * q * q)
    return a


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["rational", "gaussian", "param"]))
def test_round_trip(seed, tag):
    field = {"rational": Q, "gaussian": G, "param": P}[tag]
    rng = random.Random(seed)
    shape = random_diffpoly(rng)
    terms = {k: _coefficient(rng, field) for k in shape.terms}
    F = DiffPoly(field, {k: v for k, v in terms.items() if not field.is_zero(v)})
    text = render_diffpoly(F)
    assert parse_diffpoly(text, field) == F
    assert render_diffpoly(parse_diffpoly(text, field)) == text


# Expressions are generated twice: in the input syntax and as Python source.
# Python shares the intended precedence ('**' above unary '-' above '*'), so
# its evaluator serves as the reference.

_ATOMS = [("x", "x"), ("y", "y0"), ("y'", "y1"), ("y''", "y2"), ("y^(1)", "y1")]


@st.composite
def atoms(draw):
    if draw(st.booleans()):
        n = str(draw(st.integers(0, 9)))
        return n, n
    return draw(st.sampled_from(_ATOMS))


exprs = st.recursive(
    atoms(),
    lambda inner: st.one_of(
        st.tuples(inner, st.sampled_from(["+", "-", "*"]), inner).map(
            lambda t: (f"{t[0][0]} {t[1]} {t[2][0]}", f"{t[0][1]} {t[1]} {t[2][1]}")),
        inner.map(lambda e: (f"-{e[0]}", f"-{e[1]}")),
        inner.map(lambda e: (f"({e[0]})", f"({e[1]})")),
        st.tuples(atoms() | inner.map(lambda e: (f"({e[0]})", f"({e[1]})")), st.integers(0, 3)).map(
            lambda t: (f"{t[0][0]}^{t[1]}", f"{t[0][1]}**{t[1]}")),
    ),
    max_leaves=8,
)


def _evaluate(F, point):
    total = 0
    for (xdeg, ys), c in F.terms.items():
        term = c * point["x"] ** xdeg
        for j, e in ys:
            term *= point[f"y{j}"] ** e
        total += term
    return total


@settings(max_examples=150, deadline=None)
@given(exprs, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_precedence_against_reference_evaluator(expr, values):
    text, source = expr
    point = dict(zip(["x", "y0", "y1", "y2"], values))
    want = eval(source, {"__builtins__": {}}, dict(point))
    assert _evaluate(parse_diffpoly(text, Q), point) == want
