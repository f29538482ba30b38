"""Random generators and independent oracles shared by the test modules.

The oracles go through sympy's own calculus (``Derivative`` objects and
``diff``) so they share no code with the package under test.
"""

from __future__ import annotations

import contextlib
import random
from fractions import Fraction
from math import factorial

import sympy

from fpsaode.arith import GaussianRational, RationalField
from fpsaode.diffpoly import DiffPoly

X = sympy.Symbol("x")
Yf = sympy.Function("y")(X)


def sym_y(j: int):
    return Yf if j == 0 else sympy.Derivative(Yf, (X, j))


def _sym_coeff(c):
    if isinstance(c, GaussianRational):
        return sympy.Rational(c.real.numerator, c.real.denominator) + sympy.I * sympy.Rational(
            c.imag.numerator, c.imag.denominator)
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def to_sympy(F: DiffPoly):
    """The differential polynomial as a sympy expression in x and y(x)."""
    total = sympy.Integer(0)
    for (a, ys), c in F.terms.items():
        t = _sym_coeff(c) * X**a
        for j, e in ys:
            t *= sym_y(j) ** e
        total += t
    return total


def sparse_oracle(F: DiffPoly, top: int):
    """(ring, x, Y, P): F as an element P of sympy's sparse ring over QQ in
    x, Y_0..Y_top, where Y_j stands for y^(j)."""
    from sympy.polys.rings import ring

    names = ["x"] + [f"Y{j}" for j in range(top + 1)]
    R, *gens = ring(",".join(names), sympy.QQ)
    x, Y = gens[0], gens[1:]
    P = R.zero
    for (a, ys), c in F.terms.items():
        t = R(sympy.QQ(Fraction(c).numerator, Fraction(c).denominator)) * x**a
        for j, e in ys:
            t *= Y[j] ** e
        P += t
    return R, x, Y, P


def total_derivative(P, x, Y):
    """d/dx on the sparse ring: partial in x plus chain rule through every Y_j."""
    out = P.diff(x)
    for j in range(len(Y) - 1):
        if P.degree(Y[j]) > 0:
            out += Y[j + 1] * P.diff(Y[j])
    return out


def sparse_order(P, Y) -> int:
    return max((j for j in range(len(Y)) if P.degree(Y[j]) > 0), default=-1)


def random_diffpoly(rng: random.Random, max_order=3, max_deg=3, max_terms=5,
                    field=None, x_deg=2) -> DiffPoly:
    """A random DiffPoly that involves y; monomials have total y-degree <= max_deg."""
    field = field or RationalField()
    while True:
        n = rng.randint(0, max_order)
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            deg = rng.randint(0, max_deg)
            ys = {}
            for _ in range(deg):
                j = rng.randint(0, n)
                ys[j] = ys.get(j, 0) + 1
            key = (rng.randint(0, x_deg), tuple(sorted(ys.items())))
            c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            if c:
                terms[key] = terms.get(key, 0) + c
        terms = {k: v for k, v in terms.items() if v}
        F = DiffPoly(field, terms)
        if F.order() is not None:
            return F


def random_poly_solution(rng: random.Random, degree=4) -> list:
    """Plain coefficients a_0..a_degree of a random polynomial y(x)."""
    return [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(degree + 1)]


def plant(F: DiffPoly, a: list) -> DiffPoly:
    """F - F(y_p) where y_p = sum a_j x^j, so that y_p solves the result."""
    expr = to_sympy(F)
    yp = sum(_sym_coeff(c) * X**j for j, c in enumerate(a))
    subs = {sym_y(j): sympy.diff(yp, X, j) for j in range(F.order(), -1, -1)}
    h = sympy.Poly(sympy.expand(expr.subs(subs)), X)
    out = DiffPoly(F.field, dict(F.terms))
    for (deg,), c in h.terms():
        q = Fraction(int(c.p), int(c.q))
        out = out - DiffPoly.constant(F.field, q) * DiffPoly.x(F.field) ** deg
    return out


def derivative_values(a: list, upto: int) -> list:
    """c_j = j! a_j (zero beyond the degree) for j = 0..upto."""
    return [Fraction(factorial(j)) * (a[j] if j < len(a) else 0) for j in range(upto + 1)]


@contextlib.contextmanager
def criterion(capsys, number: int, title: str):
    """Print one PASS/FAIL line for an acceptance criterion."""
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"\nFAIL criterion {number}: {title}")
        raise
    with capsys.disabled():
        print(f"\nPASS criterion {number}: {title}")
