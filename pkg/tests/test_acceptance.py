"""Acceptance suite: nine criteria, exact arithmetic, one PASS/FAIL line each."""

import random
from fractions import Fraction
from math import comb, factorial

import sympy

from fpsaode.arith import GaussianField, ParamField, RationalField
from fpsaode.diffpoly import DiffPoly, eval_origin_jet, matrix_form_check, remainder, separant
from fpsaode.jets import evaluate_with_unknowns, jet_ideal, separant_ideal
from fpsaode.parser import parse_constant, parse_diffpoly
from fpsaode.poly import (
    PolyRing,
    contains_one,
    groebner_basis,
    no_field_points,
    normal_form,
    s_polynomial,
)
from fpsaode.solver import (
    direct_method_local,
    extend_global,
    global_vanishing_order,
    ift_extend,
    local_vanishing_order,
    quasilinear_bound,
    solve,
    verify_truncation,
)

from support import (
    criterion,
    derivative_values,
    plant,
    random_diffpoly,
    random_poly_solution,
    sparse_oracle,
    sparse_order,
    total_derivative,
)

Q = RationalField()
G = GaussianField()

FREE_C4 = "x*y'' - 3*y' + x^2*y^2"
TWO_BRANCH = "y'^2 + y' - 2*y - x"
GAUSSIAN_F = "x*(y''-1)^2 + (y-x)*(y'-1)"
RICCATI = "x*y' + y^2 - y - x^2"
UNBOUNDED = "x*y*y'' - y*y' + x*y'^2"


def squared_family(m):
    return f"(y'+y)^2/2 + x^{2 * m}"


def produced_descriptions():
    """Every nonempty description criteria 1-3 produce, for criterion 7."""
    out = []
    K = ParamField(["c_0"])
    F = parse_diffpoly(FREE_C4, K)
    c0 = K.gen("c_0")
    out.append((F, solve(F, [c0, 0, 0, 2 * c0**2], 10)))
    Fq = parse_diffpoly(FREE_C4, Q)
    out.append((Fq, solve(Fq, [1, 0, 0, 2, 24], 10)))
    F = parse_diffpoly(TWO_BRANCH, Q)
    for c2 in (0, 1):
        out.append((F, solve(F, [Fraction(-1, 8), Fraction(-1, 2), c2, "c_3"], 6)))
    F = parse_diffpoly(GAUSSIAN_F, G)
    g = lambda t: parse_constant(t, G)  # noqa: E731
    c2 = [g(t) for t in ("0", "0", "1-i", "3*(1+i)/4", "(-3+4*i)/8", "(-2-9*i)/64")]
    out.append((F, extend_global(F, 2, c2 + ["c_6"], 6)))
    return out


def _series(s, field):
    return [s.series_coefficient(j) for j in range(s.ell + 1)]


def test_criterion_1_parametrized_family(capsys):
    with criterion(capsys, 1, "parametrized family with free c~4, exact series to x^10"):
        K = ParamField(["c_0"])
        F = parse_diffpoly(FREE_C4, K)
        c0 = K.gen("c_0")
        s = solve(F, [c0, 0, 0, 2 * c0**2], 10)
        assert s.status == "parametrized"
        assert s.free_vars == ["c~4"]
        assert s.constraints == []
        assert (s.provenance["r"], s.provenance["q"]) == (1, 3)
        R = s.ring
        c4 = R.gen("c~4")
        C = lambda text: R.constant(parse_constant(text, K))  # noqa: E731
        want = {
            0: C("c_0"),
            3: C("c_0^2/3"),
            4: c4 * Fraction(1, 24),
            6: C("-c_0^3/18"),
            7: c4 * C("-c_0/252"),
            10: c4 * C("-c_0^2/3024"),
        }
        got = _series(s, K)
        for j in range(11):
            assert got[j] == want.get(j, R.zero), j

        # Concretely at c_0 = 1 with c_4 = 24 supplied as a trailing entry.
        Fq = parse_diffpoly(FREE_C4, Q)
        t = solve(Fq, [1, 0, 0, 2, 24], 10)
        assert t.status == "unique"
        plain = [t.series_coefficient(j).constant_coeff() for j in range(11)]
        expect = [Fraction(0)] * 11
        expect[0], expect[3], expect[4] = Fraction(1), Fraction(1, 3), Fraction(1)
        expect[6], expect[7], expect[10] = Fraction(-1, 18), Fraction(-24, 252), Fraction(-24, 3024)
        assert plain == expect


def test_criterion_2_two_branches(capsys):
    with criterion(capsys, 2, "two branches y_1, y_2 with condition c_3 = 0; wrong c_3 empty"):
        F = parse_diffpoly(TWO_BRANCH, Q)
        h = Fraction(1, 2)
        y1 = solve(F, [Fraction(-1, 8), -h, 0, "c_3"], 6)
        y2 = solve(F, [Fraction(-1, 8), -h, 1, "c_3"], 6)
        for s, x2 in ((y1, 0), (y2, h)):
            assert s.status == "unique"
            assert s.conditions["c_3"] == s.ring.zero
            plain = [s.series_coefficient(j).constant_coeff() for j in range(7)]
            assert plain == [Fraction(-1, 8), -h, x2, 0, 0, 0, 0]
        for bad in ([Fraction(-1, 8), -h, 0, 1], [Fraction(-1, 8), -h, 1, 2]):
            assert solve(F, bad, 6).status == "empty"


def test_criterion_3_gaussian(capsys):
    with criterion(capsys, 3, "Gaussian example: c_1 empty, c_2 forces c_6 = 3(47-11i)/160"):
        F = parse_diffpoly(GAUSSIAN_F, G)
        g = lambda t: parse_constant(t, G)  # noqa: E731
        c1 = [g(t) for t in ("100/9", "1", "-1/9", "0", "-1/120", "0")] + ["c_6"]
        c2 = [g(t) for t in ("0", "0", "1-i", "3*(1+i)/4", "(-3+4*i)/8", "(-2-9*i)/64")]
        c2 += ["c_6"]
        assert global_vanishing_order(F, 3).order == 2
        assert extend_global(F, 2, c1, 6).status == "empty"
        s = extend_global(F, 2, c2, 6)
        assert s.status == "unique"
        assert s.conditions["c_6"].constant_coeff() == g("3*(47-11*i)/160")
        want = ["(1-i)/2", "(1+i)/8", "-(3-4*i)/192", "-(2+9*i)/7680", "(47-11*i)/38400"]
        got = [s.series_coefficient(j).constant_coeff() for j in range(2, 7)]
        assert got == [g(t) for t in want]


def test_criterion_4_family_not_extendable(capsys):
    with criterion(capsys, 4, "(y'+y)^2/2 + x^(2m), tuple (0,0) non-extendable for m = 1,2,3"):
        for m in (1, 2, 3):
            F = parse_diffpoly(squared_family(m), Q)
            # F^(2m) at (0,...,0,c_{2m+1}) is the constant (2m)!.
            v = evaluate_with_unknowns(F.diff(2 * m), [0] * (2 * m + 1), 2 * m + 1)
            assert v == factorial(2 * m)
            # Along the chain, the zero prefix forces the next entry to vanish.
            for j in range(1, m):
                J = jet_ideal(F, 2 * j)
                R = PolyRing(list(J.ring.names) + ["z"], Q)
                gens = [g.convert(R) for g in J.gens]
                gens += [R.gen(f"c_{p}") for p in range(j + 1)]
                gens.append(R.one - R.gen("z") * R.gen(f"c_{j + 1}"))
                assert no_field_points(gens)
            s = solve(F, [0, 0], 8)
            assert s.status == "empty"
            assert s.provenance["level"] == 2 * m
            assert "cannot be extended" in s.message


def test_criterion_5_vanishing_orders(capsys):
    with criterion(capsys, 5, "global orders 1, m (m=0..3), not-found-up-to(4), cap 1"):
        assert global_vanishing_order(parse_diffpoly(RICCATI, Q)).order == 1
        for m in range(4):
            assert global_vanishing_order(parse_diffpoly(squared_family(m), Q), 5).order == m
        rep = global_vanishing_order(parse_diffpoly(UNBOUNDED, Q), 4)
        assert not rep.found and rep.describe() == "not-found-up-to(4)"
        assert quasilinear_bound(parse_diffpoly(TWO_BRANCH, Q)) == 1
        assert local_vanishing_order(parse_diffpoly(FREE_C4, Q), [1, 0, 0, 2]).order == 1


def test_criterion_6_expansion_identity(capsys):
    with criterion(capsys, 6, "expansion identity on 200 random differential polynomials"):
        rng = random.Random(6)
        for _ in range(200):
            F = random_diffpoly(rng, max_order=3, max_deg=3, max_terms=5)
            n = F.order()
            top = n + 2 * 3 + 5
            R, x, Y, P = sparse_oracle(F, top)
            derivs = [P]
            f = {p: [P.diff(Y[p])] for p in range(n + 1)}
            for m in range(4):
                for k in range(2 * m + 1, 2 * m + 5):
                    while len(derivs) <= k:
                        derivs.append(total_derivative(derivs[-1], x, Y))
                    # Oracle: the sum form on sympy's sparse polynomials.
                    total = derivs[k]
                    for i in range(m + 1):
                        s = R.zero
                        for j in range(i + 1):
                            p = n - i + j
                            if p < 0:
                                continue
                            while len(f[p]) <= j:
                                f[p].append(total_derivative(f[p][-1], x, Y))
                            s += comb(k, j) * f[p][j]
                        total -= s * Y[n + k - i]
                    assert sparse_order(total, Y) <= n + k - m - 1
                    r = remainder(F, k, m)
                    assert sparse_oracle(r, top)[3].as_expr() == total.as_expr()
                    assert matrix_form_check(F, k, m)


def test_criterion_7_back_substitution(capsys):
    with criterion(capsys, 7, "back-substitution of produced solutions and 100 planted AODEs"):
        for F, s in produced_descriptions():
            assert s.status != "empty"
            assert verify_truncation(F, s)
        rng = random.Random(7)
        done = 0
        while done < 100:
            F0 = random_diffpoly(rng, max_order=2, max_deg=3, max_terms=4)
            if done % 3 == 0:
                F0 = F0 * parse_diffpoly("x", Q)  # singular separant at the origin
            if F0.order() is None:
                continue
            a = random_poly_solution(rng, degree=rng.randint(1, 5))
            F = plant(F0, a)
            n = F.order()
            if n is None:
                continue
            c = derivative_values(a, n + 3)
            rep = local_vanishing_order(F, c, 3)
            if not rep.found:
                continue
            s = direct_method_local(F, c[:n + rep.order + 1], 8)
            assert s.status != "empty"
            assert verify_truncation(F, s)
            if s.status == "unique":
                plain = [s.series_coefficient(j).constant_coeff() for j in range(9)]
                assert plain == [a[j] if j < len(a) else 0 for j in range(9)]
            done += 1


def _random_ideal(rng, R):
    gens = []
    for _ in range(rng.randint(1, 3)):
        d = {}
        for _ in range(rng.randint(1, 4)):
            e = [0] * R.nvars
            for _ in range(rng.randint(0, 3)):
                e[rng.randrange(R.nvars)] += 1
            d[tuple(e)] = Fraction(rng.randint(-4, 4), rng.randint(1, 2))
        p = R.from_dict({k: v for k, v in d.items() if v})
        if p:
            gens.append(p)
    return gens


def test_criterion_8_groebner(capsys):
    with criterion(capsys, 8, "Buchberger criterion and membership on 100 random ideals"):
        rng = random.Random(8)
        count = 0
        while count < 100:
            nv = rng.randint(1, 4)
            names = [f"v{j}" for j in range(nv)]
            R = PolyRing(names, Q)
            gens = _random_ideal(rng, R)
            if not gens:
                continue
            B = groebner_basis(gens)
            for g in gens:
                assert not normal_form(g, B)
            for p in range(len(B)):
                for q in range(p + 1, len(B)):
                    assert not normal_form(s_polynomial(B[p], B[q]), B)
            # Oracle: sympy's reduced basis in the same order.
            syms = sympy.symbols(names)
            conv = lambda P: sum(  # noqa: E731
                sympy.Rational(c.numerator, c.denominator)
                * sympy.Mul(*[s**e for s, e in zip(syms, m)]) for m, c in P.terms.items())
            ref = sympy.groebner([conv(g) for g in gens], *syms, order="grevlex")
            monic = lambda e: sympy.Poly(e, *syms).monic()  # noqa: E731
            assert sorted(map(str, map(monic, map(conv, B)))) == sorted(
                map(str, map(monic, ref.exprs)))
            count += 1

        R = PolyRing(["c_0"], Q)
        c0 = R.gen("c_0")
        assert not contains_one([c0**2 - c0])
        F = parse_diffpoly(RICCATI, Q)
        J = jet_ideal(F, 2)
        I = [g.convert(J.ring) for g in separant_ideal(F, 1)]
        assert contains_one(I + list(J.gens))


def test_criterion_9_ift_agreement(capsys):
    with criterion(capsys, 9, "classical recursion agrees with the local method on 50 AODEs"):
        rng = random.Random(9)
        done = 0
        while done < 50:
            F = random_diffpoly(rng, max_order=3, max_deg=3, max_terms=5)
            n = F.order()
            c = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n + 1)]
            F = F - DiffPoly.constant(Q, eval_origin_jet(F, c))
            if F.order() != n or eval_origin_jet(separant(F), c) == 0:
                continue
            a = ift_extend(F, c, 8)
            b = direct_method_local(F, c, 8)
            assert a.coefficients == b.coefficients
            assert len(a.coefficients) == 9
            done += 1
