"""Sparse multivariate polynomials over an exact field, Gröbner bases and
integer roots of univariate polynomials."""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from sympy import divisors

from .errors import IncompatibleRingError, ZeroPolynomialError

__all__ = [
    "PolyRing",
    "MultiPoly",
    "groebner_basis",
    "normal_form",
    "contains_one",
    "integer_roots",
    "field_roots",
    "no_field_points",
    "render_terms",
    "s_polynomial",
]


def _degrevlex(e):
    return (sum(e), tuple(-v for v in reversed(e)))


def _lex(e):
    return e


def order_key(order):
    """Sort key for exponent tuples; larger key means larger monomial."""
    if order == "degrevlex":
        return _degrevlex
    if order == "lex":
        return _lex
    if isinstance(order, tuple) and order[0] == "elim":
        k = order[1]
        return lambda e: (_degrevlex(e[:k]), _degrevlex(e[k:]))
    raise ValueError(f"unknown monomial order {order!r}")


def render_terms(items, field) -> str:
    """Render ``[(coeff, [(name, exp), ...]), ...]`` in the given order."""
    if not items:
        return "0"
    out = []
    for idx, (c, factors) in enumerate(items):
        neg, body, atomic = field.split_sign(c)
        fstrs = [n if e == 1 else f"{n}^{e}" for n, e in factors]
        if body is None:
            core = "*".join(fstrs) or "1"
        else:
            if not atomic and (fstrs or len(items) > 1):
                body = f"({body})"
            core = "*".join([body, *fstrs])
        if idx == 0:
            out.append(f"-{core}" if neg else core)
        else:
            out.append(f" - {core}" if neg else f" + {core}")
    return "".join(out)


class PolyRing:
    """Polynomial ring over ``field`` in the ordered variable names."""

    def __init__(self, names, field, order="degrevlex"):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self.field = field
        self.order = order
        self.key = order_key(order)
        self.nvars = len(names)
        self._index = {n: i for i, n in enumerate(names)}

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.names == other.names
                and self.field == other.field and self.order == other.order)

    def __hash__(self):
        return hash((self.names, self.field, str(self.order)))

    def __repr__(self):
        return f"PolyRing({list(self.names)!r}, {self.field!r}, {self.order!r})"

    def index(self, name: str) -> int:
        return self._index[name]

    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.names, self.field, order)

    @property
    def zero(self):
        return MultiPoly(self, {})

    @property
    def one(self):
        return self.constant(1)

    def constant(self, c):
        c = self.field.convert(c)
        if self.field.is_zero(c):
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * self.nvars: c})

    def gen(self, name: str):
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return MultiPoly(self, {tuple(e): self.field.one})

    @property
    def gens(self):
        return [self.gen(n) for n in self.names]

    def from_dict(self, terms: dict):
        conv = self.field.convert
        d = {}
        for m, c in terms.items():
            c = conv(c)
            if c:
                d[tuple(m)] = c
        return MultiPoly(self, d)

    def __call__(self, value):
        if isinstance(value, MultiPoly):
            return value.convert(self)
        return self.constant(value)


class MultiPoly:
    """Immutable sparse polynomial: a map from exponent tuples to nonzero
    field coefficients."""

    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lm = None

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                if other.ring.names != self.ring.names or other.ring.field != self.ring.field:
                    raise IncompatibleRingError(
                        f"variables {self.ring.names} vs {other.ring.names}")
                return MultiPoly(self.ring, other.terms)
            return other
        return self.ring.constant(other)

    def convert(self, ring: PolyRing) -> "MultiPoly":
        """Re-express over ``ring``; every occurring variable must exist there."""
        if ring == self.ring:
            return self
        idx = []
        for i, n in enumerate(self.ring.names):
            idx.append(ring._index.get(n))
        d = {}
        for m, c in self.terms.items():
            e = [0] * ring.nvars
            for i, v in enumerate(m):
                if v:
                    if idx[i] is None:
                        raise IncompatibleRingError(
                            f"variable {self.ring.names[i]} not in {ring.names}")
                    e[idx[i]] = v
            d[tuple(e)] = ring.field.convert(c)
        return MultiPoly(ring, d)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        d = dict(self.terms)
        for m, c in o.terms.items():
            v = d.get(m)
            if v is None:
                d[m] = c
            else:
                v = v + c
                if v:
                    d[m] = v
                else:
                    del d[m]
        return MultiPoly(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = self.ring.field.convert(c)
        if not c:
            return self.ring.zero
        return MultiPoly(self.ring, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        o = self._coerce(other)
        if len(o.terms) == 1:
            (mo, co), = o.terms.items()
            return self.mul_term(mo, co)
        d = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = d.get(m)
                d[m] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly(self.ring, {m: c for m, c in d.items() if c})

    __rmul__ = __mul__

    def mul_term(self, mono, coeff):
        return MultiPoly(self.ring, {tuple(a + b for a, b in zip(m, mono)): c * coeff
                                     for m, c in self.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if not other.is_constant() or other.is_zero():
                raise ValueError("division only by nonzero constants")
            other = other.constant_coeff()
        return self.scale(self.ring.field.inv(other))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring.names == other.ring.names and self.terms == other.terms
        try:
            return self == self.ring.constant(other)
        except Exception:
            return NotImplemented

    def __hash__(self):
        return hash((self.ring.names, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0,) * self.ring.nvars}

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: self.ring.key(mc[0]), reverse=True)

    def LM(self):
        if self._lm is None:
            if not self.terms:
                raise ZeroPolynomialError("zero polynomial has no leading term")
            self._lm = max(self.terms, key=self.ring.key)
        return self._lm

    def LC(self):
        return self.terms[self.LM()]

    def monic(self):
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.LC()))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.ring.index(name)
        return max((m[i] for m in self.terms), default=-1)

    def variables(self):
        used = set()
        for m in self.terms:
            used.update(i for i, v in enumerate(m) if v)
        return [self.ring.names[i] for i in sorted(used)]

    def coefficients_in(self, name: str) -> list:
        """Dense coefficient list in ``name`` (low degree first); only valid
        when no other variable occurs."""
        i = self.ring.index(name)
        deg = max(self.degree(name), 0)
        out = [self.ring.field.zero] * (deg + 1)
        for m, c in self.terms.items():
            if any(v for j, v in enumerate(m) if j != i):
                raise ValueError(f"polynomial is not univariate in {name}")
            out[m[i]] = c
        return out

    # -- substitution / evaluation -----------------------------------------
    def substitute(self, name: str, value):
        """Replace a variable by a polynomial of the same ring or a scalar."""
        i = self.ring.index(name)
        if not isinstance(value, MultiPoly):
            value = self.ring.constant(value)
        value = self._coerce(value)
        powers = {}
        result = self.ring.zero
        for m, c in self.terms.items():
            e = m[i]
            rest = m[:i] + (0,) + m[i + 1:]
            if e not in powers:
                powers[e] = value ** e
            result = result + powers[e].mul_term(rest, c)
        return result

    def evaluate(self, values: dict):
        """Evaluate at ``{name: scalar}`` for every occurring variable."""
        field = self.ring.field
        vals = [values.get(n) for n in self.ring.names]
        total = field.zero
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    if vals[i] is None:
                        raise KeyError(self.ring.names[i])
                    t = t * field.convert(vals[i]) ** e
            total = total + t
        return total

    # -- printing -----------------------------------------------------------
    def render(self) -> str:
        items = [(c, [(self.ring.names[i], e) for i, e in enumerate(m) if e])
                 for m, c in self.sorted_terms()]
        return render_terms(items, self.ring.field)

    __str__ = render

    def __repr__(self):
        return f"MultiPoly({self.render()!r})"


# ---------------------------------------------------------------------------
# Gröbner bases


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mlcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _mquo(a, b):
    return tuple(x - y for x, y in zip(a, b))


def s_polynomial(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    field = f.ring.field
    L = _mlcm(f.LM(), g.LM())
    return (f.mul_term(_mquo(L, f.LM()), field.inv(f.LC()))
            - g.mul_term(_mquo(L, g.LM()), field.inv(g.LC())))


def _reduce(p: MultiPoly, G, full=True) -> MultiPoly:
    """Remainder of multivariate division of ``p`` by the list ``G``."""
    ring = p.ring
    key = ring.key
    field = ring.field
    p = dict(p.terms)
    rem = {}
    lms = [(g.LM(), field.inv(g.LC()), g) for g in G]
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, lcinv, g in lms:
            if _divides(lm, m):
                q = _mquo(m, lm)
                f = c * lcinv
                for gm, gc in g.terms.items():
                    mm = tuple(a + b for a, b in zip(gm, q))
                    v = p.get(mm)
                    v = -f * gc if v is None else v - f * gc
                    if v:
                        p[mm] = v
                    else:
                        p.pop(mm, None)
                break
        else:
            rem[m] = c
            del p[m]
            if not full:
                rem.update(p)
                break
    return MultiPoly(ring, rem)


def normal_form(p: MultiPoly, basis) -> MultiPoly:
    """Fully reduced remainder of ``p`` modulo ``basis`` (a Gröbner basis
    under ``p.ring``'s order)."""
    basis = [b.convert(p.ring) for b in basis if b]
    if not basis:
        return p
    return _reduce(p, basis)


def groebner_basis(gens, order=None) -> list:
    """Reduced Gröbner basis by Buchberger's algorithm with the coprime and
    chain criteria and the normal selection strategy."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = gens[0].ring
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
    gens = [g.convert(ring) for g in gens]
    key = ring.key

    G = []
    for g in gens:
        if g.is_constant():
            return [ring.one]
        g = g.monic()
        if g not in G:
            G.append(g)

    pairs = {(i, j) for j in range(len(G)) for i in range(j)}
    while pairs:
        i, j = min(pairs, key=lambda ij: (key(_mlcm(G[ij[0]].LM(), G[ij[1]].LM())), ij[1], ij[0]))
        pairs.discard((i, j))
        a, b = G[i].LM(), G[j].LM()
        L = _mlcm(a, b)
        if all(x == 0 or y == 0 for x, y in zip(a, b)):
            continue
        if _chain_criterion(i, j, L, G, pairs):
            continue
        h = _reduce(s_polynomial(G[i], G[j]), G)
        if h:
            if h.is_constant():
                return [ring.one]
            G.append(h.monic())
            k = len(G) - 1
            pairs.update((t, k) for t in range(k))

    return _interreduce(G)


def _chain_criterion(i, j, L, G, pairs) -> bool:
    for k in range(len(G)):
        if k in (i, j):
            continue
        if not _divides(G[k].LM(), L):
            continue
        if (min(i, k), max(i, k)) in pairs or (min(j, k), max(j, k)) in pairs:
            continue
        return True
    return False


def _interreduce(G) -> list:
    # Minimal basis: drop elements whose leading monomial is divisible by
    # another's (ties broken by position).
    minimal = []
    for idx, g in enumerate(G):
        lm = g.LM()
        redundant = False
        for jdx, h in enumerate(G):
            if jdx == idx:
                continue
            if _divides(h.LM(), lm) and (h.LM() != lm or jdx < idx):
                redundant = True
                break
        if not redundant:
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        lt = MultiPoly(g.ring, {g.LM(): g.LC()})
        tail = _reduce(g - lt, others) if others else g - lt
        reduced.append((lt + tail).monic())
    key = reduced[0].ring.key if reduced else None
    return sorted(reduced, key=lambda g: key(g.LM()), reverse=True)


def _has_common_zero_at_origin(gens) -> bool:
    return all(g.is_zero() or g.constant_coeff() == 0 for g in gens)


def contains_one(gens) -> bool:
    """Whether the ideal generated by ``gens`` is the unit ideal."""
    gens = [g for g in gens if g]
    if not gens:
        return False
    # A shared root certifies a proper ideal without running Buchberger.
    if _has_common_zero_at_origin(gens):
        return False
    basis = groebner_basis(gens)
    return len(basis) == 1 and basis[0].is_constant()


# ---------------------------------------------------------------------------
# integer roots


def _ustrip(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _urem(a, b):
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for k in range(db + 1):
            a[shift + k] -= f * b[k]
        _ustrip(a)
    return a


def _ugcd(a, b):
    a, b = _ustrip(list(a)), _ustrip(list(b))
    while b:
        a, b = b, _urem(a, b)
    return a


def _ueval(p, x):
    v = 0
    for c in reversed(p):
        v = v * x + c
    return v


def integer_roots(p: MultiPoly, var: str | None = None) -> list:
    """All integer roots of a univariate polynomial, ascending.

    Over Q(i) or a parameter field a root must annihilate every rational
    component of the coefficients (generic semantics for parameters).
    """
    if var is None:
        used = p.variables()
        if len(used) > 1:
            raise ValueError(f"polynomial is not univariate: {used}")
        var = used[0] if used else p.ring.names[0]
    if p.is_zero():
        raise ZeroPolynomialError("every integer is a root of the zero polynomial")
    coeffs = p.coefficients_in(var)
    comps = [c for c in p.ring.field.q_components(coeffs) if any(c)]
    g = comps[0]
    for c in comps[1:]:
        g = _ugcd(g, c)
    g = _ustrip([Fraction(v) for v in g])
    if len(g) <= 1:
        return []
    den = lcm(*(v.denominator for v in g))
    ints = [int(v * den) for v in g]
    roots = set()
    low = 0
    while ints[low] == 0:
        low += 1
    if low:
        roots.add(0)
    ints = ints[low:]
    if len(ints) > 1:
        for d in divisors(abs(ints[0])):
            for cand in (d, -d):
                if _ueval(ints, cand) == 0:
                    roots.add(cand)
    return sorted(roots)


# ---------------------------------------------------------------------------
# roots and points over the base field


def field_roots(p: MultiPoly, var: str):
    """Distinct roots in the coefficient field of a univariate polynomial.

    Returns None when the field is not supported (parameter fields), so the
    caller can fall back to reasoning over the algebraic closure.
    """
    import sympy

    from .arith import GaussianField, GaussianRational, RationalField

    field = p.ring.field
    if isinstance(field, RationalField):
        domain = sympy.QQ
        to_sym = lambda a: sympy.Rational(a.numerator, a.denominator)  # noqa: E731
    elif isinstance(field, GaussianField):
        domain = sympy.QQ_I
        to_sym = lambda a: (sympy.Rational(a.real.numerator, a.real.denominator)  # noqa: E731
                            + sympy.I * sympy.Rational(a.imag.numerator, a.imag.denominator))
    else:
        return None
    t = sympy.Symbol("t")
    coeffs = p.coefficients_in(var)
    expr = sum(to_sym(field.convert(c)) * t**k for k, c in enumerate(coeffs))
    _, factors = sympy.Poly(expr, t, domain=domain).factor_list()
    out = []
    for f, _mult in factors:
        if f.degree() != 1:
            continue
        a, b = f.all_coeffs()
        re_, im_ = sympy.expand(-b / a).as_real_imag()
        re_q, im_q = Fraction(int(re_.p), int(re_.q)), Fraction(int(im_.p), int(im_.q))
        out.append(re_q if isinstance(field, RationalField) else GaussianRational(re_q, im_q))
    return out


def _univariate_in(gens, var):
    """A nonzero element of the elimination ideal of ``gens`` in ``var`` alone,
    or None if that elimination ideal is zero."""
    ring = gens[0].ring
    names = [n for n in ring.names if n != var] + [var]
    lex = PolyRing(names, ring.field, "lex")
    basis = groebner_basis([g.convert(lex) for g in gens])
    for g in basis:
        if set(g.variables()) <= {var}:
            return g.convert(ring)
    return None


def no_field_points(gens) -> bool:
    """Sufficient test that the ideal has no zero with coordinates in the
    coefficient field.

    The unit ideal has no zeros at all.  Otherwise, whenever some variable
    satisfies a univariate relation, branch on its roots in the field and
    recurse; if no branch survives there are no field points.  A False answer
    means "not refuted", not that a field point was found.
    """
    gens = [g for g in gens if g]
    if not gens:
        return False
    if contains_one(gens):
        return True
    ring = gens[0].ring
    for var in ring.names:
        if not any(var in g.variables() for g in gens):
            continue
        u = _univariate_in(gens, var)
        if u is None:
            continue
        roots = field_roots(u, var)
        if roots is None:
            return False
        for a in roots:
            sub = [g.substitute(var, a) for g in gens]
            if not no_field_points(sub):
                return False
        return True
    return False
