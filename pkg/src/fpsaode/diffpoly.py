"""Differential polynomials in K[x]{y}: derivatives, (generalized)
separants, separant matrices and the expansion remainder."""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .errors import HypothesisError, InvariantError, JetLengthError, NoOrderError
from .poly import MultiPoly, PolyRing, render_terms

__all__ = [
    "DiffPoly",
    "GenSeparant",
    "order",
    "total_derivative",
    "partial",
    "separant",
    "gen_separant",
    "separant_matrix",
    "remainder",
    "matrix_form_check",
    "eval_origin_jet",
    "binomial_poly",
]


def _yname(j: int) -> str:
    if j == 0:
        return "y"
    if j <= 2:
        return "y" + "'" * j
    return f"y^({j})"


def _ymul(a: tuple, b: tuple) -> tuple:
    """Multiply two sparse y-monomials ``((j, e), ...)``."""
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for j, e in b:
        d[j] = d.get(j, 0) + e
    return tuple(sorted(d.items()))


class DiffPoly:
    """A polynomial in x and y, y', y'', ... with coefficients in ``field``.

    Terms are stored as ``{(xdeg, ((j, e), ...)): coeff}`` where the inner
    tuple lists the derivative indices ``j`` with positive exponents ``e`` in
    increasing order of ``j``.  Values are immutable; total derivatives are
    memoized on the instance.
    """

    __slots__ = ("field", "terms", "_order", "_derivs", "__weakref__")

    def __init__(self, field, terms: dict):
        self.field = field
        self.terms = terms
        self._order = -2
        self._derivs = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, field, c):
        c = field.convert(c)
        return cls(field, {(0, ()): c} if c else {})

    @classmethod
    def x(cls, field, power: int = 1):
        return cls(field, {(power, ()): field.one})

    @classmethod
    def y(cls, field, j: int = 0, power: int = 1):
        if power == 0:
            return cls.constant(field, 1)
        return cls(field, {(0, ((j, power),)): field.one})

    @classmethod
    def zero(cls, field):
        return cls(field, {})

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, DiffPoly):
            return other
        return DiffPoly.constant(self.field, other)

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
        return DiffPoly(self.field, d)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly(self.field, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = self.field.convert(c)
        if not c:
            return DiffPoly(self.field, {})
        return DiffPoly(self.field, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, DiffPoly):
            return self.scale(other)
        d = {}
        for (a1, y1), c1 in self.terms.items():
            for (a2, y2), c2 in other.terms.items():
                m = (a1 + a2, _ymul(y1, y2))
                v = d.get(m)
                d[m] = c1 * c2 if v is None else v + c1 * c2
        return DiffPoly(self.field, {m: c for m, c in d.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = DiffPoly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, DiffPoly):
            return self.terms == other.terms
        if isinstance(other, int):
            return self == DiffPoly.constant(self.field, other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self):
        """The field value if this is a constant, else None."""
        if not self.terms:
            return self.field.zero
        if set(self.terms) == {(0, ())}:
            return self.terms[(0, ())]
        return None

    # -- structure ----------------------------------------------------------
    def order(self):
        """Largest derivative index present, or None for y-free input."""
        if self._order == -2:
            o = -1
            for _, ys in self.terms:
                if ys:
                    o = max(o, ys[-1][0])
            self._order = None if o < 0 else o
        return self._order

    def deg_x(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    def is_x_only(self) -> bool:
        return all(not ys for _, ys in self.terms)

    def derivative(self) -> "DiffPoly":
        """One application of D = d/dx + sum_j y_(j+1) d/dy_j."""
        d = {}

        def put(m, c):
            v = d.get(m)
            v = c if v is None else v + c
            if v:
                d[m] = v
            else:
                d.pop(m, None)

        for (a, ys), c in self.terms.items():
            if a:
                put((a - 1, ys), c * a)
            for idx, (j, e) in enumerate(ys):
                rest = list(ys)
                if e == 1:
                    del rest[idx]
                else:
                    rest[idx] = (j, e - 1)
                put((a, _ymul(tuple(rest), ((j + 1, 1),))), c * e)
        return DiffPoly(self.field, d)

    def diff(self, k: int = 1) -> "DiffPoly":
        """k-th total derivative, memoized per instance."""
        if k < 0:
            raise ValueError("k must be nonnegative")
        if self._derivs is None:
            self._derivs = [self]
        ds = self._derivs
        while len(ds) <= k:
            ds.append(ds[-1].derivative())
        return ds[k]

    def partial(self, j: int) -> "DiffPoly":
        if j < 0:
            return DiffPoly(self.field, {})
        d = {}
        for (a, ys), c in self.terms.items():
            for idx, (jj, e) in enumerate(ys):
                if jj != j:
                    continue
                rest = list(ys)
                if e == 1:
                    del rest[idx]
                else:
                    rest[idx] = (j, e - 1)
                d[(a, tuple(rest))] = c * e
        return DiffPoly(self.field, d)

    def partial_x(self) -> "DiffPoly":
        return DiffPoly(self.field, {(a - 1, ys): c * a
                                     for (a, ys), c in self.terms.items() if a})

    # -- printing -----------------------------------------------------------
    def _exponent_vector(self, m, top):
        a, ys = m
        v = [a] + [0] * (top + 1)
        for j, e in ys:
            v[1 + j] = e
        return tuple(v)

    def sorted_terms(self, extra=None):
        top = max(self.order() or 0, 0)
        from .poly import order_key

        key = order_key("degrevlex")
        return sorted(self.terms.items(),
                      key=lambda mc: key(self._exponent_vector(mc[0], top)), reverse=True)

    @staticmethod
    def _factors(m):
        a, ys = m
        out = [("x", a)] if a else []
        out.extend((_yname(j), e) for j, e in ys)
        return out

    def render(self) -> str:
        return render_terms([(c, self._factors(m)) for m, c in self.sorted_terms()], self.field)

    __str__ = render

    def __repr__(self):
        return f"DiffPoly({self.render()!r})"


# ---------------------------------------------------------------------------
# operations


def order(F: DiffPoly):
    return F.order()


def _require_order(F: DiffPoly) -> int:
    n = F.order()
    if n is None:
        raise NoOrderError(f"{F.render()} does not involve y")
    return n


def total_derivative(F: DiffPoly, k: int = 1) -> DiffPoly:
    return F.diff(k)


def partial(F: DiffPoly, j: int) -> DiffPoly:
    """Formal partial derivative by y^(j); zero outside 0..order(F)."""
    n = F.order()
    if n is None or j < 0 or j > n:
        return DiffPoly.zero(F.field)
    return F.partial(j)


def separant(F: DiffPoly) -> DiffPoly:
    return F.partial(_require_order(F))


def binomial_poly(j: int) -> list:
    """Coefficients (low degree first) of binom(t, j) = t(t-1)...(t-j+1)/j!."""
    coeffs = [Fraction(1)]
    for r in range(j):
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for p, c in enumerate(coeffs):
            nxt[p + 1] += c
            nxt[p] -= r * c
        coeffs = nxt
    f = factorial(j)
    return [c / f for c in coeffs]


class GenSeparant:
    """S_{F,t,i} as a polynomial in ``t`` with DiffPoly coefficients."""

    def __init__(self, F: DiffPoly, i: int, coeffs: list):
        self.F = F
        self.i = i
        self.n = F.order()
        self.coeffs = coeffs  # coeffs[p] multiplies t^p

    @property
    def field(self):
        return self.F.field

    def degree(self) -> int:
        d = -1
        for p, c in enumerate(self.coeffs):
            if c:
                d = p
        return d

    def at(self, k: int) -> DiffPoly:
        total = DiffPoly.zero(self.field)
        for p, c in enumerate(self.coeffs):
            if c:
                total = total + c.scale(Fraction(k) ** p)
        return total

    def eval_jet(self, c) -> MultiPoly:
        """S_{F,t,i}(c) as a MultiPoly in ``t``; every entry of ``c`` used must be
        a field element."""
        ring = PolyRing(("t",), self.field)
        d = {}
        for p, coeff in enumerate(self.coeffs):
            v = eval_origin_jet(coeff, c)
            if isinstance(v, MultiPoly):
                raise TypeError("eval_jet needs concrete jet values")
            if not self.field.is_zero(v):
                d[(p,)] = v
        return MultiPoly(ring, d)

    def render(self) -> str:
        items = []
        for p, c in enumerate(self.coeffs):
            top = max(c.order() or 0, 0)
            for m, v in c.terms.items():
                vec = c._exponent_vector(m, top)
                items.append((vec, p, v, DiffPoly._factors(m) + ([("t", p)] if p else [])))
        width = max((len(v) for v, *_ in items), default=0)
        from .poly import order_key

        key = order_key("degrevlex")
        items.sort(key=lambda it: key(tuple(it[0]) + (0,) * (width - len(it[0])) + (it[1],)),
                   reverse=True)
        return render_terms([(v, f) for _, _, v, f in items], self.field)

    __str__ = render


def gen_separant(F: DiffPoly, i: int, k=None):
    """Generalized separant S_{F,k,i}.

    With ``k`` an integer returns the DiffPoly; with ``k`` None (or ``"t"``)
    returns the :class:`GenSeparant` polynomial in the symbol t.
    """
    n = _require_order(F)
    if i < 0:
        raise ValueError("i must be nonnegative")
    if isinstance(k, int):
        total = DiffPoly.zero(F.field)
        for j in range(i + 1):
            f = partial(F, n - i + j)
            if f:
                total = total + f.diff(j).scale(comb(k, j))
        return total
    coeffs = [DiffPoly.zero(F.field) for _ in range(i + 1)]
    for j in range(i + 1):
        f = partial(F, n - i + j)
        if not f:
            continue
        fj = f.diff(j)
        for p, b in enumerate(binomial_poly(j)):
            if b:
                coeffs[p] = coeffs[p] + fj.scale(b)
    return GenSeparant(F, i, coeffs)


def separant_matrix(F: DiffPoly, m: int) -> list:
    """The upper-triangular (m+1)x(m+1) matrix with entry (j, l) equal to
    f_{n-l+j}^{(j)} for l >= j."""
    n = _require_order(F)
    if m < 0:
        raise ValueError("m must be nonnegative")
    zero = DiffPoly.zero(F.field)
    rows = []
    for j in range(m + 1):
        row = []
        for col in range(m + 1):
            if col < j:
                row.append(zero)
            else:
                row.append(partial(F, n - col + j).diff(j))
        rows.append(row)
    return rows


def remainder(F: DiffPoly, k: int, m: int) -> DiffPoly:
    """r_{n+k-m-1} = F^(k) - sum_{i<=m} S_{F,k,i} y^(n+k-i), for k > 2m."""
    n = _require_order(F)
    if k <= 2 * m:
        raise HypothesisError(f"expansion needs k > 2m, got k={k}, m={m}")
    r = F.diff(k)
    for i in range(m + 1):
        r = r - gen_separant(F, i, k) * DiffPoly.y(F.field, n + k - i)
    o = r.order()
    if o is not None and o > n + k - m - 1:
        raise InvariantError(
            f"remainder has order {o} > {n + k - m - 1} for F={F.render()}, k={k}, m={m}")
    return r


def matrix_form_check(F: DiffPoly, k: int, m: int) -> bool:
    """Check F^(k) = B_m(k) . S_{F,m} . Y + r against the sum form."""
    n = _require_order(F)
    if k <= 2 * m:
        raise HypothesisError(f"expansion needs k > 2m, got k={k}, m={m}")
    S = separant_matrix(F, m)
    B = [comb(k, j) for j in range(m + 1)]
    Y = [DiffPoly.y(F.field, n + k - l) for l in range(m + 1)]
    zero = DiffPoly.zero(F.field)
    row = []
    for col in range(m + 1):
        acc = zero
        for j in range(m + 1):
            if S[j][col]:
                acc = acc + S[j][col].scale(B[j])
        row.append(acc)
    for col in range(m + 1):
        if row[col] != gen_separant(F, col, k):
            return False
    product = zero
    for col in range(m + 1):
        product = product + row[col] * Y[col]
    return product + remainder(F, k, m) == F.diff(k)


def eval_origin_jet(G: DiffPoly, c):
    """Substitute x = 0 and y^(j) = c[j].

    Entries of ``c`` may be field elements or MultiPoly values (indeterminates);
    the result is a field element when no MultiPoly is involved.
    """
    field = G.field
    ring = None
    for v in c:
        if isinstance(v, MultiPoly):
            ring = v.ring
            break
    total = ring.zero if ring is not None else field.zero
    powers = {}
    L = len(c)
    for (a, ys), coeff in G.terms.items():
        if a:
            continue
        t = coeff if ring is None else ring.constant(coeff)
        for j, e in ys:
            if j >= L or c[j] is None:
                raise JetLengthError(
                    f"jet of length {L} does not supply y^({j}) needed by {G.render()}")
            key = (j, e)
            p = powers.get(key)
            if p is None:
                p = powers[key] = c[j] ** e
            t = t * p
            if ring is None and not t:
                break
        total = total + t
    return total
