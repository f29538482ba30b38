"""Formal power series solutions from an initial tuple.

Coefficients follow the convention y(x) = sum c_j x^j / j!, so ``c_j`` is
the value of y^(j) at the origin.  Entries of an initial tuple are field
elements; ``None`` marks an unknown entry and a string marks a named unknown
whose forced value is reported back in ``conditions``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from math import factorial

from .diffpoly import DiffPoly, eval_origin_jet, gen_separant, remainder, separant, separant_matrix
from .errors import (
    InvariantError,
    NoOrderError,
    NotOnVarietyError,
    PreconditionError,
    SeparantVanishesError,
)
from .jets import (
    evaluate_with_unknowns,
    jet_ideal,
    minimal_local_order,
    require_local_vanishing,
    separant_ideal,
)
from .poly import (
    MultiPoly,
    PolyRing,
    contains_one,
    groebner_basis,
    integer_roots,
    no_field_points,
    normal_form,
)

log = logging.getLogger(__name__)

__all__ = [
    "SolutionDescription",
    "VanishingOrderReport",
    "ift_extend",
    "direct_method_local",
    "global_vanishing_order",
    "quasilinear_bound",
    "extend_global",
    "solve",
    "verify_truncation",
    "DEFAULT_BOUND",
    "constraint_ring",
    "local_vanishing_order",
]

DEFAULT_BOUND = 10


@dataclass
class SolutionDescription:
    field: object
    n: int
    ell: int
    status: str  # 'empty' | 'unique' | 'parametrized'
    ring: PolyRing
    coefficients: list | None
    free_vars: list
    constraints: list
    dimension_bound: int
    provenance: dict
    conditions: dict = dc_field(default_factory=dict)
    message: str = ""

    def series_coefficient(self, j: int) -> MultiPoly:
        """Plain coefficient of x^j, i.e. c_j / j!."""
        return self.coefficients[j] / factorial(j)

    def is_empty(self) -> bool:
        return self.status == "empty"


@dataclass(frozen=True)
class VanishingOrderReport:
    kind: str  # 'local' | 'global'
    order: int | None
    bound: int
    cap: int | None = None
    witness: int | None = None

    @property
    def found(self) -> bool:
        return self.order is not None

    def describe(self) -> str:
        if self.found:
            return str(self.order)
        return f"not-found-up-to({self.bound})"


def _require_order(F: DiffPoly) -> int:
    n = F.order()
    if n is None:
        raise NoOrderError(f"{F.render()} does not involve y")
    return n


def _depends_on_params(p: MultiPoly) -> bool:
    return any(getattr(v, "constant_value", lambda: 0)() is None for v in p.terms.values())


def _status(coeffs) -> str:
    # Coefficients are reduced modulo the constraint basis, so any surviving
    # indeterminate is a genuine degree of freedom; so is a declared parameter.
    if any(p.variables() or _depends_on_params(p) for p in coeffs):
        return "parametrized"
    return "unique"


# ---------------------------------------------------------------------------
# classical recursion


def ift_extend(F: DiffPoly, c, ell: int) -> SolutionDescription:
    """Extend c = (c_0..c_n) with S_F(c) != 0 by
    c_{n+k} = -R_k(c_0..c_{n+k-1}) / S_F(c), where F^(k) = S_F y^(n+k) + R_k."""
    n = _require_order(F)
    field = F.field
    if len(c) != n + 1:
        raise PreconditionError(f"initial tuple must have length {n + 1}")
    c = [field.convert(v) for v in c]
    if not field.is_zero(eval_origin_jet(F, c)):
        raise NotOnVarietyError("F does not vanish at the initial tuple")
    SF = separant(F)
    s = eval_origin_jet(SF, c)
    if field.is_zero(s):
        raise SeparantVanishesError(
            "separant vanishes at the initial tuple; use direct_method_local")
    s_inv = field.inv(s)
    coeffs = list(c)
    for k in range(1, ell - n + 1):
        R = F.diff(k) - SF * DiffPoly.y(field, n + k)
        coeffs.append(-eval_origin_jet(R, coeffs) * s_inv)
    ring = PolyRing((), field)
    cc = [ring.constant(v) for v in coeffs[:max(ell, n) + 1]]
    return SolutionDescription(
        field=field, n=n, ell=len(cc) - 1, status="unique", ring=ring, coefficients=cc,
        free_vars=[], constraints=[], dimension_bound=0,
        provenance={"m": 0, "i": 0, "r": 0, "q": 0, "M": 0, "method": "ift"})


# ---------------------------------------------------------------------------
# generalized-separant recursion


def _sep_poly_with_unknowns(F, i, prefix):
    """S_{F,t,i} at a prefix that may contain unknown (None) entries."""
    n = F.order()
    field = F.field
    ring = PolyRing(("t",), field)
    d = {}
    for p, coeff in enumerate(gen_separant(F, i).coeffs):
        v = evaluate_with_unknowns(coeff, prefix, n + i)
        if isinstance(v, MultiPoly):
            raise PreconditionError(
                f"S_F,t,{i} depends on unknown entries {v.variables()}; supply more of the tuple")
        if not field.is_zero(v):
            d[(p,)] = v
    return MultiPoly(ring, d)


def _scan_local_order(F, c, limit):
    """Smallest i <= limit at which the separant matrix is nonzero at c,
    allowing unknown entries as long as the answer does not depend on them."""
    n = F.order()
    field = F.field
    for i in range(limit + 1):
        col = []
        for j, row in enumerate(separant_matrix(F, i)):
            col.append(evaluate_with_unknowns(row[i], c, n + i))
        if all(not isinstance(v, MultiPoly) and field.is_zero(v) for v in col):
            continue
        if any(isinstance(v, MultiPoly) for v in col):
            raise PreconditionError(
                f"whether S_F,{i} vanishes depends on unknown tuple entries")
        return i
    return None


def constraint_ring(names, field) -> PolyRing:
    """Ring of the free indeterminates ``c~j``.  Lex with later indices
    largest, so determined coefficients are rewritten in terms of earlier
    free ones."""
    return PolyRing(sorted(names, key=lambda v: -int(v[2:])), field, "lex")


def _local_core(F, prefix, i, horizon_k, ell, trailing, provenance):
    """Generalized-separant recursion at local vanishing order ``i``.

    ``prefix`` has length n+i+1 (None entries are free indeterminates constrained
    by J_{2i}); ``trailing`` maps indices beyond the prefix to required values
    (field elements become constraints, strings are named unknowns).
    """
    n = F.order()
    field = F.field
    sep = _sep_poly_with_unknowns(F, i, prefix)
    if sep.is_zero():
        raise PreconditionError(f"F does not have vanishing order {i} at the tuple")
    roots = integer_roots(sep, "t")
    big = [k for k in roots if k > 2 * i]
    r = len(big)
    q = max(big) if big else 2 * i

    unknown_prefix = [j for j, v in enumerate(prefix) if v is None]
    free_names = [f"c~{j}" for j in unknown_prefix] + [f"c~{n + k - i}" for k in big]
    ring = constraint_ring(free_names, field)

    cc = []
    for j, v in enumerate(prefix):
        cc.append(ring.gen(f"c~{j}") if v is None else ring.constant(v))

    constraints = []
    # Jet conditions up to 2i; only c_0..c_{n+i} may occur.
    hi = [f"h~{j}" for j in range(n + i + 1, n + 2 * i + 1)]
    ext = PolyRing(free_names + hi, field)
    ext_vals = [v.convert(ext) for v in cc] + [ext.gen(h) for h in hi]
    for k in range(2 * i + 1):
        v = eval_origin_jet(F.diff(k), ext_vals[:n + k + 1])
        used = [name for name in v.variables() if name.startswith("h~")]
        if used:
            raise InvariantError(f"F^({k}) at the tuple still depends on {used}")
        v = v.convert(ring)
        if v:
            constraints.append(v)

    last_trailing = max(trailing, default=n + i)
    k_a = max(q, horizon_k, last_trailing - n + i)
    k_end = max(k_a, ell - n + i)

    def step(k, reduce_basis=None):
        j = n + k - i
        s = sep.evaluate({"t": k})
        rv = eval_origin_jet(remainder(F, k, i), cc[:j])
        if field.is_zero(s):
            if k not in big:
                raise InvariantError(f"S_F,{k},{i} vanishes outside the integer roots")
            cc.append(ring.gen(f"c~{j}"))
            constraints.append(rv)
        else:
            val = -rv / s
            if reduce_basis:
                val = normal_form(val, reduce_basis)
            cc.append(val)

    for k in range(2 * i + 1, k_a + 1):
        step(k)

    conditions = {}
    for idx, want in sorted(trailing.items()):
        if isinstance(want, str):
            continue
        constraints.append(cc[idx] - ring.constant(want))

    basis = groebner_basis(constraints) if constraints else []
    dim = r + len(unknown_prefix)
    prov = dict(provenance, i=i, r=r, q=q, M=max(horizon_k, q), roots=roots)
    if basis and (basis[0].is_constant() or no_field_points(basis)):
        return SolutionDescription(
            field=field, n=n, ell=ell, status="empty", ring=ring, coefficients=None,
            free_vars=free_names, constraints=[ring.one], dimension_bound=dim,
            provenance=prov,
            message="the initial tuple cannot be extended to a formal power series solution")

    if basis:
        cc[:] = [normal_form(v, basis) for v in cc]
    for k in range(k_a + 1, k_end + 1):
        step(k, basis)

    for idx, want in sorted(trailing.items()):
        if isinstance(want, str):
            conditions[want] = cc[idx]

    out_len = max(ell, n + k_a - i)
    coeffs = cc[:out_len + 1]
    return SolutionDescription(
        field=field, n=n, ell=out_len, status=_status(coeffs), ring=ring,
        coefficients=coeffs, free_vars=free_names, constraints=basis,
        dimension_bound=dim, provenance=prov, conditions=conditions)


def direct_method_local(F: DiffPoly, c, ell: int) -> SolutionDescription:
    """All solutions extending c = (c_0..c_{n+m}) where F has local vanishing
    order m = len(c) - n - 1, truncated at order ``ell``."""
    n = _require_order(F)
    field = F.field
    c = [field.convert(v) for v in c]
    m = require_local_vanishing(F, c)
    return _local_core(F, c, m, 2 * m, ell, {}, {"m": m, "method": "local"})


def _split_tuple(c, upto, field):
    prefix = []
    for v in c[:upto + 1]:
        if v is None or isinstance(v, str):
            prefix.append(None)
        else:
            prefix.append(field.convert(v))
    prefix.extend([None] * (upto + 1 - len(prefix)))
    # Named unknowns are reported back as conditions wherever they sit.
    trailing = {j: v for j, v in enumerate(c[:upto + 1]) if isinstance(v, str)}
    for j in range(upto + 1, len(c)):
        v = c[j]
        if v is None:
            continue
        trailing[j] = v if isinstance(v, str) else field.convert(v)
    return prefix, trailing


def extend_global(F: DiffPoly, m: int, c, ell: int) -> SolutionDescription:
    """Extension of c in V(J_{2m}) when F has global vanishing order m: find the
    local order i at the prefix and run the recursion with horizon
    M = max(2m + i, q)."""
    n = _require_order(F)
    field = F.field
    concrete = []
    for v in c:
        if v is None or isinstance(v, str):
            break
        concrete.append(field.convert(v))
    try:
        i = minimal_local_order(F, m, concrete)
    except Exception as exc:
        if isinstance(exc, InvariantError):
            raise PreconditionError(str(exc)) from exc
        raise
    prefix, trailing = _split_tuple(c, n + i, field)
    return _local_core(F, prefix, i, 2 * m + i, ell, trailing, {"m": m, "method": "global"})


# ---------------------------------------------------------------------------
# global vanishing order


def quasilinear_bound(F: DiffPoly):
    """min over j of deg_x(A) + n - j where dF/dy^(j) = A(x) is free of y;
    None when no such j exists."""
    n = _require_order(F)
    best = None
    for j in range(n + 1):
        A = F.partial(j)
        if A and A.is_x_only():
            b = A.deg_x() + n - j
            best = b if best is None else min(best, b)
    return best


def global_vanishing_order(F: DiffPoly, bound: int = DEFAULT_BOUND) -> VanishingOrderReport:
    """Smallest m <= bound with 1 in I_m(F) + J_{2m}(F)."""
    _require_order(F)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    cap = quasilinear_bound(F)
    limit = cap if cap is not None else bound
    for m in range(limit + 1):
        J = jet_ideal(F, 2 * m)
        I = [g.convert(J.ring) for g in separant_ideal(F, m)]
        if contains_one(I + list(J.gens)):
            return VanishingOrderReport("global", m, limit, cap, m)
    if cap is not None:
        raise InvariantError(f"no vanishing order found below the quasilinear cap {cap}")
    return VanishingOrderReport("global", None, bound, None, None)


def local_vanishing_order(F: DiffPoly, c, bound: int = DEFAULT_BOUND) -> VanishingOrderReport:
    """Local order at a concrete tuple: the smallest i whose separant matrix is
    nonzero at c, provided c_0..c_{n+i} lies on V(J_{2i})."""
    from .jets import check_local_vanishing

    n = _require_order(F)
    i = _scan_local_order(F, list(c), min(bound, max(len(c) - n - 1, 0)))
    if i is not None and check_local_vanishing(F, list(c[:n + i + 1])):
        return VanishingOrderReport("local", i, bound)
    return VanishingOrderReport("local", None, bound)


# ---------------------------------------------------------------------------
# routing


def _jets_refute(F, c, level):
    """Smallest k <= level such that J_k, with the known entries of ``c``
    substituted, has no zero over the coefficient field; None if there is none."""
    n = F.order()
    field = F.field
    top = max(n + level, len(c) - 1)
    names = [f"c_{j}" for j in range(top + 1)
             if j >= len(c) or c[j] is None or isinstance(c[j], str)]
    ring = PolyRing(names, field)
    vals = []
    for j in range(top + 1):
        v = c[j] if j < len(c) else None
        vals.append(ring.gen(f"c_{j}") if v is None or isinstance(v, str)
                    else ring.constant(field.convert(v)))
    gens = []
    # Low levels are cheap and often already decisive.
    for k in range(level + 1):
        gens.append(eval_origin_jet(F.diff(k), vals[:n + k + 1]))
        if no_field_points(gens):
            return k
    return None


def _empty(F, ell, provenance):
    ring = PolyRing((), F.field)
    return SolutionDescription(
        field=F.field, n=F.order(), ell=ell, status="empty", ring=ring, coefficients=None,
        free_vars=[], constraints=[ring.one], dimension_bound=0, provenance=provenance,
        message="the initial tuple cannot be extended to a formal power series solution")


def solve(F: DiffPoly, c, ell: int, bound: int | None = None) -> SolutionDescription:
    """Route an initial tuple to the appropriate procedure.

    * length n+1 with nonvanishing separant: classical recursion;
    * concrete tuple of length n+m+1 at which F has local order m: local method;
    * otherwise the global procedure, with unknown entries allowed where the
      local order does not depend on them.
    """
    n = _require_order(F)
    field = F.field
    c = [None if isinstance(v, str) and v == "" else v for v in c]
    concrete = all(v is not None and not isinstance(v, str) for v in c)
    if concrete:
        cv = [field.convert(v) for v in c]
        if (len(cv) == n + 1 and field.is_zero(eval_origin_jet(F, cv))
                and not field.is_zero(eval_origin_jet(separant(F), cv))):
            return ift_extend(F, cv, ell)
        if len(cv) >= n + 1:
            from .jets import check_local_vanishing

            if check_local_vanishing(F, cv):
                return direct_method_local(F, cv, ell)

    report = None
    cap = quasilinear_bound(F)
    if cap is not None or bound is not None:
        report = global_vanishing_order(F, bound if bound is not None else DEFAULT_BOUND)
    limit = report.order if report is not None and report.found else (
        bound if bound is not None else DEFAULT_BOUND)
    try:
        i = _scan_local_order(F, [None if isinstance(v, str) else v for v in c], limit)
    except PreconditionError:
        level = 2 * report.order if report is not None and report.found else 2 * limit
        k = _jets_refute(F, list(c), level)
        if k is not None:
            m = report.order if report is not None and report.found else None
            return _empty(F, ell, {"m": m, "method": "jets", "level": k})
        raise
    if i is None:
        raise PreconditionError(
            f"separant matrices vanish at the tuple up to order {limit}; no local order found")
    prefix, trailing = _split_tuple(list(c), n + i, field)
    if report is not None and report.found:
        m = report.order
        return _local_core(F, prefix, i, 2 * m + i, ell, trailing, {"m": m, "method": "global"})
    return _local_core(F, prefix, i, 2 * i, ell, trailing, {"m": i, "method": "local"})


# ---------------------------------------------------------------------------
# verification by substitution


def _series_mul(a, b, N, zero):
    out = [zero] * (N + 1)
    for p, u in enumerate(a):
        if not u:
            continue
        for q in range(N + 1 - p):
            v = b[q]
            if v:
                out[p + q] = out[p + q] + u * v
    return out


def verify_truncation(F: DiffPoly, s: SolutionDescription) -> bool:
    """Substitute the truncated series into F and check F(y~) = 0 mod x^(l-n+1),
    reducing modulo the constraint basis."""
    if s.is_empty() or s.coefficients is None:
        raise PreconditionError("cannot verify an empty solution description")
    n = _require_order(F)
    ring = s.ring
    N = s.ell - n
    if N < 0:
        return True
    zero = ring.zero
    cc = s.coefficients
    # y^(j) = sum_p c_{p+j} x^p / p!
    derivs = {}

    def yseries(j):
        if j not in derivs:
            derivs[j] = [cc[p + j] / factorial(p) if p + j < len(cc) else zero
                         for p in range(N + 1)]
        return derivs[j]

    total = [zero] * (N + 1)
    for (a, ys), coeff in F.terms.items():
        if a > N:
            continue
        term = [zero] * (N + 1)
        term[a] = ring.constant(coeff)
        for j, e in ys:
            if j > n:
                return False
            for _ in range(e):
                term = _series_mul(term, yseries(j), N, zero)
        total = [u + v for u, v in zip(total, term)]
    basis = s.constraints
    for v in total:
        if basis:
            v = normal_form(v, basis)
        if v:
            return False
    return True
