"""Jet ideals, separant ideals, local vanishing order and the r/q report."""

from __future__ import annotations

from dataclasses import dataclass

from .diffpoly import DiffPoly, eval_origin_jet, gen_separant, separant_matrix
from .errors import InvariantError, JetLengthError, PreconditionError, ZeroPolynomialError
from .poly import MultiPoly, PolyRing, integer_roots

__all__ = [
    "JetIdeal",
    "RQReport",
    "jet_names",
    "jet_ring",
    "jet_ideal",
    "in_jet_variety",
    "separant_ideal",
    "check_local_vanishing",
    "minimal_local_order",
    "rq_values",
    "evaluate_with_unknowns",
]


def jet_names(N: int) -> list:
    return [f"c_{j}" for j in range(N + 1)]


def jet_ring(F: DiffPoly, m: int) -> PolyRing:
    """K[c_0, ..., c_{n+m}]."""
    n = F.order()
    if n is None:
        from .errors import NoOrderError

        raise NoOrderError(f"{F.render()} does not involve y")
    return PolyRing(jet_names(n + m), F.field)


@dataclass(frozen=True)
class JetIdeal:
    F: DiffPoly
    m: int
    ring: PolyRing
    gens: tuple

    def render(self) -> list:
        return [g.render() for g in self.gens]


@dataclass(frozen=True)
class RQReport:
    m: int
    separant_poly: MultiPoly
    roots: tuple
    r: int
    q: int


def jet_ideal(F: DiffPoly, m: int) -> JetIdeal:
    ring = jet_ring(F, m)
    gens = tuple(eval_origin_jet(F.diff(k), ring.gens) for k in range(m + 1))
    return JetIdeal(F, m, ring, gens)


def evaluate_with_unknowns(G: DiffPoly, c, upto: int):
    """Evaluate ``G`` at the jet ``c`` where entries that are missing (index
    beyond ``len(c)`` up to ``upto``) or None are indeterminates.

    Returns a field element if the value does not depend on the unknowns,
    else the MultiPoly over the unknown names.
    """
    field = G.field
    unknown = [j for j in range(upto + 1) if j >= len(c) or c[j] is None]
    if not unknown:
        return eval_origin_jet(G, list(c[:upto + 1]))
    ring = PolyRing([f"c_{j}" for j in unknown], field)
    vals = []
    for j in range(upto + 1):
        if j >= len(c) or c[j] is None:
            vals.append(ring.gen(f"c_{j}"))
        else:
            vals.append(ring.constant(c[j]))
    v = eval_origin_jet(G, vals)
    if v.is_constant():
        return v.constant_coeff()
    return v


def in_jet_variety(F: DiffPoly, m: int, c) -> bool:
    """Whether every generator of J_m(F) vanishes at the concrete jet ``c``.

    ``c`` may be shorter than n+m+1 as long as the generators do not depend on
    the missing entries at this point.
    """
    n = F.order()
    field = F.field
    for k in range(m + 1):
        v = evaluate_with_unknowns(F.diff(k), c, n + k)
        if isinstance(v, MultiPoly):
            raise JetLengthError(
                f"generator {k} of J_{m} still depends on {v.variables()} at the given jet")
        if not field.is_zero(v):
            return False
    return True


def separant_ideal(F: DiffPoly, m: int) -> list:
    """Generators of I_m(F): the nonzero separant-matrix entries at x = 0."""
    ring = jet_ring(F, m)
    out = []
    for row in separant_matrix(F, m):
        for entry in row:
            v = eval_origin_jet(entry, ring.gens)
            if v:
                out.append(v)
    return out


def _matrix_at(F, i, c, field):
    """Values of the entries of S_{F,i} at c (entries with l >= j only)."""
    vals = []
    for j, row in enumerate(separant_matrix(F, i)):
        for col in range(j, i + 1):
            vals.append(eval_origin_jet(row[col], c))
    return vals


def check_local_vanishing(F: DiffPoly, c) -> bool:
    """Whether F has vanishing order m = len(c) - n - 1 at ``c``."""
    n = F.order()
    if n is None:
        from .errors import NoOrderError

        raise NoOrderError(f"{F.render()} does not involve y")
    m = len(c) - n - 1
    if m < 0:
        raise JetLengthError(f"jet must have length at least {n + 1}")
    field = F.field
    vals = _matrix_at(F, m, list(c), field)
    # Entries of S_{F,m-1} form the upper-left block.
    inner = []
    for j in range(m):
        for col in range(j, m):
            inner.append((j, col))
    flat = {}
    idx = 0
    for j in range(m + 1):
        for col in range(j, m + 1):
            flat[(j, col)] = vals[idx]
            idx += 1
    if any(not field.is_zero(flat[p]) for p in inner):
        return False
    if all(field.is_zero(v) for v in vals):
        return False
    return in_jet_variety(F, 2 * m, c)


def minimal_local_order(F: DiffPoly, m: int, c) -> int:
    """Smallest i <= m with S_{F,i}(c_0..c_{n+i}) != 0."""
    n = F.order()
    field = F.field
    for i in range(m + 1):
        if len(c) < n + i + 1:
            raise JetLengthError(f"jet too short to evaluate S_F,{i}")
        vals = _matrix_at(F, i, list(c[:n + i + 1]), field)
        if any(not field.is_zero(v) for v in vals):
            return i
    raise InvariantError(
        f"no local vanishing order <= {m} at the given jet; the global order is wrong")


def rq_values(F: DiffPoly, c, m: int) -> RQReport:
    """S_{F,t,m}(c) with the count r of its integer roots above 2m and the
    largest such root q (2m if there is none)."""
    n = F.order()
    if len(c) < n + m + 1:
        raise JetLengthError(f"jet must have length at least {n + m + 1}")
    sep = gen_separant(F, m).eval_jet(list(c[:n + m + 1]))
    if sep.is_zero():
        raise ZeroPolynomialError(
            f"S_F,t,{m} vanishes identically at the jet; F has no vanishing order {m} there")
    roots = tuple(integer_roots(sep, "t"))
    big = [k for k in roots if k > 2 * m]
    return RQReport(m, sep, roots, len(big), max(big) if big else 2 * m)


def check_jet_ideal_structure(J: JetIdeal) -> None:
    """Generator k must only involve c_0..c_{n+k}."""
    n = J.F.order()
    for k, g in enumerate(J.gens):
        for name in g.variables():
            if int(name[2:]) > n + k:
                raise InvariantError(f"generator {k} involves {name}")


def require_local_vanishing(F: DiffPoly, c) -> int:
    if not check_local_vanishing(F, c):
        raise PreconditionError(
            f"F does not have vanishing order {len(c) - F.order() - 1} at the given jet")
    return len(c) - F.order() - 1
