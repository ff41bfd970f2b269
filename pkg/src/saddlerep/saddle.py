"""Constructing, converting, verifying and reducing saddle families.

A family ``a_is`` is a *saddle* family for ``p`` when both
``min_i max_s <a_is, x>`` and ``max_s min_i <a_is, x>`` equal ``p(x)``.

* :func:`from_dc` builds one from a DC pair via ``a_is = b_s - c_i``.
* :func:`build_from_approximations` builds one from finite upper/lower
  approximant families by choosing ``a_is`` in the intersection of the two
  subdifferentials, so that ``psi_s <= <a_is, .> <= phi_i``.
* :func:`saddle_to_dc` goes back to a DC pair.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import Tolerances, resolve
from .geometry import (
    Certificate,
    MalformedInputError,
    in_convex_hull,
    minimal_generators,
    minkowski_sum,
    polytope_intersection_point,
)
from .oracle import SphereSampler, sample_sphere
from .phfunc import (
    ApproximationFamilies,
    DCPair,
    MaxOfLinear,
    MinOfLinear,
    SaddleFamily,
    eval_infsup,
    eval_supinf,
)

__all__ = [
    "ConstructionError",
    "SaddleReport",
    "from_dc",
    "exhaustive_families",
    "build_from_approximations",
    "saddle_to_dc",
    "verify_saddle",
    "validate_sandwich",
    "reduce",
    "default_sampler",
]


class ConstructionError(ValueError):
    """An upper and a lower approximant do not sandwich a common function.

    ``row`` and ``col`` index the offending pair; ``certificate`` holds a
    unit direction ``d`` with ``min over upper generators of <d,.>`` exceeding
    ``max over lower generators of <d,.>``. At ``x = -d`` the lower
    approximant lies strictly above the upper one.
    """

    def __init__(self, row: int, col: int, certificate: Certificate):
        self.row = row
        self.col = col
        self.certificate = certificate
        super().__init__(
            f"upper approximant {row} and lower approximant {col} have disjoint subdifferentials "
            f"(separation margin {certificate.margin:.3g})"
        )


def default_sampler(dim: int, count: int = 2000, seed: int = 0) -> SphereSampler:
    return SphereSampler(dim, count, seed, "uniform")


def from_dc(p: DCPair, tol: Tolerances | None = None) -> SaddleFamily:
    """Saddle family ``a_is = b_s - c_i`` of a DC pair.

    ``b_s`` runs over the hull vertices of the plus part (columns), ``c_i``
    over those of the minus part (rows).
    """
    B = minimal_generators(p.plus.generators, tol)
    C = minimal_generators(p.minus.generators, tol)
    return SaddleFamily(B[None, :, :] - C[:, None, :])


def exhaustive_families(p: DCPair) -> ApproximationFamilies:
    """Finite upper and lower approximants of ``p = plus - minus``.

    Upper: ``phi_i = plus - <c_i, .>`` for each minus generator ``c_i``.
    Lower: ``psi_s = <b_s, .> - minus`` for each plus generator ``b_s``.
    ``min_i phi_i = max_s psi_s = p``.
    """
    B, C = p.plus.generators, p.minus.generators
    upper = tuple(MaxOfLinear(B - c) for c in C)
    lower = tuple(MinOfLinear(b - C) for b in B)
    return ApproximationFamilies(upper, lower)


def build_from_approximations(fams: ApproximationFamilies, tol: Tolerances | None = None) -> SaddleFamily:
    """Pick ``a_is`` in the intersection of the subdifferentials of ``phi_i`` and ``psi_s``.

    Raises :class:`ConstructionError` for the first pair (row-major order)
    whose subdifferentials are disjoint.
    """
    tol = resolve(tol)
    rows, cols = len(fams.upper), len(fams.lower)
    E = np.empty((rows, cols, fams.dim))
    for i, phi in enumerate(fams.upper):
        for s, psi in enumerate(fams.lower):
            res = polytope_intersection_point(phi.generators, psi.generators, tol)
            if res.empty:
                raise ConstructionError(i, s, res.certificate)
            E[i, s] = res.point
    return SaddleFamily(E)


def validate_sandwich(F: SaddleFamily, fams: ApproximationFamilies, tol: Tolerances | None = None) -> bool:
    """True iff every ``a_is`` lies in both hulls of ``phi_i`` and ``psi_s``."""
    tol = resolve(tol)
    if F.rows != len(fams.upper) or F.cols != len(fams.lower) or F.dim != fams.dim:
        raise MalformedInputError(
            f"family of shape {F.rows}x{F.cols} (n={F.dim}) is not aligned with "
            f"{len(fams.upper)} upper and {len(fams.lower)} lower approximants (n={fams.dim})"
        )
    for i, phi in enumerate(fams.upper):
        for s, psi in enumerate(fams.lower):
            a = F.entries[i, s]
            if not in_convex_hull(a, phi.generators, tol).inside:
                return False
            if not in_convex_hull(a, psi.generators, tol).inside:
                return False
    return True


def _sum_reduced(A: np.ndarray, B: np.ndarray, tol) -> np.ndarray:
    return minimal_generators(minkowski_sum(A, B), tol)


def saddle_to_dc(F: SaddleFamily, tol: Tolerances | None = None) -> DCPair:
    """DC pair of the inf-sup reading ``min_i g_i`` with ``g_i = max_s <a_is, .>``.

    Uses ``min_i g_i = sum_i g_i - max_j sum_{i != j} g_i``. Leave-one-out
    sums come from prefix and suffix Minkowski sums, each reduced to hull
    vertices, so the generator count stays polynomial in practice.
    """
    tol = resolve(tol)
    n = F.dim
    rows = [minimal_generators(F.entries[i], tol) for i in range(F.rows)]
    zero = np.zeros((1, n))
    prefix = [zero]
    for g in rows:
        prefix.append(_sum_reduced(prefix[-1], g, tol))
    suffix = [zero]
    for g in reversed(rows):
        suffix.append(_sum_reduced(suffix[-1], g, tol))
    suffix.reverse()  # suffix[k] = g_k + ... + g_{I-1}
    plus = prefix[-1]
    leave_one_out = [_sum_reduced(prefix[j], suffix[j + 1], tol) for j in range(F.rows)]
    minus = minimal_generators(np.vstack(leave_one_out), tol)
    return DCPair(MaxOfLinear(plus), MaxOfLinear(minus))


@dataclass(frozen=True)
class SaddleReport:
    max_gap: float
    witness: np.ndarray
    is_saddle: bool
    exact: bool = False
    evaluated: int = 0


def _critical_directions(F: SaddleFamily) -> np.ndarray:
    """Unit vectors in the plane where the gap can attain its maximum.

    Between two consecutive tie directions every <a_is, x> keeps its order,
    so both readings are linear there; the gap is then maximal at an arc end
    or where the arc meets the gap's own gradient.
    """
    V = np.unique(F.entries.reshape(-1, 2), axis=0)
    axes = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    if V.shape[0] < 2:
        return axes
    iu, ju = np.triu_indices(V.shape[0], k=1)
    D = V[iu] - V[ju]
    perp = np.column_stack([-D[:, 1], D[:, 0]])
    theta = np.arctan2(perp[:, 1], perp[:, 0])
    theta = np.unique(np.mod(np.concatenate([theta, theta + np.pi]), 2 * np.pi))
    nxt = np.append(theta[1:], theta[0] + 2 * np.pi)
    mid = 0.5 * (theta + nxt)
    M = np.column_stack([np.cos(mid), np.sin(mid)])

    G = np.einsum("isn,kn->kis", F.entries, M)
    k = np.arange(M.shape[0])
    i_star = np.argmin(G.max(axis=2), axis=1)
    s_star = np.argmax(G[k, i_star, :], axis=1)
    t_star = np.argmax(G.min(axis=1), axis=1)
    j_star = np.argmin(G[k, :, t_star], axis=1)
    W = F.entries[i_star, s_star] - F.entries[j_star, t_star]
    wn = np.linalg.norm(W, axis=1)
    ok = wn > 0
    phi = np.mod(np.arctan2(W[:, 1], W[:, 0]) - theta, 2 * np.pi)
    inside = ok & (phi < (nxt - theta))
    stationary = W[inside] / wn[inside, None]

    ends = np.column_stack([np.cos(theta), np.sin(theta)])
    return np.vstack([axes, ends, M, stationary])


def verify_saddle(
    F: SaddleFamily,
    sampler: Optional[SphereSampler] = None,
    exact2d: bool = False,
    tol: Tolerances | None = None,
) -> SaddleReport:
    """Largest inf-sup minus sup-inf gap over the sphere sample.

    With ``exact2d`` and ``n <= 2`` the sample is augmented by every
    direction where the gap can peak, which makes the result the exact
    maximum over the unit sphere.
    """
    tol = resolve(tol)
    if sampler is None:
        sampler = default_sampler(F.dim)
    if sampler.dim != F.dim:
        raise MalformedInputError(f"sampler dimension {sampler.dim} != family dimension {F.dim}")
    X = sample_sphere(sampler)
    exact = exact2d and F.dim <= 2
    if exact:
        extra = np.array([[1.0], [-1.0]]) if F.dim == 1 else _critical_directions(F)
        X = np.vstack([extra, X])
    gap = eval_infsup(F, X) - eval_supinf(F, X)
    k = int(np.argmax(gap))
    max_gap = float(gap[k])
    return SaddleReport(max_gap, X[k].copy(), max_gap <= tol.verify, exact, X.shape[0])


def _contains(outer: np.ndarray, inner: np.ndarray, tol) -> bool:
    return all(in_convex_hull(a, outer, tol).inside for a in inner)


def reduce(
    F: SaddleFamily,
    sampler: Optional[SphereSampler] = None,
    tol: Tolerances | None = None,
) -> SaddleFamily:
    """Drop duplicate and dominated rows and columns.

    Row ``i`` is dropped when another surviving row ``k`` satisfies
    ``g_i >= g_k`` everywhere (screened on the sample, confirmed by hull
    containment). Columns are treated dually. A removal is only committed if
    both readings stay within ``tol.verify`` of the original on the sample.
    """
    tol = resolve(tol)
    if sampler is None:
        sampler = default_sampler(F.dim)
    X = sample_sphere(sampler)
    ref_infsup = eval_infsup(F, X)
    ref_supinf = eval_supinf(F, X)
    E = F.entries
    rows = list(range(F.rows))
    cols = list(range(F.cols))
    screen = 1e-9 * max(1.0, float(np.max(np.abs(E))))

    def preserved(r, c) -> bool:
        G = SaddleFamily(E[np.ix_(r, c)])
        return (
            np.max(np.abs(eval_infsup(G, X) - ref_infsup)) <= tol.verify
            and np.max(np.abs(eval_supinf(G, X) - ref_supinf)) <= tol.verify
        )

    changed = True
    while changed:
        changed = False
        vals = np.einsum("isn,kn->kis", E[np.ix_(rows, cols)], X)
        row_vals = vals.max(axis=2)  # (k, rows)
        for i in list(rows):
            if len(rows) == 1:
                break
            for k in rows:
                if k == i:
                    continue
                ia, kb = rows.index(i), rows.index(k)
                same = np.array_equal(E[i][cols], E[k][cols])
                if not same:
                    if np.any(row_vals[:, ia] < row_vals[:, kb] - screen):
                        continue
                    if not _contains(E[i][cols], E[k][cols], tol):
                        continue
                trial = [r for r in rows if r != i]
                if preserved(trial, cols):
                    rows = trial
                    row_vals = np.delete(row_vals, ia, axis=1)
                    changed = True
                    break

        vals = np.einsum("isn,kn->kis", E[np.ix_(rows, cols)], X)
        col_vals = vals.min(axis=1)  # (k, cols)
        for s in list(cols):
            if len(cols) == 1:
                break
            for t in cols:
                if t == s:
                    continue
                sa, tb = cols.index(s), cols.index(t)
                same = np.array_equal(E[rows, s], E[rows, t])
                if not same:
                    if np.any(col_vals[:, sa] > col_vals[:, tb] + screen):
                        continue
                    if not _contains(E[rows, s], E[rows, t], tol):
                        continue
                trial = [c for c in cols if c != s]
                if preserved(rows, trial):
                    cols = trial
                    col_vals = np.delete(col_vals, sa, axis=1)
                    changed = True
                    break
    return SaddleFamily(E[np.ix_(rows, cols)])
