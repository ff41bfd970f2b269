"""Sign tests, Lipschitz bounds and steepest descent/ascent from a family.

The inf-sup reading ``min_i g_i`` with ``g_i(x) = max_s <a_is, x>`` is
nonnegative iff every row hull contains the origin; its minimum over the
unit ball is ``-max_i dist(0, conv row_i)`` as soon as some row hull
misses the origin. The sup-inf reading gives the dual statements on
columns.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import Tolerances, resolve
from .geometry import in_convex_hull, nearest_point_origin
from .oracle import SphereSampler, sample_sphere
from .phfunc import SaddleFamily, eval_infsup, eval_supinf

__all__ = [
    "SignResult",
    "LipschitzBound",
    "DirectionReport",
    "check_nonnegative",
    "check_nonpositive",
    "lipschitz_constant",
    "steepest_descent",
    "steepest_ascent",
    "fallback_sampler",
]


@dataclass(frozen=True)
class SignResult:
    """Outcome of a sign test.

    ``holds`` answers the question. When it holds, ``certificates`` has one
    convex-weight vector per row (or column) expressing the origin. When it
    fails, ``index`` names the offending row/column and ``witness`` is a unit
    vector where the function has the wrong sign, with ``value`` its value.
    """

    holds: bool
    certificates: Optional[tuple] = None
    index: Optional[int] = None
    witness: Optional[np.ndarray] = None
    value: Optional[float] = None

    def __bool__(self) -> bool:
        return self.holds


def check_nonnegative(F: SaddleFamily, tol: Tolerances | None = None) -> SignResult:
    """Is ``min_i max_s <a_is, x> >= 0`` for all ``x``?"""
    tol = resolve(tol)
    certs = []
    for i in range(F.rows):
        res = in_convex_hull(np.zeros(F.dim), F.entries[i], tol)
        if not res.inside:
            d = res.certificate.direction
            return SignResult(False, index=i, witness=d, value=float(eval_infsup(F, d)))
        certs.append(res.certificate.weights)
    return SignResult(True, certificates=tuple(certs))


def check_nonpositive(F: SaddleFamily, tol: Tolerances | None = None) -> SignResult:
    """Is ``max_s min_i <a_is, x> <= 0`` for all ``x``?

    For a saddle family this is the nonpositivity of the represented
    function; otherwise it only speaks about the sup-inf reading.
    """
    tol = resolve(tol)
    certs = []
    for s in range(F.cols):
        res = in_convex_hull(np.zeros(F.dim), F.entries[:, s], tol)
        if not res.inside:
            d = -res.certificate.direction
            return SignResult(False, index=s, witness=d, value=float(eval_supinf(F, d)))
        certs.append(res.certificate.weights)
    return SignResult(True, certificates=tuple(certs))


@dataclass(frozen=True)
class LipschitzBound:
    M: float

    def holds_on(self, F: SaddleFamily, X: np.ndarray, slack: float = 1e-12) -> bool:
        """Check ``|infsup(x)| <= M |x|`` and ``|supinf(x)| <= M |x|`` on the rows of ``X``."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        bound = self.M * np.linalg.norm(X, axis=1) + slack
        return bool(
            np.all(np.abs(eval_infsup(F, X)) <= bound) and np.all(np.abs(eval_supinf(F, X)) <= bound)
        )


def lipschitz_constant(F: SaddleFamily) -> LipschitzBound:
    """Largest entry norm; bounds both readings by ``M |x|`` (Cauchy-Schwarz)."""
    return LipschitzBound(float(np.max(np.linalg.norm(F.entries, axis=2))))


@dataclass(frozen=True)
class DirectionReport:
    """Steepest descent or ascent direction on the unit sphere.

    ``approximate`` is set when the value comes from sphere sampling (the
    function has no descent, resp. ascent, direction). Otherwise ``index``
    is the row (column) that realises it and ``certificate`` holds the
    convex weights of its nearest point to the origin.
    """

    direction: np.ndarray
    value: float
    mode: str
    approximate: bool = False
    index: Optional[int] = None
    certificate: Optional[np.ndarray] = field(default=None, repr=False)


def fallback_sampler(dim: int, seed: int = 0) -> SphereSampler:
    count = 2048 if dim <= 3 else 4096 * dim
    return SphereSampler(dim, count, seed, "low-discrepancy")


def _sampled_extremum(F, values_fn, mode, sampler):
    if F.dim == 1:
        X = np.array([[1.0], [-1.0]])
    else:
        X = sample_sphere(sampler or fallback_sampler(F.dim))
    vals = values_fn(F, X)
    k = int(np.argmin(vals) if mode == "descent" else np.argmax(vals))
    return DirectionReport(X[k].copy(), float(vals[k]), mode, approximate=True)


def steepest_descent(
    F: SaddleFamily, sampler: Optional[SphereSampler] = None, tol: Tolerances | None = None
) -> DirectionReport:
    """Unit direction minimising the inf-sup reading.

    Ties between rows go to the lowest index. The sampled fallback is always
    flagged approximate, although in dimension one it checks both unit points.
    """
    tol = resolve(tol)
    best = None
    for i in range(F.rows):
        near = nearest_point_origin(F.entries[i], tol)
        if near.distance > tol.nearest and (best is None or near.distance > best[1].distance):
            best = (i, near)
    if best is None:
        return _sampled_extremum(F, eval_infsup, "descent", sampler)
    i, near = best
    return DirectionReport(-near.point / near.distance, -near.distance, "descent", False, i, near.weights)


def steepest_ascent(
    F: SaddleFamily, sampler: Optional[SphereSampler] = None, tol: Tolerances | None = None
) -> DirectionReport:
    """Unit direction maximising the sup-inf reading (dual of :func:`steepest_descent`)."""
    tol = resolve(tol)
    best = None
    for s in range(F.cols):
        near = nearest_point_origin(F.entries[:, s], tol)
        if near.distance > tol.nearest and (best is None or near.distance > best[1].distance):
            best = (s, near)
    if best is None:
        return _sampled_extremum(F, eval_supinf, "ascent", sampler)
    s, near = best
    return DirectionReport(near.point / near.distance, near.distance, "ascent", False, s, near.weights)
