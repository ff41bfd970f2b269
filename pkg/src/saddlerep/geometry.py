"""Convex geometry and linear programming kernel.

Everything in the package that needs a linear program goes through
:func:`lp_solve`, a dense two-phase revised simplex. Hull membership,
polytope intersection and generator reduction are thin LP formulations on
top of it; :func:`nearest_point_origin` is Wolfe's minimum-norm-point
algorithm.

Point sets are plain ``(m, n)`` float arrays (one generator per row).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .config import Tolerances, resolve

__all__ = [
    "MalformedInputError",
    "NumericalFailureError",
    "LPProblem",
    "LPResult",
    "Certificate",
    "HullResult",
    "IntersectionResult",
    "NearestPoint",
    "as_vector",
    "as_points",
    "lp_solve",
    "in_convex_hull",
    "polytope_intersection_point",
    "nearest_point_origin",
    "minimal_generators",
    "minkowski_sum",
]

_PIVOT_TOL = 1e-11
_RC_TOL = 1e-11


class MalformedInputError(ValueError):
    """Input violates a shape, finiteness or dimension requirement."""


class NumericalFailureError(ArithmeticError):
    """The simplex kernel could not terminate within its iteration guard."""


def as_vector(x, dim: Optional[int] = None, name: str = "x") -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1 or v.size == 0:
        raise MalformedInputError(f"{name} must be a nonempty 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise MalformedInputError(f"{name} has non-finite coordinates")
    if dim is not None and v.size != dim:
        raise MalformedInputError(f"{name} has dimension {v.size}, expected {dim}")
    return v


def as_points(points, dim: Optional[int] = None, name: str = "points") -> np.ndarray:
    """Validate a point set and return it as a 2-d float array.

    A 1-d input is read as a list of scalars, i.e. points in dimension one,
    unless ``dim`` says otherwise.
    """
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P.reshape(-1, 1) if dim in (None, 1) else P.reshape(1, -1)
    if P.ndim != 2 or P.shape[0] == 0 or P.shape[1] == 0:
        raise MalformedInputError(f"{name} must be a nonempty (m, n) array, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise MalformedInputError(f"{name} has non-finite coordinates")
    if dim is not None and P.shape[1] != dim:
        raise MalformedInputError(f"{name} has dimension {P.shape[1]}, expected {dim}")
    return P


# --------------------------------------------------------------------------
# Linear programming
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LPProblem:
    """``minimize <objective, x>`` subject to equality and ``<=`` rows.

    ``lower`` holds one entry per variable: a float gives ``x_j >= lower_j``,
    ``None`` leaves the variable free. ``lower=None`` makes all variables free.
    """

    objective: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    A_ub: np.ndarray
    b_ub: np.ndarray
    lower: Optional[tuple] = None

    @classmethod
    def from_rows(cls, objective, eq: Sequence = (), ub: Sequence = (), lower=None) -> "LPProblem":
        """Build a problem from ``(coefficients, rhs)`` row pairs."""
        c = np.asarray(objective, dtype=float).reshape(-1)
        nvar = c.size

        def stack(rows, kind):
            A = np.zeros((len(rows), nvar))
            b = np.zeros(len(rows))
            for k, (coef, rhs) in enumerate(rows):
                coef = np.asarray(coef, dtype=float).reshape(-1)
                if coef.size != nvar:
                    raise MalformedInputError(
                        f"{kind} row {k} has {coef.size} coefficients, objective has {nvar}"
                    )
                A[k] = coef
                b[k] = float(rhs)
            return A, b

        A_eq, b_eq = stack(list(eq), "equality")
        A_ub, b_ub = stack(list(ub), "inequality")
        return cls(c, A_eq, b_eq, A_ub, b_ub, None if lower is None else tuple(lower))

    def validate(self) -> None:
        n = np.asarray(self.objective).size
        for name, A, b in (("A_eq", self.A_eq, self.b_eq), ("A_ub", self.A_ub, self.b_ub)):
            A = np.asarray(A)
            if A.ndim != 2 or A.shape[1] != n or A.shape[0] != np.asarray(b).size:
                raise MalformedInputError(f"{name} has shape {A.shape}, incompatible with {n} variables")
        if self.lower is not None and len(self.lower) != n:
            raise MalformedInputError(f"lower has {len(self.lower)} entries, expected {n}")
        arrays = [self.objective, self.A_eq, self.b_eq, self.A_ub, self.b_ub]
        if not all(np.all(np.isfinite(np.asarray(a, dtype=float))) for a in arrays):
            raise MalformedInputError("LP data must be finite")


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`lp_solve`.

    ``status`` is ``"optimal"``, ``"infeasible"`` or ``"unbounded"``. For an
    infeasible problem ``farkas`` holds the phase-1 dual vector over the rows
    ``[A_eq; A_ub]`` (inequality rows taken with their slack). After the
    variable shift ``z = x - lower`` it satisfies ``y @ A[:, j] <= 0`` for
    every lower-bounded column, ``y @ A[:, j] == 0`` for free columns,
    ``y_ub <= 0`` and ``y @ (b - A @ lower) > 0``.
    """

    status: str
    x: Optional[np.ndarray] = None
    value: Optional[float] = None
    farkas: Optional[np.ndarray] = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _simplex(A, b, c, basis, allowed, blocking, budget, max_iter):
    """Revised simplex on ``min c z, A z = b, z >= 0`` from a feasible basis.

    Dantzig pricing for the first ``budget`` pivots, Bland's rule afterwards.
    Basic variables flagged in ``blocking`` are pinned at zero (artificials
    left in the basis after phase 1).
    """
    m = A.shape[0]
    basis = list(basis)
    rc_tol = _RC_TOL * max(1.0, float(np.max(np.abs(c))) if c.size else 1.0)
    it = 0
    while True:
        B = A[:, basis]
        try:
            xB = np.linalg.solve(B, b)
            y = np.linalg.solve(B.T, c[basis])
        except np.linalg.LinAlgError as exc:
            raise NumericalFailureError("singular basis in simplex") from exc
        red = c - A.T @ y
        red[basis] = 0.0
        red[~allowed] = 0.0
        cand = np.flatnonzero(red < -rc_tol)
        if cand.size == 0:
            return "optimal", basis, xB, y, it
        if it >= max_iter:
            raise NumericalFailureError(f"simplex exceeded {max_iter} pivots")
        if it < budget:
            j = int(cand[np.argmin(red[cand])])
        else:
            j = int(cand[0])
        d = np.linalg.solve(B, A[:, j])
        ratios = np.full(m, np.inf)
        for r in range(m):
            if blocking[basis[r]]:
                if abs(d[r]) > _PIVOT_TOL:
                    ratios[r] = 0.0
            elif d[r] > _PIVOT_TOL:
                ratios[r] = max(xB[r], 0.0) / d[r]
        if not np.isfinite(ratios).any():
            return "unbounded", basis, xB, y, it
        rmin = ratios.min()
        ties = np.flatnonzero(ratios <= rmin + 1e-12 * max(1.0, rmin))
        leave = min(ties, key=lambda r: basis[r])
        basis[leave] = j
        it += 1


def lp_solve(problem: LPProblem, tol: Tolerances | None = None) -> LPResult:
    """Solve a small dense LP exactly as posed.

    The method is a two-phase revised simplex with a fixed pivot rule, so
    the result is deterministic for a given input.

    Raises
    ------
    MalformedInputError
        Row lengths disagree with the objective, or data is non-finite.
    NumericalFailureError
        The anti-cycling iteration guard was exceeded.
    """
    tol = resolve(tol)
    problem.validate()
    c0 = np.asarray(problem.objective, dtype=float).reshape(-1)
    nvar = c0.size
    A_eq = np.asarray(problem.A_eq, dtype=float).reshape(-1, nvar)
    A_ub = np.asarray(problem.A_ub, dtype=float).reshape(-1, nvar)
    b_eq = np.asarray(problem.b_eq, dtype=float).reshape(-1)
    b_ub = np.asarray(problem.b_ub, dtype=float).reshape(-1)
    k_eq, k_ub = A_eq.shape[0], A_ub.shape[0]

    lower = problem.lower if problem.lower is not None else (None,) * nvar
    shift = np.array([0.0 if l is None else float(l) for l in lower])
    free = np.array([l is None for l in lower], dtype=bool)

    # standard form columns: z (one per variable), z- for free variables, slacks
    A_rows = np.vstack([A_eq, A_ub]) if k_eq + k_ub else np.zeros((0, nvar))
    b_rows = np.concatenate([b_eq, b_ub]) - A_rows @ shift
    free_idx = np.flatnonzero(free)
    m = k_eq + k_ub
    A = np.hstack([A_rows, -A_rows[:, free_idx], np.vstack([np.zeros((k_eq, k_ub)), np.eye(k_ub)])])
    c = np.concatenate([c0, -c0[free_idx], np.zeros(k_ub)])
    N = A.shape[1]

    def unpack(z):
        x = z[:nvar].copy()
        x[free_idx] -= z[nvar : nvar + free_idx.size]
        return x + shift

    if m == 0:
        if np.any(c < -_RC_TOL):
            return LPResult("unbounded")
        x = unpack(np.zeros(N))
        return LPResult("optimal", x, float(c0 @ x))

    sign = np.where(b_rows < 0, -1.0, 1.0)
    A1 = np.hstack([A * sign[:, None], np.eye(m)])
    b1 = b_rows * sign
    c1 = np.concatenate([np.zeros(N), np.ones(m)])
    blocking = np.zeros(N + m, dtype=bool)
    allowed = np.ones(N + m, dtype=bool)
    budget = 50 + 5 * (N + m)
    max_iter = budget + 50 * (N + m) + 1000

    _, basis, xB, y, it1 = _simplex(A1, b1, c1, list(range(N, N + m)), allowed, blocking, budget, max_iter)
    infeas = float(c1[basis] @ np.clip(xB, 0.0, None))
    if infeas > tol.lp:
        return LPResult("infeasible", farkas=y * sign, iterations=it1)

    allowed[N:] = False
    blocking[N:] = True
    c2 = np.concatenate([c, np.zeros(m)])
    status, basis, xB, _, it2 = _simplex(A1, b1, c2, basis, allowed, blocking, budget, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", iterations=it1 + it2)
    z = np.zeros(N + m)
    z[basis] = np.clip(xB, 0.0, None)
    x = unpack(z[:N])
    return LPResult("optimal", x, float(c0 @ x), iterations=it1 + it2)


# --------------------------------------------------------------------------
# Hull membership and intersection
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Machine-checkable witness attached to a geometric decision.

    ``kind == "membership-weights"``: ``weights`` are convex weights over the
    generator list (nonnegative, summing to one).

    ``kind == "separating-direction"``: ``direction`` is a unit vector and
    ``margin`` the strict gap it achieves, in the orientation documented by
    the function that produced it.
    """

    kind: str
    weights: Optional[np.ndarray] = None
    direction: Optional[np.ndarray] = None
    margin: Optional[float] = None


@dataclass(frozen=True)
class HullResult:
    inside: bool
    certificate: Certificate

    def __bool__(self) -> bool:
        return self.inside


@dataclass(frozen=True)
class IntersectionResult:
    """Either a common point of two hulls (with both weight lists) or a
    separating direction ``d`` with ``min_P <d,.> - max_Q <d,.> = margin``."""

    point: Optional[np.ndarray]
    weights_p: Optional[np.ndarray] = None
    weights_q: Optional[np.ndarray] = None
    certificate: Optional[Certificate] = None

    @property
    def empty(self) -> bool:
        return self.point is None


def _clean_weights(w: np.ndarray) -> np.ndarray:
    w = np.clip(w, 0.0, None)
    s = w.sum()
    return w / s if s > 0 else w


def _unit(d: np.ndarray) -> Optional[np.ndarray]:
    nrm = np.linalg.norm(d)
    return d / nrm if nrm > 0 and np.isfinite(nrm) else None


def in_convex_hull(q, points, tol: Tolerances | None = None) -> HullResult:
    """Decide whether ``q`` lies in the convex hull of ``points``.

    A ``yes`` carries convex weights reproducing ``q``. A ``no`` carries a
    unit direction ``d`` with ``<d, q> - max_p <d, p> = margin > tol.lp``.
    """
    tol = resolve(tol)
    P = as_points(points)
    q = as_vector(q, P.shape[1], "q")
    m, n = P.shape
    A_eq = np.vstack([P.T, np.ones((1, m))])
    b_eq = np.concatenate([q, [1.0]])
    res = lp_solve(LPProblem(np.zeros(m), A_eq, b_eq, np.zeros((0, m)), np.zeros(0), (0.0,) * m), tol)
    if res.optimal:
        w = _clean_weights(res.x)
        return HullResult(True, Certificate("membership-weights", weights=w))

    d = _unit(res.farkas[:n])
    if d is not None:
        margin = float(d @ q - np.max(P @ d))
        if margin > tol.lp:
            return HullResult(False, Certificate("separating-direction", direction=d, margin=margin))
    # borderline: fall back to the Euclidean distance to the hull
    near = nearest_point_origin(P - q, tol)
    if near.distance <= tol.lp:
        return HullResult(True, Certificate("membership-weights", weights=near.weights))
    d = -near.point / near.distance
    margin = float(d @ q - np.max(P @ d))
    return HullResult(False, Certificate("separating-direction", direction=d, margin=margin))


def polytope_intersection_point(P, Q, tol: Tolerances | None = None) -> IntersectionResult:
    """Find a point common to ``conv(P)`` and ``conv(Q)``.

    Solved as an LP feasibility problem in the two sets of convex weights;
    the first feasible basic solution is returned, so the point is
    deterministic but not canonical when the intersection is not a
    singleton. When the hulls are disjoint the result carries a unit
    direction ``d`` with ``min_P <d,.> > max_Q <d,.>``.
    """
    tol = resolve(tol)
    P = as_points(P, name="P")
    Q = as_points(Q, P.shape[1], name="Q")
    mp, n = P.shape
    mq = Q.shape[0]
    A_eq = np.zeros((n + 2, mp + mq))
    A_eq[:n, :mp] = P.T
    A_eq[:n, mp:] = -Q.T
    A_eq[n, :mp] = 1.0
    A_eq[n + 1, mp:] = 1.0
    b_eq = np.zeros(n + 2)
    b_eq[n:] = 1.0
    nv = mp + mq
    res = lp_solve(LPProblem(np.zeros(nv), A_eq, b_eq, np.zeros((0, nv)), np.zeros(0), (0.0,) * nv), tol)
    if res.optimal:
        lam = _clean_weights(res.x[:mp])
        mu = _clean_weights(res.x[mp:])
        point = 0.5 * (lam @ P + mu @ Q)
        return IntersectionResult(point, lam, mu, Certificate("membership-weights", weights=np.concatenate([lam, mu])))

    d = _unit(-res.farkas[:n])
    if d is not None:
        margin = float(np.min(P @ d) - np.max(Q @ d))
        if margin > tol.lp:
            return IntersectionResult(None, certificate=Certificate("separating-direction", direction=d, margin=margin))
    diffs = (P[:, None, :] - Q[None, :, :]).reshape(-1, n)
    near = nearest_point_origin(diffs, tol)
    if near.distance <= tol.lp:
        # numerically touching hulls: recover weights from the difference-set combination
        W = near.weights.reshape(mp, mq)
        lam, mu = W.sum(axis=1), W.sum(axis=0)
        point = 0.5 * (lam @ P + mu @ Q)
        return IntersectionResult(point, lam, mu, Certificate("membership-weights", weights=np.concatenate([lam, mu])))
    d = near.point / near.distance
    margin = float(np.min(P @ d) - np.max(Q @ d))
    return IntersectionResult(None, certificate=Certificate("separating-direction", direction=d, margin=margin))


# --------------------------------------------------------------------------
# Minimum-norm point
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NearestPoint:
    point: np.ndarray
    distance: float
    weights: np.ndarray = field(repr=False)


def _affine_minimizer(PS: np.ndarray) -> np.ndarray:
    k = PS.shape[0]
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = PS @ PS.T
    K[:k, k] = 1.0
    K[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    return sol[:k]


def nearest_point_origin(points, tol: Tolerances | None = None, max_iter: int = 10_000) -> NearestPoint:
    """Euclidean projection of the origin onto the hull of ``points``.

    Wolfe's minimum-norm-point algorithm. On return, for every generator
    ``p``, ``<v, p> >= |v|^2 - tol.nearest`` where ``v`` is the point.
    """
    tol = resolve(tol)
    P = as_points(points)
    m = P.shape[0]
    sq = np.einsum("ij,ij->i", P, P)
    S = [int(np.argmin(sq))]
    w = np.array([1.0])
    x = P[S[0]].copy()
    eps_w = 1e-14
    stop = 0.25 * tol.nearest

    for _ in range(max_iter):
        vals = P @ x
        j = int(np.argmin(vals))
        if x @ x - vals[j] <= stop or j in S:
            break
        S.append(j)
        w = np.append(w, 0.0)
        while True:
            v = _affine_minimizer(P[S])
            if np.all(v > eps_w):
                w = v
                break
            mask = v <= eps_w
            denom = w[mask] - v[mask]
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(denom > 0, w[mask] / denom, np.inf)
            theta = float(np.clip(np.min(ratios), 0.0, 1.0))
            w = (1.0 - theta) * w + theta * v
            keep = w > eps_w
            if keep.all():
                keep[int(np.argmin(w))] = False
            S = [s for s, k in zip(S, keep) if k]
            w = w[keep]
            w = w / w.sum()
        x = w @ P[S]
    weights = np.zeros(m)
    weights[S] = w
    weights = _clean_weights(weights)
    x = weights @ P
    return NearestPoint(x, float(np.linalg.norm(x)), weights)


# --------------------------------------------------------------------------
# Generator reduction
# --------------------------------------------------------------------------


def _dedup(P: np.ndarray, tol: Tolerances) -> np.ndarray:
    _, first = np.unique(P, axis=0, return_index=True)
    P = P[np.sort(first)]
    kept: list[int] = []
    for k in range(P.shape[0]):
        if not kept or np.min(np.max(np.abs(P[kept] - P[k]), axis=1)) > tol.dup:
            kept.append(k)
    return P[kept]


_PROBE_CACHE: dict = {}


def _probe_directions(n: int) -> np.ndarray:
    if n not in _PROBE_CACHE:
        rng = np.random.default_rng(20240611 + n)
        D = rng.standard_normal((16 * n + 16, n))
        _PROBE_CACHE[n] = np.vstack([np.eye(n), -np.eye(n), D])
    return _PROBE_CACHE[n]


def minimal_generators(points, tol: Tolerances | None = None) -> np.ndarray:
    """Reduce a generator list to the vertices of its convex hull.

    Exact duplicates are dropped first, then points closer than ``tol.dup``
    (max-norm) to an earlier point. Every remaining point is then kept only
    if it is not in the hull of the other survivors. Input order is kept.
    """
    tol = resolve(tol)
    P = _dedup(as_points(points), tol)
    m, n = P.shape
    if m <= 1:
        return P
    if n == 1:
        lo, hi = int(np.argmin(P[:, 0])), int(np.argmax(P[:, 0]))
        return P[sorted({lo, hi})]

    # points that are strict unique maximizers of some probe direction are vertices
    V = P @ _probe_directions(n).T
    scale = max(1.0, float(np.max(np.abs(P))))
    certain = np.zeros(m, dtype=bool)
    order = np.argsort(-V, axis=0, kind="stable")
    top, second = order[0], order[1]
    cols = np.arange(V.shape[1])
    strict = V[top, cols] - V[second, cols] > 1e3 * tol.lp * scale
    certain[top[strict]] = True

    alive = np.ones(m, dtype=bool)
    for k in range(m):
        if certain[k]:
            continue
        ref = certain & alive
        ref[k] = False
        if ref.any() and in_convex_hull(P[k], P[ref], tol).inside:
            alive[k] = False
            continue
        others = alive.copy()
        others[k] = False
        if others.any() and in_convex_hull(P[k], P[others], tol).inside:
            alive[k] = False
    return P[alive]


def minkowski_sum(P, Q) -> np.ndarray:
    """All pairwise sums ``p + q``; their hull is ``conv(P) + conv(Q)``."""
    P = as_points(P, name="P")
    Q = as_points(Q, P.shape[1], name="Q")
    return (P[:, None, :] + Q[None, :, :]).reshape(-1, P.shape[1])
