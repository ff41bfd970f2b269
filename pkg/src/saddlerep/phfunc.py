"""Polyhedral positively homogeneous functions and their evaluation.

Representations
---------------
``MaxOfLinear``   x -> max_b <b, x>       (sublinear, generators of its subdifferential)
``MinOfLinear``   x -> min_c <c, x>       (superlinear, generators of its upper subdifferential)
``DCPair``        x -> plus(x) - minus(x) (difference of two sublinear functions)
``SaddleFamily``  an (I, S, n) grid of vectors a_is read either as
                  min_i max_s <a_is, x> (inf-sup) or max_s min_i <a_is, x> (sup-inf)

All evaluators accept a single point of shape ``(n,)`` and return a float,
or a batch of shape ``(k, n)`` and return an array of ``k`` values.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import Tolerances
from .geometry import MalformedInputError, as_points, minimal_generators, minkowski_sum

__all__ = [
    "MaxOfLinear",
    "MinOfLinear",
    "DCPair",
    "SaddleFamily",
    "ApproximationFamilies",
    "eval_sublinear",
    "eval_superlinear",
    "eval_dc",
    "eval_infsup",
    "eval_supinf",
    "dc_add",
    "dc_scale",
    "dc_max",
    "dc_min",
    "dc_neg",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _points_of(x, n: int) -> tuple[np.ndarray, bool]:
    X = np.asarray(x, dtype=float)
    single = X.ndim <= 1
    X = X.reshape(1, -1) if single else X
    if X.ndim != 2 or X.shape[1] != n:
        raise MalformedInputError(f"evaluation point has shape {np.shape(x)}, expected (..., {n})")
    return X, single


def _out(values: np.ndarray, single: bool):
    return float(values[0]) if single else values


class _Envelope:
    """Shared storage for max/min of finitely many linear functions."""

    __slots__ = ("generators",)

    def __init__(self, generators, dim: int | None = None):
        if isinstance(generators, _Envelope):
            generators = generators.generators
        object.__setattr__(self, "generators", _frozen(as_points(generators, dim, "generators")))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    def __len__(self) -> int:
        return self.generators.shape[0]

    def __eq__(self, other):
        return type(self) is type(other) and np.array_equal(self.generators, other.generators)

    def __hash__(self):
        return hash((type(self).__name__, self.generators.shape, self.generators.tobytes()))

    def __repr__(self):
        return f"{type(self).__name__}({self.generators.tolist()!r})"

    def reduced(self, tol: Tolerances | None = None):
        """Same function, generators cut down to the hull vertices."""
        return type(self)(minimal_generators(self.generators, tol))


class MaxOfLinear(_Envelope):
    """Sublinear function ``x -> max_b <b, x>`` over a finite generator list."""

    __slots__ = ()

    def __call__(self, x):
        return eval_sublinear(self, x)

    def __neg__(self) -> "MinOfLinear":
        return MinOfLinear(-self.generators)


class MinOfLinear(_Envelope):
    """Superlinear function ``x -> min_c <c, x>`` over a finite generator list."""

    __slots__ = ()

    def __call__(self, x):
        return eval_superlinear(self, x)

    def __neg__(self) -> MaxOfLinear:
        return MaxOfLinear(-self.generators)


@dataclass(frozen=True, eq=False)
class DCPair:
    """``p = plus - minus`` with both parts sublinear."""

    plus: MaxOfLinear
    minus: MaxOfLinear

    def __post_init__(self):
        plus = self.plus if isinstance(self.plus, MaxOfLinear) else MaxOfLinear(self.plus)
        minus = self.minus if isinstance(self.minus, MaxOfLinear) else MaxOfLinear(self.minus, plus.dim)
        if plus.dim != minus.dim:
            raise MalformedInputError(f"DC parts have dimensions {plus.dim} and {minus.dim}")
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    @property
    def dim(self) -> int:
        return self.plus.dim

    def __call__(self, x):
        return eval_dc(self, x)

    def __eq__(self, other):
        return isinstance(other, DCPair) and self.plus == other.plus and self.minus == other.minus

    def __neg__(self) -> "DCPair":
        return dc_neg(self)

    def reduced(self, tol: Tolerances | None = None) -> "DCPair":
        return DCPair(self.plus.reduced(tol), self.minus.reduced(tol))


@dataclass(frozen=True, eq=False)
class SaddleFamily:
    """Two-index family of vectors ``a_is`` stored as an ``(I, S, n)`` array.

    Rows ``i`` index the sublinear pieces ``x -> max_s <a_is, x>``; columns
    ``s`` index the superlinear pieces ``x -> min_i <a_is, x>``.
    """

    entries: np.ndarray

    def __post_init__(self):
        E = np.asarray(self.entries, dtype=float)
        if E.ndim == 2:
            # an (I, S) grid of scalars is a family in dimension one
            E = E[..., None]
        if E.ndim != 3 or min(E.shape) == 0:
            raise MalformedInputError(f"saddle entries must have shape (I, S, n), got {E.shape}")
        if not np.all(np.isfinite(E)):
            raise MalformedInputError("saddle entries must be finite")
        object.__setattr__(self, "entries", _frozen(E))

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence]) -> "SaddleFamily":
        """Build from a nested list ``grid[i][s] = a_is`` (scalars allowed for n = 1)."""
        rows = [len(r) for r in grid]
        if not rows or len(set(rows)) != 1:
            raise MalformedInputError(f"ragged saddle grid, row lengths {rows}")
        return cls(np.asarray(grid, dtype=float))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def dim(self) -> int:
        return self.entries.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.entries.shape

    def row(self, i: int) -> MaxOfLinear:
        return MaxOfLinear(self.entries[i])

    def column(self, s: int) -> MinOfLinear:
        return MinOfLinear(self.entries[:, s])

    def negated(self) -> "SaddleFamily":
        """Family ``a_is -> -a_si``; swaps the two readings and flips sign."""
        return SaddleFamily(-np.transpose(self.entries, (1, 0, 2)))

    def infsup(self, x):
        return eval_infsup(self, x)

    def supinf(self, x):
        return eval_supinf(self, x)

    def __eq__(self, other):
        return isinstance(other, SaddleFamily) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(("SaddleFamily", self.entries.shape, self.entries.tobytes()))


@dataclass(frozen=True, eq=False)
class ApproximationFamilies:
    """Finite upper (sublinear) and lower (superlinear) approximant lists."""

    upper: tuple
    lower: tuple

    def __post_init__(self):
        upper = tuple(u if isinstance(u, MaxOfLinear) else MaxOfLinear(u) for u in self.upper)
        lower = tuple(l if isinstance(l, MinOfLinear) else MinOfLinear(l) for l in self.lower)
        if not upper or not lower:
            raise MalformedInputError("approximation families must both be nonempty")
        dims = {f.dim for f in upper + lower}
        if len(dims) != 1:
            raise MalformedInputError(f"approximants have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)

    @property
    def dim(self) -> int:
        return self.upper[0].dim

    def inf_upper(self, x):
        """Lower envelope of the upper approximants."""
        return np.min([u(x) for u in self.upper], axis=0)

    def sup_lower(self, x):
        """Upper envelope of the lower approximants."""
        return np.max([l(x) for l in self.lower], axis=0)

    def __eq__(self, other):
        return (
            isinstance(other, ApproximationFamilies)
            and self.upper == other.upper
            and self.lower == other.lower
        )


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------


def eval_sublinear(phi: MaxOfLinear, x):
    X, single = _points_of(x, phi.dim)
    return _out(np.max(X @ phi.generators.T, axis=1), single)


def eval_superlinear(psi: MinOfLinear, x):
    X, single = _points_of(x, psi.dim)
    return _out(np.min(X @ psi.generators.T, axis=1), single)


def eval_dc(p: DCPair, x):
    X, single = _points_of(x, p.dim)
    vals = np.max(X @ p.plus.generators.T, axis=1) - np.max(X @ p.minus.generators.T, axis=1)
    return _out(vals, single)


def _grid_values(F: SaddleFamily, x):
    X, single = _points_of(x, F.dim)
    # (k, I, S)
    return np.einsum("isn,kn->kis", F.entries, X), single


def eval_infsup(F: SaddleFamily, x):
    """``min_i max_s <a_is, x>``."""
    G, single = _grid_values(F, x)
    return _out(G.max(axis=2).min(axis=1), single)


def eval_supinf(F: SaddleFamily, x):
    """``max_s min_i <a_is, x>``."""
    G, single = _grid_values(F, x)
    return _out(G.min(axis=1).max(axis=1), single)


# --------------------------------------------------------------------------
# Vector-lattice operations on DC pairs
# --------------------------------------------------------------------------


def _check_dims(p: DCPair, q: DCPair):
    if p.dim != q.dim:
        raise MalformedInputError(f"DC pairs have dimensions {p.dim} and {q.dim}")


def _msum(a: MaxOfLinear, b: MaxOfLinear, reduce: bool, tol) -> MaxOfLinear:
    G = minkowski_sum(a.generators, b.generators)
    return MaxOfLinear(minimal_generators(G, tol) if reduce else G)


def _union(a: MaxOfLinear, b: MaxOfLinear, reduce: bool, tol) -> MaxOfLinear:
    G = np.vstack([a.generators, b.generators])
    return MaxOfLinear(minimal_generators(G, tol) if reduce else G)


def dc_add(p: DCPair, q: DCPair, reduce: bool = False, tol: Tolerances | None = None) -> DCPair:
    _check_dims(p, q)
    return DCPair(_msum(p.plus, q.plus, reduce, tol), _msum(p.minus, q.minus, reduce, tol))


def dc_neg(p: DCPair) -> DCPair:
    return DCPair(p.minus, p.plus)


def dc_scale(p: DCPair, lam: float) -> DCPair:
    lam = float(lam)
    if not np.isfinite(lam):
        raise MalformedInputError("scale factor must be finite")
    if lam >= 0:
        return DCPair(MaxOfLinear(lam * p.plus.generators), MaxOfLinear(lam * p.minus.generators))
    return DCPair(MaxOfLinear(-lam * p.minus.generators), MaxOfLinear(-lam * p.plus.generators))


def dc_max(p: DCPair, q: DCPair, reduce: bool = False, tol: Tolerances | None = None) -> DCPair:
    """Pointwise maximum, via max(p, q) = max(p+ + q-, q+ + p-) - (p- + q-)."""
    _check_dims(p, q)
    left = _msum(p.plus, q.minus, reduce, tol)
    right = _msum(q.plus, p.minus, reduce, tol)
    return DCPair(_union(left, right, reduce, tol), _msum(p.minus, q.minus, reduce, tol))


def dc_min(p: DCPair, q: DCPair, reduce: bool = False, tol: Tolerances | None = None) -> DCPair:
    return dc_neg(dc_max(dc_neg(p), dc_neg(q), reduce, tol))
