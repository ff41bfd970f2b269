"""Central tolerance configuration.

Every module reads its thresholds from a :class:`Tolerances` record. Public
functions take an optional ``tol`` argument and fall back to
:data:`DEFAULT_TOLERANCES`.
"""
from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by the whole package.

    Attributes
    ----------
    lp : float
        Feasibility / optimality slack of the simplex kernel and of hull
        membership decisions.
    nearest : float
        Slack in the Wolfe optimality criterion of the minimum-norm point.
    dup : float
        Max-norm distance under which two generators are merged.
    verify : float
        Largest inf-sup minus sup-inf gap still accepted as a saddle.
    """

    lp: float = 1e-9
    nearest: float = 1e-9
    dup: float = 1e-12
    verify: float = 1e-7

    def __post_init__(self):
        for name in ("lp", "nearest", "dup", "verify"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"tolerance {name!r} must be positive, got {value!r}")

    def with_(self, **changes) -> "Tolerances":
        return replace(self, **changes)


DEFAULT_TOLERANCES = Tolerances()


def resolve(tol: Tolerances | None) -> Tolerances:
    return DEFAULT_TOLERANCES if tol is None else tol
