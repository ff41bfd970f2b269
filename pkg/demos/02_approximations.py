# %% [markdown]
# # Building a family from upper and lower approximations
#
# Given sublinear upper approximants (rows) and superlinear lower
# approximants (columns) of the same function, each entry is a common
# point of a subdifferential and a superdifferential, found by LP.

# %%
import numpy as np

from saddlerep import (
    ApproximationFamilies,
    ConstructionError,
    MaxOfLinear,
    MinOfLinear,
    build_from_approximations,
    exhaustive_families,
    random_dc,
    validate_sandwich,
)

p = random_dc(seed=3, n=2, max_plus=5, max_minus=5, coord_bound=2.0)
fams = exhaustive_families(p)
print(len(fams.upper), "upper and", len(fams.lower), "lower approximants")

F = build_from_approximations(fams)
print("family shape", F.shape, "sandwich holds:", validate_sandwich(F, fams))

# %%
X = np.random.default_rng(0).normal(size=(1000, 2))
print("max |infsup - p| =", np.max(np.abs(F.infsup(X) - p(X))))
print("max |supinf - p| =", np.max(np.abs(F.supinf(X) - p(X))))

# %% [markdown]
# If some lower approximant exceeds some upper one somewhere, the two
# polytopes are disjoint and the separating direction shows where.

# %%
broken = ApproximationFamilies((MaxOfLinear([-1.0, 1.0]),), (MinOfLinear([5.0]),))
try:
    build_from_approximations(broken)
except ConstructionError as exc:
    d = exc.certificate.direction
    print(exc)
    print("at x =", -d, "upper", broken.upper[0](-d), "< lower", broken.lower[0](-d))
