# %% [markdown]
# # Sign tests and steepest descent
#
# Nonnegativity of min_i max_s <a_is, x> holds exactly when every row
# hull contains the origin; the farthest row hull gives the steepest
# descent direction.

# %%
import numpy as np

from saddlerep import (
    DCPair,
    MaxOfLinear,
    SphereSampler,
    brute_force_extrema,
    check_nonnegative,
    check_nonpositive,
    from_dc,
    lipschitz_constant,
    steepest_ascent,
    steepest_descent,
)

F = from_dc(DCPair(MaxOfLinear([[1, 0], [-1, 0]]), MaxOfLinear([[0, 0.5], [0, -0.5]])))
neg = check_nonnegative(F)
print("nonnegative:", neg.holds, "| row", neg.index, "witness", neg.witness, "value", neg.value)
print("nonpositive:", check_nonpositive(F).holds)

# %%
d, a = steepest_descent(F), steepest_ascent(F)
print("descent", d.direction.round(6), d.value)
print("ascent ", a.direction.round(6), a.value)

ext = brute_force_extrema(F, SphereSampler(2, 3600, scheme="angular-grid"))
print("dense grid min", ext.min_value, "max", ext.max_value)

# %% [markdown]
# Every entry norm bounds the slope, so |p(x)| <= M |x|.

# %%
M = lipschitz_constant(F).M
X = np.random.default_rng(2).normal(size=(500, 2))
print("M =", M, "| bound holds:", lipschitz_constant(F).holds_on(F, X))
