# %% [markdown]
# # Saddle family back to a DC pair
#
# The min over rows of sublinear functions g_i equals
# sum_i g_i - max_j sum_{i != j} g_i, both terms sublinear.

# %%
import numpy as np

from saddlerep import eval_dc, from_dc, random_dc, saddle_to_dc

p = random_dc(seed=11, n=3, max_plus=6, max_minus=6, coord_bound=5.0)
F = from_dc(p)
q = saddle_to_dc(F)
print("original generators:", len(p.plus), "/", len(p.minus))
print("recovered generators:", len(q.plus), "/", len(q.minus))

X = np.random.default_rng(1).normal(size=(2000, 3))
print("max |q - p| =", np.max(np.abs(eval_dc(q, X) - eval_dc(p, X))))

# %% [markdown]
# The recovered pair is usually larger (Minkowski sums), but any pair that
# represents the same function is equally valid: DC decompositions are
# unique only up to adding a common sublinear term.
