# %% [markdown]
# # From a DC pair to a saddle family
#
# A difference of two max-of-linear functions, here |x1| - 0.5 |x2|,
# becomes a grid of linear functions whose min-max and max-min agree.

# %%
import numpy as np

from saddlerep import DCPair, MaxOfLinear, eval_dc, from_dc, verify_saddle

p = DCPair(MaxOfLinear([[1, 0], [-1, 0]]), MaxOfLinear([[0, 0.5], [0, -0.5]]))
F = from_dc(p)
print("grid shape (rows, cols, n):", F.shape)
print(F.entries)

# %% [markdown]
# Rows are indexed by the generators of the subtracted part, columns by
# those of the positive part.

# %%
theta = np.linspace(0, 2 * np.pi, 9)[:-1]
X = np.column_stack([np.cos(theta), np.sin(theta)])
print(np.column_stack([theta, eval_dc(p, X), F.infsup(X), F.supinf(X)]).round(4))

# %%
rep = verify_saddle(F, exact2d=True)
print(f"max gap {rep.max_gap:.1e} over {rep.evaluated} directions, saddle: {rep.is_saddle}")

# %% [markdown]
# A grid that is *not* a saddle family: in one dimension
# min(max(x, -x), max(-x, x)) = |x| but max(min(x, -x), min(-x, x)) = -|x|.

# %%
from saddlerep import SaddleFamily

bad = SaddleFamily([[1.0, -1.0], [-1.0, 1.0]])
rep = verify_saddle(bad, exact2d=True)
print("gap", rep.max_gap, "at", rep.witness)
