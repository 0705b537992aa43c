"""
Trajectories, heights and parity vectors
========================================

Walk through the two maps, the height of a number and the exact affine
action of a parity vector.
"""

# %%
import numpy as np

from collatz_lab import (MapKind, affine_of_vector, build_height_cache, height,
                         parity_prefix, parity_vector, trajectory)

# %% [markdown]
# The plain map C halves even numbers and sends odd n to 3n+1.  T folds the
# halving that always follows an odd step into the step itself.

# %%
print("C:", list(trajectory(3, MapKind.C)))
print("T:", list(trajectory(3, MapKind.T)))
print("height(3) =", height(3), " height(27) =", height(27))

# %% [markdown]
# Parity vectors record odd/even along the way.  In a C-vector every 1 is
# followed by a 0, since 3n+1 is even for odd n.

# %%
print(parity_vector(3, MapKind.C), parity_vector(3, MapKind.T))

# %% [markdown]
# A prefix of length k acts on its starting value as x -> (3^a x + r) / 2^d.

# %%
w = parity_prefix(27, 10, MapKind.T)
m = affine_of_vector(w)
print(w, "->", m, "  m(27) =", m(27))

# %% [markdown]
# Heights of everything below a bound come from a dense cache.  Here are the
# numbers below 10^6 that set a new height record.

# %%
cache = build_height_cache(10**6)
h = cache.heights[1:].astype(np.int64)
records = np.flatnonzero(h == np.maximum.accumulate(h)) + 1
fresh = records[np.r_[True, np.diff(h[records - 1]) > 0]]
print(fresh[-8:], h[fresh[-8:] - 1])
