"""
Counterexample census and the 2^19 m + 3067 family
==================================================

Scan a range for same-height pairs, classify each one, and check the
infinite family built on 3067.
"""

# %%
import numpy as np

from collatz_lab import scan_range, verify_family

# %%
report = scan_range(2, 10**6)
print(report.to_json())
print(f"ratio {float(report.ratio):.5f}")

# %% [markdown]
# How counterexamples thin out (or not) across the range.

# %%
cx = np.array(report.counterexample_list)
counts, edges = np.histogram(cx, bins=10, range=(0, 10**6))
for lo, c in zip(edges[:-1].astype(int), counts):
    print(f"{lo:>7}  {c}")

# %% [markdown]
# Numbers agreeing with 3067 and 3068 mod 2^19 share their first 19
# T-steps, which carries the whole merge along.

# %%
fam = verify_family(3067, 19, 100)
print(fam.checked, fam.all_same_height, fam.all_counterexamples, fam.parity_agrees)
