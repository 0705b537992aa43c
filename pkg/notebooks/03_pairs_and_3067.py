"""
Same-height pairs and the counterexample 3067
=============================================

Pairs n, n+1 of equal height merge.  Under Garner's rule they sit at
4 and 5 (mod 8) three steps before merging.  3067 is the first pair that
breaks the rule.
"""

# %%
from collatz_lab import analyze_pair, first_counterexample, merged_suffix_length
from collatz_lab.pairs import pair_orbits

# %%
pa = analyze_pair(12)
print(pa.coincide_step, pa.coincide_value, pa.mod8_compliant, pa.stem_index)

# %%
n = first_counterexample(10**4)
pa = analyze_pair(n)
print(n, pa.height_n, pa.coincide_step, pa.coincide_value)
print(pa.pre_vec_n)
print(pa.pre_vec_n1)

# %% [markdown]
# Three steps before the merge the two orbits are not neighbours at all.

# %%
a, b = pair_orbits(n)
k = pa.coincide_step
print(a[k - 3:], b[k - 3:])

# %% [markdown]
# Several later counterexamples funnel into the same merge at 1384.

# %%
for m in (4088, 6135, 32743):
    print(m, analyze_pair(m).coincide_value)
print(merged_suffix_length(3067, 4088, 6135), merged_suffix_length(3067, 32743))
