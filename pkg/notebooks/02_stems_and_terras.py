"""
Garner stems and the Terras bijection
=====================================

Stems are the terminal parity patterns Garner proposed for merging pairs.
The deciders here settle stem claims symbolically for every x at once.
"""

# %%
from collatz_lab import (MapKind, ParityVector, decide_all_x, garner_stem,
                         is_block_prefix, is_corresponding_stem_pair, terras_decode,
                         terras_encode)

# %%
for i in range(4):
    p = garner_stem(i)
    print(i, p.s, p.s_prime, is_corresponding_stem_pair(p.s, p.s_prime).holds)

# %% [markdown]
# Each length-k T-vector is the parity pattern of exactly one residue class
# mod 2^k.  4 (mod 8) starts even, even, odd; 5 (mod 8) starts odd, even, even.

# %%
for x in range(8):
    print(x, terras_decode(x, 3))
print(terras_encode(ParityVector.parse("T:001")), terras_encode(ParityVector.parse("T:100")))

# %% [markdown]
# T_v(x) - T_v'(x+1) is linear in x, so "which x make it equal to t" has no
# answer, every answer, or exactly one.  The length-2 prefixes of s_1 meet
# only at x = -2, which is why prefix checks look at positive x alone.

# %%
s, sp = garner_stem(1).s, garner_stem(1).s_prime
print(decide_all_x(s, sp, 0), decide_all_x(s[:2], sp[:2], 0))
print(is_block_prefix(ParityVector.parse("T:10"), ParityVector.parse("T:01")))

# %% [markdown]
# Extending a stem by a common step keeps T_s(x) = T_s'(x+1) but the shorter
# prefix has already merged, so it is no longer a stem.

# %%
print(is_corresponding_stem_pair(ParityVector.parse("0010", MapKind.T),
                                 ParityVector.parse("1000", MapKind.T)))
