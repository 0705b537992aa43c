"""Analysis of a consecutive pair ``(n, n + 1)``.

If ``n`` and ``n + 1`` have the same height their C-trajectories merge at a
common step ``k``.  A pair that fits one of Garner's stems must, three steps
before merging, sit at ``x, x + 1`` (in some order) with the smaller value
``x = 4 (mod 8)``.  A same-height pair failing that test is a counterexample.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .core import (DEFAULT_STEP_CAP, CollatzError, HeightCache, MapKind,
                   _require_positive, c_step, height)
from .parity import ParityVector, affine_of_vector, compress_c_to_t
from .stems import tail_stem_index

_TAIL_LOW = (0, 0, 1)   # parities of 4 (mod 8): even, even, odd
_TAIL_HIGH = (1, 0, 0)  # parities of 5 (mod 8)


class DegeneratePairError(CollatzError):
    pass


class NotSameHeightError(CollatzError):
    pass


@dataclass(frozen=True)
class PairAnalysis:
    n: int
    height_n: int
    height_n1: int
    same_height: bool
    coincide_step: int | None = None
    coincide_value: int | None = None
    pre_vec_n: ParityVector | None = None
    pre_vec_n1: ParityVector | None = None
    mod8_compliant: bool = False
    degenerate: bool = False
    primitive: bool | None = None
    stem_index: int | None = None
    stem_swapped: bool | None = None
    counterexample: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pre_vec_n"] = self.pre_vec_n.to_string() if self.pre_vec_n else None
        d["pre_vec_n1"] = self.pre_vec_n1.to_string() if self.pre_vec_n1 else None
        return d


def _lockstep(n: int, step_cap: int) -> tuple[list[int], list[int]] | None:
    """Aligned C-orbits of n and n+1 up to and including their first common value."""
    a, b = [n], [n + 1]
    x, y = n, n + 1
    while x != y:
        if x == 1 or y == 1 or len(a) > step_cap:
            return None
        x, y = c_step(x), c_step(y)
        a.append(x)
        b.append(y)
    return a, b


def coincidence(n: int, step_cap: int = DEFAULT_STEP_CAP) -> tuple[int, int] | None:
    """Smallest ``k`` with ``C^k(n) == C^k(n+1)``, and that shared value."""
    _require_positive(n)
    orbits = _lockstep(int(n), step_cap)
    if orbits is None:
        return None
    a, _ = orbits
    return len(a) - 1, a[-1]


def _compliant_values(x: int, y: int) -> bool:
    return (x % 8 == 4 and y == x + 1) or (y % 8 == 4 and x == y + 1)


def mod8_compliance(n: int, k: int) -> bool:
    """Whether the step-``k-3`` values of ``n`` and ``n+1`` are ``4, 5 (mod 8)`` neighbours."""
    _require_positive(n)
    if k < 3:
        raise DegeneratePairError(f"pair {n}/{n + 1} merges at step {k} < 3")
    x, y = int(n), int(n) + 1
    for _ in range(k - 3):
        x, y = c_step(x), c_step(y)
    if c_step(c_step(c_step(x))) != c_step(c_step(c_step(y))):
        raise ValueError(f"{n} and {n + 1} do not agree at step {k}")
    return _compliant_values(x, y)


def t_form(pre_vec: ParityVector) -> ParityVector:
    """T-vector covering the same ground as a pre-merge C-vector.

    The merge value is always even (one side arrives by ``3x+1``, the other
    by halving), so its 0 is appended before collapsing ``1,0`` pairs; this
    keeps both sides' T-steps aligned with the T-orbit merge.
    """
    return compress_c_to_t(pre_vec + ParityVector((0,), MapKind.C))


def analyze_pair(n: int, cache: HeightCache | None = None,
                 step_cap: int = DEFAULT_STEP_CAP) -> PairAnalysis:
    _require_positive(n)
    n = int(n)
    if cache is not None:
        hn, hn1 = cache.height(n, step_cap), cache.height(n + 1, step_cap)
    else:
        hn, hn1 = height(n, step_cap), height(n + 1, step_cap)
    if hn != hn1:
        return PairAnalysis(n, hn, hn1, False)

    a, b = _lockstep(n, step_cap)
    k = len(a) - 1
    vec_n = ParityVector(tuple(x & 1 for x in a[:k]), MapKind.C)
    vec_n1 = ParityVector(tuple(x & 1 for x in b[:k]), MapKind.C)
    primitive = all(abs(x - y) != 1 for x, y in zip(a[1:k], b[1:k]))
    degenerate = k < 3
    compliant = not degenerate and _compliant_values(a[k - 3], b[k - 3])
    stem = tail_stem_index(t_form(vec_n), t_form(vec_n1))
    return PairAnalysis(
        n, hn, hn1, True,
        coincide_step=k,
        coincide_value=a[k],
        pre_vec_n=vec_n,
        pre_vec_n1=vec_n1,
        mod8_compliant=compliant,
        degenerate=degenerate,
        primitive=primitive,
        stem_index=stem[0] if stem else None,
        stem_swapped=stem[1] if stem else None,
        counterexample=not degenerate and not compliant,
    )


def pre_coincidence_values(n: int, step_cap: int = DEFAULT_STEP_CAP) -> list[int]:
    """``C^0(n), ..., C^(k-1)(n)`` up to the step where ``n`` merges with its partner.

    The partner is ``n + 1`` when that pair has equal heights, otherwise
    ``n - 1`` (so 13 reports its run alongside 12).
    """
    _require_positive(n)
    n = int(n)
    if height(n, step_cap) == height(n + 1, step_cap):
        return pair_orbits(n, step_cap)[0][:-1]
    if n > 1 and height(n - 1, step_cap) == height(n, step_cap):
        return pair_orbits(n - 1, step_cap)[1][:-1]
    raise NotSameHeightError(f"{n} shares its height with neither neighbour")


def pair_orbits(n: int, step_cap: int = DEFAULT_STEP_CAP) -> tuple[list[int], list[int]]:
    """Both aligned orbits of a same-height pair, each ending at the merge value."""
    _require_positive(n)
    if height(n, step_cap) != height(n + 1, step_cap):
        raise NotSameHeightError(f"{n} and {n + 1} have different heights")
    return _lockstep(int(n), step_cap)


def merged_suffix_length(*ns: int) -> int:
    """Length of the tail shared by the merge paths of several same-height pairs.

    A pair's merge path is its sequence of aligned value pairs
    ``{C^j(n), C^j(n+1)}`` for ``j <= k``; the final entry is the merge value
    itself.  The result counts how many trailing entries all paths share.
    """
    paths = []
    for n in ns:
        a, b = pair_orbits(n)
        paths.append([frozenset(p) for p in zip(a, b)])
    length = 0
    while all(length < len(p) for p in paths):
        tails = {p[-1 - length] for p in paths}
        if len(tails) != 1:
            break
        length += 1
    return length


def theorem_8k4_check(n: int) -> bool:
    """Check that ``n = 8k+4 > 4`` and ``n + 1`` meet at ``6k + 4`` after three steps."""
    _require_positive(n)
    if n <= 4 or n % 8 != 4:
        raise ValueError(f"need n > 4 with n = 4 (mod 8), got {n}")
    k = (n - 4) // 8
    low = [8 * k + 4, 4 * k + 2, 2 * k + 1, 6 * k + 4]
    high = [8 * k + 5, 24 * k + 16, 12 * k + 8, 6 * k + 4]
    x, y = n, n + 1
    for want_x, want_y in zip(low[1:], high[1:]):
        x, y = c_step(x), c_step(y)
        if (x, y) != (want_x, want_y):
            return False
    return x == y


def step_k3_preimages(coincide_value: int) -> tuple[int, int]:
    """Undo ``<0,0,1>`` and ``<1,0,0>`` from the merge value ``j``.

    These are ``(4j - 1)/3 - 1`` and ``(4j - 1)/3``: the 4 (mod 8) and
    5 (mod 8) members three steps before a compliant merge.
    """
    low = affine_of_vector(ParityVector(_TAIL_LOW, MapKind.C)).inverse(coincide_value)
    high = affine_of_vector(ParityVector(_TAIL_HIGH, MapKind.C)).inverse(coincide_value)
    if low.denominator != 1 or high.denominator != 1:
        raise ValueError(f"{coincide_value} has no integral step-3 preimages")
    return int(low), int(high)
