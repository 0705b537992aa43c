"""Garner stems and exact decision procedures for stem and block conditions.

Applying a T-vector ``v`` to an integer ``x`` step by step (regardless of
the actual parity of ``x``) is the affine map ``(3**a x + r) / 2**len(v)``.
Comparing ``T_v(x)`` with ``T_v'(x + 1)`` therefore reduces to a linear
equation in ``x``, which makes "for every integer x" conditions decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import MapKind
from .parity import ParityVector, affine_of_vector


@dataclass(frozen=True)
class StemPair:
    s: ParityVector
    s_prime: ParityVector
    index: int | None = None


def garner_stem(i: int) -> StemPair:
    """``s_i = <0, 1 x i, 0, 1>`` and ``s_i' = <1, 1 x i, 0, 0>`` as T-vectors."""
    if i < 0:
        raise ValueError("stem index must be non-negative")
    ones = (1,) * i
    return StemPair(ParityVector((0, *ones, 0, 1), MapKind.T),
                    ParityVector((1, *ones, 0, 0), MapKind.T), i)


@dataclass(frozen=True)
class SolutionSet:
    """Integer solutions of a linear equation: none, every integer, or one value."""

    kind: str
    x: int | None = None

    @classmethod
    def single(cls, x: int) -> SolutionSet:
        return cls("one", x)

    def __contains__(self, x: int) -> bool:
        return self.kind == "all" or (self.kind == "one" and self.x == x)

    def __str__(self) -> str:
        return str(self.x) if self.kind == "one" else self.kind


SolutionSet.NONE = SolutionSet("none")  # type: ignore[attr-defined]
SolutionSet.ALL = SolutionSet("all")  # type: ignore[attr-defined]


def _check_pair(v: ParityVector, v_prime: ParityVector) -> None:
    if v.map is not MapKind.T or v_prime.map is not MapKind.T:
        raise ValueError("stem conditions are stated for T-vectors")
    if len(v) != len(v_prime):
        raise ValueError(f"length mismatch: {len(v)} vs {len(v_prime)}")


def _difference(v: ParityVector, v_prime: ParityVector) -> tuple[int, int, int]:
    """``(slope, offset, j)`` with ``T_v(x) - T_v'(x+1) == (slope*x + offset) / 2**j``."""
    m, mp = affine_of_vector(v), affine_of_vector(v_prime)
    return 3 ** m.a - 3 ** mp.a, m.r - 3 ** mp.a - mp.r, len(v)


def decide_all_x(v: ParityVector, v_prime: ParityVector, target: int) -> SolutionSet:
    """All integers x with ``T_v(x) - T_v'(x + 1) == target``."""
    _check_pair(v, v_prime)
    slope, offset, j = _difference(v, v_prime)
    rhs = target * (1 << j) - offset
    if slope == 0:
        return SolutionSet.ALL if rhs == 0 else SolutionSet.NONE
    if rhs % slope:
        return SolutionSet.NONE
    return SolutionSet.single(rhs // slope)


@dataclass(frozen=True)
class StemVerdict:
    equality_holds: bool
    violated_prefix_length: int | None = None
    witness_x: int | None = None

    @property
    def holds(self) -> bool:
        return self.equality_holds and self.violated_prefix_length is None

    def __bool__(self) -> bool:
        return self.holds


def _prefix_violation(v: ParityVector, v_prime: ParityVector) -> int | None:
    """Smallest positive x where the prefixes land equal or one apart, if any."""
    slope, offset, j = _difference(v, v_prime)
    if slope == 0:
        # constant difference: violated for every x, witness x = 1
        return 1 if Fraction(offset, 1 << j) in (-1, 0, 1) else None
    hits = []
    for target in (-1, 0, 1):
        sol = decide_all_x(v, v_prime, target)
        if sol.kind == "one" and sol.x >= 1:
            hits.append(sol.x)
    return min(hits) if hits else None


def is_corresponding_stem_pair(s: ParityVector, s_prime: ParityVector) -> StemVerdict:
    """Check the corresponding-stem conditions for ``(s, s')``.

    Equality ``T_s(x) = T_s'(x + 1)`` must hold identically.  Each proper,
    non-empty pair of equal-length prefixes must never put the two orbits at
    distance 0 or 1 for a positive integer x.
    """
    _check_pair(s, s_prime)
    if len(s) == 0:
        raise ValueError("empty vectors are not stems")
    equality = decide_all_x(s, s_prime, 0) == SolutionSet.ALL
    for length in range(1, len(s)):
        x = _prefix_violation(s[:length], s_prime[:length])
        if x is not None:
            return StemVerdict(equality, length, x)
    return StemVerdict(equality)


def is_block_prefix(b: ParityVector, b_prime: ParityVector) -> bool:
    """True iff ``T_b(x) + 1 == T_b'(x + 1)`` for every integer x."""
    _check_pair(b, b_prime)
    if len(b) == 0:
        raise ValueError("empty vectors are not block prefixes")
    return decide_all_x(b, b_prime, -1) == SolutionSet.ALL


def tail_stem_index(w: ParityVector, w_prime: ParityVector) -> tuple[int, bool] | None:
    """Largest i such that the vectors end in ``(s_i, s_i')``.

    Returns ``(i, swapped)`` where ``swapped`` means ``w`` ends in ``s_i'``
    and ``w_prime`` in ``s_i``; ``None`` when no Garner stem fits.
    """
    for i in range(min(len(w), len(w_prime)) - 3, -1, -1):
        pair = garner_stem(i)
        if w.endswith(pair.s) and w_prime.endswith(pair.s_prime):
            return i, False
        if w.endswith(pair.s_prime) and w_prime.endswith(pair.s):
            return i, True
    return None
