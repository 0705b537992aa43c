"""Collatz dynamics under the C and T maps.

``C(n) = n/2`` for even n and ``3n + 1`` for odd n; ``T`` folds the forced
halving after an odd step into ``(3n + 1)/2``.  All arithmetic is checked
against the unsigned 128-bit range so a runaway orbit raises instead of
silently producing a wrong height.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

U128_MAX = (1 << 128) - 1
DEFAULT_STEP_CAP = 100_000

# largest odd value whose 3n+1 still fits in int64
_I64_ODD_LIMIT = ((1 << 63) - 2) // 3
_U16_MAX = np.iinfo(np.uint16).max


class CollatzError(Exception):
    """Base class for domain errors raised by collatz_lab."""


class ArithmeticOverflowError(CollatzError, OverflowError):
    def __init__(self, value: int, start: int | None = None):
        self.value = value
        self.start = start
        where = f" (trajectory of {start})" if start is not None else ""
        super().__init__(f"3n+1 overflows 128 bits at n={value}{where}")


class NonConvergenceError(CollatzError):
    def __init__(self, start: int, partial: list[int], step_cap: int):
        self.start = start
        self.partial = partial
        self.step_cap = step_cap
        super().__init__(
            f"trajectory of {start} did not reach 1 within {step_cap} steps")


class MapKind(enum.Enum):
    C = "C"
    T = "T"

    @classmethod
    def parse(cls, text: str | MapKind) -> MapKind:
        if isinstance(text, MapKind):
            return text
        try:
            return cls(text.upper())
        except ValueError:
            raise ValueError(f"unknown map {text!r}, expected 'c' or 't'") from None


def _require_positive(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"expected an integer, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")


def c_step(n: int) -> int:
    if n & 1:
        m = 3 * n + 1
        if m > U128_MAX:
            raise ArithmeticOverflowError(n)
        return m
    return n >> 1


def t_step(n: int) -> int:
    if n & 1:
        m = 3 * n + 1
        if m > U128_MAX:
            raise ArithmeticOverflowError(n)
        return m >> 1
    return n >> 1


def step_function(kind: MapKind | str):
    return c_step if MapKind.parse(kind) is MapKind.C else t_step


@dataclass(frozen=True)
class Trajectory:
    start: int
    values: tuple[int, ...]
    map: MapKind

    def __post_init__(self):
        if not self.values or self.values[0] != self.start:
            raise ValueError("trajectory must begin at its start value")
        if self.values[-1] != 1:
            raise ValueError("trajectory must end at 1")
        step = step_function(self.map)
        for x, y in zip(self.values, self.values[1:]):
            if x > U128_MAX or step(x) != y:
                raise ValueError(f"{x} -> {y} is not a {self.map.value} step")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def steps(self) -> int:
        return len(self.values) - 1


def _iterate_to_one(n: int, step, step_cap: int) -> list[int]:
    values = [n]
    x = n
    try:
        while x != 1:
            if len(values) > step_cap:
                raise NonConvergenceError(n, values, step_cap)
            x = step(x)
            values.append(x)
    except ArithmeticOverflowError as exc:
        raise ArithmeticOverflowError(exc.value, start=n) from None
    return values


def trajectory(n: int, map: MapKind | str = MapKind.C,
               step_cap: int = DEFAULT_STEP_CAP) -> Trajectory:
    """Iterate ``map`` from ``n`` until 1 is reached.

    The terminal 1 is included and never stepped past, so ``trajectory(1)``
    is just ``[1]``.  Raises :class:`NonConvergenceError` (carrying the
    partial orbit) if 1 is not reached within ``step_cap`` steps.
    """
    _require_positive(n)
    kind = MapKind.parse(map)
    values = _iterate_to_one(int(n), step_function(kind), step_cap)
    # values are correct by construction; skip the re-validation pass
    traj = object.__new__(Trajectory)
    object.__setattr__(traj, "start", int(n))
    object.__setattr__(traj, "values", tuple(values))
    object.__setattr__(traj, "map", kind)
    return traj


def iterate(n: int, k: int, map: MapKind | str = MapKind.C) -> int:
    """Apply the map ``k`` times.  Unlike :func:`trajectory`, this passes through 1."""
    step = step_function(map)
    x = n
    for _ in range(k):
        x = step(x)
    return x


def height(n: int, step_cap: int = DEFAULT_STEP_CAP,
           cache: HeightCache | None = None) -> int:
    """Number of C steps needed to reach 1 from ``n``."""
    _require_positive(n)
    n = int(n)
    x, steps = n, 0
    try:
        while x != 1:
            if cache is not None and x <= cache.limit:
                return steps + int(cache.heights[x])
            if steps >= step_cap:
                raise NonConvergenceError(n, [n, x], step_cap)
            x = c_step(x)
            steps += 1
    except ArithmeticOverflowError as exc:
        raise ArithmeticOverflowError(exc.value, start=n) from None
    return steps


@dataclass(frozen=True, eq=False)
class HeightCache:
    """Dense table of heights for ``1 <= n <= limit``; index 0 is unused."""

    limit: int
    heights: np.ndarray

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise IndexError(f"{n} outside cache range [1, {self.limit}]")
        return int(self.heights[n])

    def height(self, n: int, step_cap: int = DEFAULT_STEP_CAP) -> int:
        if 1 <= n <= self.limit:
            return int(self.heights[n])
        return height(n, step_cap=step_cap, cache=self)

    def heights_of(self, ns: np.ndarray, step_cap: int = DEFAULT_STEP_CAP) -> np.ndarray:
        """Vectorised heights for an array of positive integers (any size)."""
        ns = np.asarray(ns, dtype=np.int64)
        out = np.empty(ns.shape, dtype=np.int64)
        inside = ns <= self.limit
        out[inside] = self.heights[ns[inside]]
        if not inside.all():
            out[~inside] = _descend(ns[~inside], self.limit + 1, self.heights,
                                    step_cap)
        return out


def _descend(starts: np.ndarray, floor: int, table: np.ndarray,
             step_cap: int) -> np.ndarray:
    """Heights of ``starts`` by stepping each until it drops below ``floor``.

    ``table`` must hold final heights for every index below ``floor``.
    Values that would overflow int64 are finished with exact Python ints.
    """
    n = starts.size
    result = np.zeros(n, dtype=np.int64)
    cur = starts.astype(np.int64, copy=True)
    idx = np.arange(n)
    steps = 0
    while idx.size:
        landed = cur < floor
        if landed.any():
            result[idx[landed]] = steps + table[cur[landed]]
            keep = ~landed
            cur, idx = cur[keep], idx[keep]
            if not idx.size:
                break
        if steps >= step_cap:
            bad = int(starts[idx[0]])
            raise NonConvergenceError(bad, [bad], step_cap)
        odd = (cur & 1).astype(bool)
        big = odd & (cur > _I64_ODD_LIMIT)
        if big.any():
            for i, x in zip(idx[big], cur[big]):
                result[i] = steps + _slow_descend(int(x), floor, table,
                                                  step_cap - steps,
                                                  int(starts[i]))
            keep = ~big
            cur, idx, odd = cur[keep], idx[keep], odd[keep]
        cur = np.where(odd, 3 * cur + 1, cur >> 1)
        steps += 1
    return result


def _slow_descend(x: int, floor: int, table: np.ndarray, budget: int,
                  start: int) -> int:
    steps = 0
    try:
        while x >= floor:
            if steps >= budget:
                raise NonConvergenceError(start, [start, x], budget)
            x = c_step(x)
            steps += 1
    except ArithmeticOverflowError as exc:
        raise ArithmeticOverflowError(exc.value, start=start) from None
    return steps + int(table[x])


def build_height_cache(limit: int, step_cap: int = DEFAULT_STEP_CAP,
                       block: int = 1 << 20) -> HeightCache:
    """Fill heights for ``1..limit``.

    Works upward in blocks ``[lo, hi)``: every start in the block is iterated
    (vectorised) only until it falls below ``lo``, where the already-filled
    prefix supplies the rest of its height.
    """
    _require_positive(limit)
    table = np.zeros(limit + 1, dtype=np.int64)
    lo = 2
    while lo <= limit:
        hi = min(limit + 1, 2 * lo, lo + block)
        table[lo:hi] = _descend(np.arange(lo, hi, dtype=np.int64), lo, table,
                                step_cap)
        lo = hi
    top = int(table.max()) if limit > 1 else 0
    if top > _U16_MAX:
        raise OverflowError(f"height {top} does not fit the 16-bit cache")
    return HeightCache(limit, table.astype(np.uint16))
