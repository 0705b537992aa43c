"""Parity vectors, the C/T conversion, the Terras correspondence and affine forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (DEFAULT_STEP_CAP, MapKind, _require_positive, step_function,
                   trajectory)


class MalformedVectorError(ValueError):
    pass


@dataclass(frozen=True)
class ParityVector:
    bits: tuple[int, ...]
    map: MapKind

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise MalformedVectorError(f"bits must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "map", MapKind.parse(self.map))
        if self.map is MapKind.C:
            for i in range(len(bits) - 1):
                if bits[i] == 1 and bits[i + 1] == 1:
                    raise MalformedVectorError(
                        f"C-vector has a 1 followed by 1 at position {i}")

    @classmethod
    def parse(cls, text: str, map: MapKind | str | None = None) -> ParityVector:
        """Read ``"101"`` or a prefixed ``"C:101"``; an empty body is the empty vector."""
        text = text.strip()
        if len(text) >= 2 and text[1] == ":" and text[0] in "CcTt":
            prefix, text = MapKind.parse(text[0]), text[2:]
            if map is not None and MapKind.parse(map) is not prefix:
                raise MalformedVectorError(f"map prefix {prefix.value} conflicts with {map}")
            map = prefix
        if map is None:
            raise MalformedVectorError("map kind not given")
        if any(ch not in "01" for ch in text):
            raise MalformedVectorError(f"not a 0/1 string: {text!r}")
        return cls(tuple(int(ch) for ch in text), map)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return ParityVector(self.bits[i], self.map)
        return self.bits[i]

    def __add__(self, other: ParityVector) -> ParityVector:
        if other.map is not self.map:
            raise ValueError("cannot concatenate C- and T-vectors")
        return ParityVector(self.bits + other.bits, self.map)

    def endswith(self, tail) -> bool:
        tail = tuple(tail)
        return len(tail) <= len(self.bits) and self.bits[len(self.bits) - len(tail):] == tail

    @property
    def ones(self) -> int:
        return sum(self.bits)

    def to_string(self) -> str:
        return "".join(map(str, self.bits))

    def __str__(self) -> str:
        return f"{self.map.value}:{self.to_string()}"


def parity_vector(n: int, map: MapKind | str = MapKind.C,
                  step_cap: int = DEFAULT_STEP_CAP) -> ParityVector:
    """Parities of the whole trajectory of ``n``, terminal 1 included."""
    traj = trajectory(n, map, step_cap)
    return ParityVector(tuple(x & 1 for x in traj.values), traj.map)


def parity_prefix(n: int, k: int, map: MapKind | str = MapKind.C) -> ParityVector:
    """Parities of ``n, f(n), ..., f^(k-1)(n)``; iterates straight through 1."""
    _require_positive(n)
    if k < 0:
        raise ValueError("k must be non-negative")
    step = step_function(map)
    bits = []
    x = int(n)
    for _ in range(k):
        bits.append(x & 1)
        x = step(x)
    return ParityVector(tuple(bits), map)


def expand_t_to_c(w: ParityVector) -> ParityVector:
    if w.map is not MapKind.T:
        raise ValueError("expected a T-vector")
    out: list[int] = []
    for b in w.bits:
        out.extend((1, 0) if b else (0,))
    return ParityVector(tuple(out), MapKind.C)


def compress_c_to_t(w: ParityVector) -> ParityVector:
    """Collapse each ``1,0`` of a C-vector to ``1``.  A lone trailing 1 stays 1."""
    if w.map is not MapKind.C:
        raise ValueError("expected a C-vector")
    bits = w.bits
    out: list[int] = []
    i = 0
    while i < len(bits):
        if bits[i] == 1:
            if i + 1 < len(bits) and bits[i + 1] != 0:
                raise MalformedVectorError(f"1 not followed by 0 at position {i}")
            out.append(1)
            i += 2
        else:
            out.append(0)
            i += 1
    return ParityVector(tuple(out), MapKind.T)


def _t_any(x: int) -> int:
    # T on all integers (floor semantics are exact here: odd 3x+1 is even)
    return (3 * x + 1) >> 1 if x & 1 else x >> 1


def terras_encode(w: ParityVector) -> int:
    """The residue ``x mod 2**len(w)`` whose first ``len(w)`` T-parities are ``w``.

    Built one bit at a time: once ``x mod 2**j`` is fixed, the parity of
    ``T^j(x)`` is decided by bit ``j`` of ``x``, so flip it when it disagrees.
    """
    if w.map is not MapKind.T:
        raise ValueError("expected a T-vector")
    k = len(w)
    if k < 1:
        raise ValueError("empty vector has no residue")
    x = 0
    for j, want in enumerate(w.bits):
        y = x
        for _ in range(j):
            y = _t_any(y)
        if (y & 1) != want:
            x += 1 << j
    return x


def terras_decode(x: int, k: int) -> ParityVector:
    if k < 1:
        raise ValueError("k must be positive")
    if not 0 <= x < (1 << k):
        raise ValueError(f"residue {x} outside [0, 2**{k})")
    return parity_prefix(x or (1 << k), k, MapKind.T)


@dataclass(frozen=True)
class AffineMap:
    """``x -> (3**a * x + r) / 2**d``."""

    a: int = 0
    r: int = 0
    d: int = 0

    def then(self, other: AffineMap) -> AffineMap:
        """``other`` applied after ``self``."""
        # (3^a2 (3^a1 x + r1)/2^d1 + r2)/2^d2
        return AffineMap(self.a + other.a,
                         3 ** other.a * self.r + other.r * (1 << self.d),
                         self.d + other.d)

    def __call__(self, x) -> Fraction:
        return Fraction(3 ** self.a * x + self.r, 1 << self.d)

    def inverse(self, y) -> Fraction:
        return Fraction((1 << self.d) * Fraction(y) - self.r, 3 ** self.a)


_STEPS = {
    (MapKind.C, 0): AffineMap(0, 0, 1),
    (MapKind.C, 1): AffineMap(1, 1, 0),
    (MapKind.T, 0): AffineMap(0, 0, 1),
    (MapKind.T, 1): AffineMap(1, 1, 1),
}


def affine_of_vector(w: ParityVector) -> AffineMap:
    m = AffineMap()
    for b in w.bits:
        m = m.then(_STEPS[w.map, b])
    return m


def affine_apply(m: AffineMap, x: int) -> tuple[Fraction, bool]:
    """Evaluate ``m`` at ``x`` exactly; the flag says whether the result is an integer."""
    value = m(x)
    return value, value.denominator == 1
