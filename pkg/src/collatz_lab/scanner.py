"""Range census of same-height consecutive pairs.

The range is cut into fixed-size chunks; each chunk is scanned with numpy
in lockstep (every same-height pair in the chunk is stepped together until
it merges) and chunk results are folded in index order, so the report does
not depend on how many workers ran.
"""

from __future__ import annotations

import csv
import json
import logging
import multiprocessing as mp
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from .core import (DEFAULT_STEP_CAP, HeightCache, MapKind, NonConvergenceError,
                   _I64_ODD_LIMIT, build_height_cache)
from .pairs import analyze_pair
from .parity import parity_prefix

log = logging.getLogger(__name__)

DEFAULT_CHUNK = 1 << 16
DEFAULT_LIST_CAP = 1_000_000
ROW_FIELDS = ("n", "height", "coincide_step", "coincide_value", "compliant",
              "counterexample")


@dataclass
class ScanReport:
    range_from: int
    range_to: int
    same_height_pairs: int = 0
    compliant_pairs: int = 0
    counterexamples: int = 0
    degenerate_pairs: int = 0
    primitive_counterexamples: int = 0
    counterexample_list: list[int] = field(default_factory=list)
    list_capped: bool = False
    boundary: str = "from <= n < to"
    elapsed: float = field(default=0.0, compare=False)

    @property
    def ratio(self) -> Fraction:
        if not self.same_height_pairs:
            return Fraction(0)
        return Fraction(self.counterexamples, self.same_height_pairs)

    def absorb(self, part: ScanReport, list_cap: int = DEFAULT_LIST_CAP) -> None:
        """Fold in the report for the range immediately after this one."""
        if part.range_from != self.range_to:
            raise ValueError(f"cannot join [{self.range_from}, {self.range_to}) "
                             f"with [{part.range_from}, {part.range_to})")
        self.range_to = part.range_to
        self.same_height_pairs += part.same_height_pairs
        self.compliant_pairs += part.compliant_pairs
        self.counterexamples += part.counterexamples
        self.degenerate_pairs += part.degenerate_pairs
        self.primitive_counterexamples += part.primitive_counterexamples
        room = list_cap - len(self.counterexample_list)
        self.counterexample_list.extend(part.counterexample_list[:max(room, 0)])
        self.list_capped = self.list_capped or part.list_capped or \
            len(part.counterexample_list) > room

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> ScanReport:
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> ScanReport:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class PairRows:
    """Column arrays for the same-height pairs of one chunk."""

    n: np.ndarray
    height: np.ndarray
    coincide_step: np.ndarray
    coincide_value: np.ndarray
    compliant: np.ndarray
    counterexample: np.ndarray

    def __iter__(self) -> Iterator[tuple]:
        cols = [self.n, self.height, self.coincide_step, self.coincide_value,
                self.compliant, self.counterexample]
        return zip(*(c.tolist() for c in cols))


def _merge_batch(ns: np.ndarray, step_cap: int):
    """Step every pair ``(n, n+1)`` together until it merges.

    Returns per-pair merge step, merge value, the two values three steps
    earlier, and whether any intermediate step put them one apart.  Pairs
    whose values would leave int64 are finished exactly by
    :func:`analyze_pair` and reported through the last return value.
    """
    size = ns.size
    k = np.zeros(size, dtype=np.int64)
    j = np.zeros(size, dtype=np.int64)
    x3 = np.full(size, -1, dtype=np.int64)
    y3 = np.full(size, -1, dtype=np.int64)
    near = np.zeros(size, dtype=bool)
    slow = []

    idx = np.arange(size)
    a = ns.astype(np.int64)
    b = a + 1
    lag_a = [np.full(size, -1, dtype=np.int64) for _ in range(3)]
    lag_b = [np.full(size, -1, dtype=np.int64) for _ in range(3)]
    touched = np.zeros(size, dtype=bool)
    t = 0
    while idx.size:
        if t:
            touched |= np.abs(a - b) == 1
            done = a == b
            if done.any():
                sel = idx[done]
                k[sel] = t
                j[sel] = a[done]
                x3[sel] = lag_a[2][done]
                y3[sel] = lag_b[2][done]
                near[sel] = touched[done]
                keep = ~done
                idx, a, b, touched = idx[keep], a[keep], b[keep], touched[keep]
                lag_a = [v[keep] for v in lag_a]
                lag_b = [v[keep] for v in lag_b]
                if not idx.size:
                    break
        if t > step_cap:
            bad = int(ns[idx[0]])
            raise NonConvergenceError(bad, [bad], step_cap)
        odd_a = (a & 1).astype(bool)
        odd_b = (b & 1).astype(bool)
        big = (odd_a & (a > _I64_ODD_LIMIT)) | (odd_b & (b > _I64_ODD_LIMIT))
        if big.any():
            slow.extend(int(ns[i]) for i in idx[big])
            keep = ~big
            idx, a, b, touched = idx[keep], a[keep], b[keep], touched[keep]
            odd_a, odd_b = odd_a[keep], odd_b[keep]
            lag_a = [v[keep] for v in lag_a]
            lag_b = [v[keep] for v in lag_b]
        lag_a = [a, lag_a[0], lag_a[1]]
        lag_b = [b, lag_b[0], lag_b[1]]
        a = np.where(odd_a, 3 * a + 1, a >> 1)
        b = np.where(odd_b, 3 * b + 1, b >> 1)
        t += 1
    return k, j, x3, y3, near, slow


# read-only cache shared with forked workers
_WORKER_CACHE: HeightCache | None = None


def _init_worker(cache: HeightCache) -> None:
    global _WORKER_CACHE
    _WORKER_CACHE = cache


def scan_chunk(lo: int, hi: int, cache: HeightCache,
               step_cap: int = DEFAULT_STEP_CAP,
               with_rows: bool = False) -> tuple[ScanReport, PairRows | None]:
    """Census of pairs ``(n, n+1)`` for ``lo <= n < hi``."""
    hs = cache.heights_of(np.arange(lo, hi + 1, dtype=np.int64), step_cap)
    same = np.flatnonzero(hs[:-1] == hs[1:])
    ns = same.astype(np.int64) + lo
    k, j, x3, y3, near, slow = _merge_batch(ns, step_cap)

    degenerate = k < 3
    compliant = ~degenerate & (((x3 % 8 == 4) & (y3 == x3 + 1)) |
                               ((y3 % 8 == 4) & (x3 == y3 + 1)))
    counter = ~degenerate & ~compliant
    if slow:
        # exact big-integer fallback; the vector pass left these rows at k=0
        pos = np.searchsorted(ns, np.array(slow, dtype=np.int64))
        for p, n in zip(pos, slow):
            pa = analyze_pair(n, cache, step_cap)
            k[p], j[p] = pa.coincide_step, pa.coincide_value
            degenerate[p], compliant[p] = pa.degenerate, pa.mod8_compliant
            counter[p], near[p] = pa.counterexample, not pa.primitive

    cx = ns[counter]
    report = ScanReport(
        lo, hi,
        same_height_pairs=int(ns.size),
        compliant_pairs=int(compliant.sum()),
        counterexamples=int(cx.size),
        degenerate_pairs=int(degenerate.sum()),
        primitive_counterexamples=int((counter & ~near).sum()),
        counterexample_list=cx.tolist(),
    )
    rows = None
    if with_rows:
        rows = PairRows(ns, hs[same], k, j, compliant.astype(np.int8),
                        counter.astype(np.int8))
    return report, rows


def _worker_chunk(args):
    lo, hi, step_cap, with_rows = args
    return scan_chunk(lo, hi, _WORKER_CACHE, step_cap, with_rows)


def _chunks(start: int, stop: int, size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + size, stop)) for lo in range(start, stop, size)]


def default_workers() -> int:
    return int(os.environ.get("COLLATZ_LAB_JOBS", "1"))


def scan_range(start: int, stop: int, workers: int | None = None, *,
               chunk_size: int = DEFAULT_CHUNK,
               cache: HeightCache | None = None,
               cache_limit: int | None = None,
               row_sink: Callable[[PairRows], None] | None = None,
               checkpoint: str | os.PathLike | None = None,
               list_cap: int = DEFAULT_LIST_CAP,
               step_cap: int = DEFAULT_STEP_CAP) -> ScanReport:
    """Classify every pair ``(n, n+1)`` with ``start <= n < stop``.

    The height cache covers ``1..stop`` unless ``cache_limit`` caps it, in
    which case values above the cap are iterated uncached.  ``row_sink``
    receives each chunk's same-height rows in order.  With ``checkpoint``,
    progress is written after every chunk and a matching checkpoint is
    resumed from.
    """
    if not 1 <= start < stop:
        raise ValueError(f"need 1 <= from < to, got [{start}, {stop})")
    workers = workers or default_workers()
    if workers < 1:
        raise ValueError("workers must be positive")
    t0 = time.perf_counter()
    if cache is None:
        cache = build_height_cache(min(stop, cache_limit or stop), step_cap)

    chunks = _chunks(start, stop, chunk_size)
    report = ScanReport(start, start)
    first = 0
    ckpt = Path(checkpoint) if checkpoint else None
    if ckpt is not None and ckpt.exists():
        state = json.loads(ckpt.read_text())
        if (state["from"], state["to"], state["chunk_size"]) == (start, stop, chunk_size):
            report = ScanReport.from_dict(state["report"])
            first = state["last_chunk"] + 1
            log.info("resuming at chunk %d of %d", first, len(chunks))
        else:
            log.warning("ignoring checkpoint for a different scan: %s", ckpt)

    jobs = [(lo, hi, step_cap, row_sink is not None) for lo, hi in chunks[first:]]
    if workers == 1 or len(jobs) <= 1:
        _init_worker(cache)
        results: Iterable = map(_worker_chunk, jobs)
        pool = None
    else:
        pool = ProcessPoolExecutor(workers, mp_context=mp.get_context("fork"),
                                   initializer=_init_worker, initargs=(cache,))
        results = pool.map(_worker_chunk, jobs)
    try:
        for i, (part, rows) in enumerate(results, start=first):
            report.absorb(part, list_cap)
            if row_sink is not None:
                row_sink(rows)
            if ckpt is not None:
                _write_checkpoint(ckpt, start, stop, chunk_size, i, report)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    report.elapsed = time.perf_counter() - t0
    return report


def _write_checkpoint(path: Path, start: int, stop: int, chunk_size: int,
                      last: int, report: ScanReport) -> None:
    state = {"from": start, "to": stop, "chunk_size": chunk_size,
             "last_chunk": last, "report": replace(report, elapsed=0.0).to_dict()}
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(state))
    tmp.replace(path)


def first_counterexample(limit: int, chunk_size: int = DEFAULT_CHUNK) -> int | None:
    """Smallest ``n < limit`` whose pair with ``n + 1`` is a counterexample."""
    if limit < 2:
        raise ValueError("limit must be at least 2")
    cache = build_height_cache(limit)
    for lo, hi in _chunks(1, limit, chunk_size):
        part, _ = scan_chunk(lo, hi, cache)
        if part.counterexample_list:
            return part.counterexample_list[0]
    return None


def counterexample_ratio(limit: int, workers: int | None = None, **kw) -> Fraction:
    """Counterexamples over same-height pairs for ``2 <= n < limit``."""
    if limit < 2:
        raise ValueError("limit must be at least 2")
    if limit == 2:
        return Fraction(0)
    return scan_range(2, limit, workers, **kw).ratio


@dataclass
class FamilyReport:
    base: int
    modulus_exponent: int
    checked: int
    all_same_height: bool
    all_counterexamples: bool
    parity_agrees: bool
    failures: list[int]

    def to_dict(self) -> dict:
        return asdict(self)


def verify_family(base: int, modulus_exponent: int, count: int) -> FamilyReport:
    """Check the pairs ``2**e * m + base`` for ``0 <= m < count``.

    Each member must be a same-height counterexample, and its first ``e``
    T-parities (and those of its partner) must equal the base pair's.
    """
    if base < 1 or modulus_exponent < 1 or count < 1:
        raise ValueError("base, modulus_exponent and count must be positive")
    step = 1 << modulus_exponent
    e = modulus_exponent
    ref = (parity_prefix(base, e, MapKind.T), parity_prefix(base + 1, e, MapKind.T))
    same_all = counter_all = parity_all = True
    failures = []
    for m in range(count):
        n = step * m + base
        pa = analyze_pair(n)
        agrees = (parity_prefix(n, e, MapKind.T), parity_prefix(n + 1, e, MapKind.T)) == ref
        same_all &= pa.same_height
        counter_all &= pa.counterexample
        parity_all &= agrees
        if not (pa.same_height and pa.counterexample and agrees):
            failures.append(m)
    return FamilyReport(base, modulus_exponent, count, same_all,
                        counter_all and not failures, parity_all, failures)


def emit_heights(limit: int, sink, cache: HeightCache | None = None) -> int:
    """Write ``n,height`` CSV rows for ``1 <= n < limit``; returns the row count."""
    if limit < 1:
        raise ValueError("limit must be positive")
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(("n", "height"))
    if limit == 1:
        return 0
    if cache is None or cache.limit < limit - 1:
        cache = build_height_cache(limit - 1)
    hs = cache.heights[1:limit].tolist()
    writer.writerows(zip(range(1, limit), hs))
    return limit - 1


def write_rows_csv(rows: PairRows, fh, header: bool = False) -> None:
    w = csv.writer(fh, lineterminator="\n")
    if header:
        w.writerow(ROW_FIELDS)
    w.writerows(rows)


def write_rows_jsonl(rows: PairRows, fh) -> None:
    for row in rows:
        d = dict(zip(ROW_FIELDS, row))
        d["compliant"] = bool(d["compliant"])
        d["counterexample"] = bool(d["counterexample"])
        fh.write(json.dumps(d) + "\n")


def read_rows(path: str | os.PathLike) -> list[dict]:
    """Parse a CSV or JSON-lines pair file back into dicts with typed fields."""
    path = Path(path)
    with path.open() as fh:
        first = fh.readline()
        fh.seek(0)
        if first.startswith("{"):
            return [json.loads(line) for line in fh if line.strip()]
        out = []
        for rec in csv.DictReader(fh):
            d = {k: int(v) for k, v in rec.items()}
            d["compliant"] = bool(d["compliant"])
            d["counterexample"] = bool(d["counterexample"])
            out.append(d)
        return out


def report_from_rows(rows: list[dict], start: int, stop: int,
                     list_cap: int = DEFAULT_LIST_CAP) -> ScanReport:
    """Rebuild census counts from emitted rows (primitive count is not recoverable)."""
    cx = [r["n"] for r in rows if r["counterexample"]]
    return ScanReport(
        start, stop,
        same_height_pairs=len(rows),
        compliant_pairs=sum(r["compliant"] for r in rows),
        counterexamples=len(cx),
        degenerate_pairs=sum(r["coincide_step"] < 3 for r in rows),
        counterexample_list=cx[:list_cap],
        list_capped=len(cx) > list_cap,
    )
