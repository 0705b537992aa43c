import io
import json
from fractions import Fraction

import numpy as np
import pytest

from collatz_lab.core import build_height_cache
from collatz_lab.pairs import analyze_pair
from collatz_lab.scanner import (ROW_FIELDS, ScanReport, counterexample_ratio,
                                 emit_heights, first_counterexample, read_rows,
                                 report_from_rows, scan_chunk, scan_range, verify_family,
                                 write_rows_csv, write_rows_jsonl)
from oracles import brute_census, naive_height


def test_scan_matches_brute_force():
    same, cx = brute_census(2, 20_000)
    r = scan_range(2, 20_000, chunk_size=1000)
    assert r.same_height_pairs == same
    assert r.counterexample_list == cx
    assert r.counterexamples == len(cx)
    assert r.same_height_pairs == r.compliant_pairs + r.counterexamples + r.degenerate_pairs


def test_scan_small_ranges():
    r = scan_range(12, 14)
    assert r.same_height_pairs >= 1 and r.counterexamples == 0
    r = scan_range(2, 3067)
    assert r.counterexamples == 0
    assert scan_range(3067, 3068).counterexample_list == [3067]


def test_scan_rejects_bad_range():
    with pytest.raises(ValueError):
        scan_range(5, 5)
    with pytest.raises(ValueError):
        scan_range(0, 5)


def test_first_counterexample():
    assert first_counterexample(10**4) == 3067
    assert first_counterexample(3000) is None
    assert first_counterexample(3068) == 3067
    assert first_counterexample(3067) is None


def test_counterexample_ratio():
    assert counterexample_ratio(3000) == 0
    assert counterexample_ratio(2) == 0
    r = scan_range(2, 50_000)
    assert counterexample_ratio(50_000) == Fraction(r.counterexamples, r.same_height_pairs)


def test_family():
    rep = verify_family(3067, 19, 1)
    assert rep.all_same_height and rep.all_counterexamples and not rep.failures
    rep = verify_family(3067, 19, 100)
    assert rep.all_counterexamples and rep.parity_agrees and rep.checked == 100
    rep = verify_family(12, 3, 10)
    assert rep.all_same_height and not rep.all_counterexamples
    assert rep.failures == list(range(10))


def test_family_members_share_merge_vectors():
    base = analyze_pair(3067)
    for m in (1, 2, 37):
        pa = analyze_pair((1 << 19) * m + 3067)
        assert pa.pre_vec_n == base.pre_vec_n and pa.pre_vec_n1 == base.pre_vec_n1


def test_emit_heights():
    buf = io.StringIO()
    assert emit_heights(4, buf) == 3
    assert buf.getvalue() == "n,height\n1,0\n2,1\n3,7\n"
    buf = io.StringIO()
    assert emit_heights(1, buf) == 0
    assert buf.getvalue() == "n,height\n"
    buf = io.StringIO()
    emit_heights(14, buf)
    lines = buf.getvalue().splitlines()
    assert "12,9" in lines and "13,9" in lines


def test_emit_heights_sink_failure():
    class Broken(io.StringIO):
        def write(self, s):
            raise OSError("disk full")
    with pytest.raises(OSError):
        emit_heights(10, Broken())


def test_big_values_take_exact_path():
    lo = 3 * 10**18
    cache = build_height_cache(1000)
    part, rows = scan_chunk(lo, lo + 40, cache, with_rows=True)
    expected = [n for n in range(lo, lo + 40) if analyze_pair(n).same_height]
    assert rows.n.tolist() == expected
    for n, h, k, j, comp, cx in rows:
        pa = analyze_pair(n)
        assert (h, k, j, bool(comp), bool(cx)) == (
            naive_height(n), pa.coincide_step, pa.coincide_value,
            pa.mod8_compliant, pa.counterexample)


def test_list_cap():
    r = scan_range(2, 50_000, list_cap=5, chunk_size=4096)
    assert r.list_capped and len(r.counterexample_list) == 5
    assert r.counterexamples > 5


def test_report_json_round_trip():
    r = scan_range(2, 30_000)
    back = ScanReport.from_json(r.to_json())
    assert back == r and back.elapsed == r.elapsed


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_row_files_round_trip(tmp_path, fmt):
    path = tmp_path / f"rows.{fmt}"
    with path.open("w") as fh:
        first = [True]

        def sink(rows):
            if fmt == "csv":
                write_rows_csv(rows, fh, header=bool(first and first.pop()))
            else:
                write_rows_jsonl(rows, fh)
        r = scan_range(2, 40_000, chunk_size=5000, row_sink=sink)
    rows = read_rows(path)
    assert list(rows[0]) == list(ROW_FIELDS)
    rebuilt = report_from_rows(rows, 2, 40_000)
    for field in ("same_height_pairs", "compliant_pairs", "counterexamples",
                  "degenerate_pairs", "counterexample_list"):
        assert getattr(rebuilt, field) == getattr(r, field)
    if fmt == "csv":
        assert path.read_text().splitlines()[0] == ",".join(ROW_FIELDS)


def test_checkpoint_resume(tmp_path):
    ckpt = tmp_path / "scan.json"
    full = scan_range(2, 100_000, chunk_size=10_000)
    seen = []

    def stop_after_three(rows):
        seen.append(rows)
        if len(seen) == 3:
            raise KeyboardInterrupt
    with pytest.raises(KeyboardInterrupt):
        scan_range(2, 100_000, chunk_size=10_000, checkpoint=ckpt, row_sink=stop_after_three)
    state = json.loads(ckpt.read_text())
    assert state["last_chunk"] == 1  # the sink runs before the checkpoint is written
    resumed = scan_range(2, 100_000, chunk_size=10_000, checkpoint=ckpt)
    assert resumed == full
    assert json.loads(ckpt.read_text())["last_chunk"] == 9


def test_checkpoint_for_other_scan_is_ignored(tmp_path):
    ckpt = tmp_path / "scan.json"
    scan_range(2, 20_000, chunk_size=5000, checkpoint=ckpt)
    r = scan_range(2, 30_000, chunk_size=5000, checkpoint=ckpt)
    assert r == scan_range(2, 30_000, chunk_size=5000)


def test_env_default_workers(monkeypatch):
    monkeypatch.setenv("COLLATZ_LAB_JOBS", "2")
    assert scan_range(2, 70_000, chunk_size=8192) == scan_range(2, 70_000, 1, chunk_size=8192)


@pytest.mark.property
@pytest.mark.parametrize("workers", [2, 8])
def test_worker_count_independence(workers):
    base = scan_range(2, 300_000, 1, chunk_size=20_000)
    assert scan_range(2, 300_000, workers, chunk_size=20_000) == base


@pytest.mark.property
def test_partition_additivity():
    whole = scan_range(2, 250_000)
    for cut in (3, 65_537, 131_072, 200_001):
        left = scan_range(2, cut)
        left.absorb(scan_range(cut, 250_000))
        assert left == whole


@pytest.mark.property
def test_counterexamples_reverify_without_cache():
    r = scan_range(2, 200_000)
    assert r.counterexample_list == sorted(set(r.counterexample_list))
    for n in r.counterexample_list:
        assert analyze_pair(n).counterexample


@pytest.mark.property
def test_chunk_rows_match_pair_analysis():
    cache = build_height_cache(60_001)
    _, rows = scan_chunk(1, 60_000, cache, with_rows=True)
    h = cache.heights
    assert rows.n.tolist() == [n for n in range(1, 60_000) if h[n] == h[n + 1]]
    for n, height_, k, j, comp, cx in list(rows)[::7]:
        pa = analyze_pair(n)
        assert (height_, k, j, bool(comp), bool(cx)) == (
            pa.height_n, pa.coincide_step, pa.coincide_value, pa.mod8_compliant,
            pa.counterexample)


def test_absorb_rejects_gaps():
    a = ScanReport(2, 10)
    with pytest.raises(ValueError):
        a.absorb(ScanReport(11, 20))


def test_heights_of_matches_cache_for_range():
    cache = build_height_cache(5000)
    ns = np.arange(1, 12_000)
    assert cache.heights_of(ns).tolist() == [naive_height(int(n)) for n in ns]
