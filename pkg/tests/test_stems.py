import itertools
import random

import pytest

from collatz_lab.core import MapKind
from collatz_lab.pairs import analyze_pair, t_form
from collatz_lab.parity import ParityVector, expand_t_to_c
from collatz_lab.stems import (SolutionSet, decide_all_x, garner_stem, is_block_prefix,
                               is_corresponding_stem_pair, tail_stem_index)
from oracles import apply_t_vector


def T(s):
    return ParityVector.parse(s, MapKind.T)


@pytest.mark.parametrize("i, s, sp", [(0, "001", "100"), (1, "0101", "1100"),
                                      (2, "01101", "11100")])
def test_garner_stem(i, s, sp):
    pair = garner_stem(i)
    assert (pair.s, pair.s_prime, pair.index) == (T(s), T(sp), i)


def test_garner_stems_in_c_form_end_in_mod8_tails():
    # in C-form s_i is (01)^i 0010 and s_i' is (10)^i 1000
    for i in range(10):
        pair = garner_stem(i)
        s, sp = expand_t_to_c(pair.s).bits, expand_t_to_c(pair.s_prime).bits
        assert s == (0, 1) * i + (0, 0, 1, 0)
        assert sp == (1, 0) * i + (1, 0, 0, 0)


def test_decide_examples():
    assert decide_all_x(T("001"), T("100"), 0) == SolutionSet.ALL
    assert decide_all_x(T("0"), T("0"), 0) == SolutionSet.NONE
    assert decide_all_x(T("1"), T("0"), 0) == SolutionSet.single(0)
    with pytest.raises(ValueError):
        decide_all_x(T("1"), T("01"), 0)


def test_corresponding_stem_examples():
    assert is_corresponding_stem_pair(*_pair(0)).holds
    assert is_corresponding_stem_pair(*_pair(2)).holds
    verdict = is_corresponding_stem_pair(T("0"), T("0"))
    assert not verdict and not verdict.equality_holds


def test_stem_prefix_violation_has_witness():
    # s_0 followed by an extra step on both sides: equality still holds but
    # the length-3 prefix already merges the orbits
    v = is_corresponding_stem_pair(T("0010"), T("1000"))
    assert v.equality_holds and not v.holds
    assert v.violated_prefix_length == 3 and v.witness_x == 1
    assert apply_t_vector((0, 0, 1), 1) == apply_t_vector((1, 0, 0), 2)


def test_block_prefix_examples():
    assert is_block_prefix(T("10"), T("01"))
    assert not is_block_prefix(T("0"), T("0"))
    with pytest.raises(ValueError):
        is_block_prefix(T(""), T(""))
    with pytest.raises(ValueError):
        is_corresponding_stem_pair(T(""), T(""))


def test_tail_stem_index_examples():
    assert tail_stem_index(T("001"), T("100")) == (0, False)
    assert tail_stem_index(T("1100"), T("0101")) == (1, True)
    assert tail_stem_index(T("11"), T("00")) is None
    pa = analyze_pair(3067)
    assert tail_stem_index(t_form(pa.pre_vec_n), t_form(pa.pre_vec_n1)) is None


def test_tail_stem_longer_vectors():
    assert tail_stem_index(T("10101"), T("11100")) == (1, False)
    assert tail_stem_index(T("001101"), T("111100")) == (2, False)
    assert tail_stem_index(T("0001"), T("1100")) == (0, False)
    assert tail_stem_index(T("0011"), T("1100")) is None


def _pair(i):
    p = garner_stem(i)
    return p.s, p.s_prime


def _brute(v, vp, target, xs):
    return [x for x in xs
            if apply_t_vector(v, x) - apply_t_vector(vp, x + 1) == target]


def _agrees(sol, found, xs):
    if sol.kind == "all":
        return len(found) == len(xs)
    if sol.kind == "none":
        return not found
    return found == ([sol.x] if xs[0] <= sol.x <= xs[-1] else [])


@pytest.mark.property
def test_decider_matches_brute_force_short_vectors():
    xs = list(range(-64, 65))
    for length in range(1, 5):
        for v in itertools.product((0, 1), repeat=length):
            for vp in itertools.product((0, 1), repeat=length):
                for target in (-1, 0, 1):
                    sol = decide_all_x(ParityVector(v, MapKind.T),
                                       ParityVector(vp, MapKind.T), target)
                    assert _agrees(sol, _brute(v, vp, target, xs), xs)


@pytest.mark.property
def test_decider_matches_brute_force_random_long_vectors():
    rng = random.Random(11)
    xs = list(range(-300, 301))
    for _ in range(40):
        length = rng.randint(9, 24)
        v = tuple(rng.randint(0, 1) for _ in range(length))
        # bias half the draws toward equal popcount so "all"/"none" cases appear
        if rng.random() < 0.5:
            vp = tuple(rng.sample(v, len(v)))
        else:
            vp = tuple(rng.randint(0, 1) for _ in range(length))
        for target in (-1, 0, 1):
            sol = decide_all_x(ParityVector(v, MapKind.T), ParityVector(vp, MapKind.T), target)
            assert _agrees(sol, _brute(v, vp, target, xs), xs)


@pytest.mark.property
def test_garner_stems_are_corresponding_stems():
    rng = random.Random(3)
    for i in range(13):
        s, sp = _pair(i)
        assert is_corresponding_stem_pair(s, sp).holds
        for x in rng.sample(range(-10**5, 10**5), 50):
            assert apply_t_vector(s.bits, x) == apply_t_vector(sp.bits, x + 1)
        # prefixes never meet or touch for positive x
        for length in range(1, len(s)):
            for x in range(1, 2049):
                d = apply_t_vector(s.bits[:length], x) - apply_t_vector(sp.bits[:length], x + 1)
                assert d not in (-1, 0, 1)


@pytest.mark.property
def test_block_prefix_holds_pointwise():
    for length in range(1, 7):
        for b in itertools.product((0, 1), repeat=length):
            for bp in itertools.product((0, 1), repeat=length):
                vb, vbp = ParityVector(b, MapKind.T), ParityVector(bp, MapKind.T)
                if is_block_prefix(vb, vbp):
                    for x in range(1, 10**4 + 1, 97):
                        assert apply_t_vector(b, x) + 1 == apply_t_vector(bp, x + 1)
    assert is_block_prefix(T("1010"), T("0101"))


@pytest.mark.property
def test_eight_k_plus_four_pairs_end_in_s0():
    for k in range(1, 1001):
        pa = analyze_pair(8 * k + 4)
        assert pa.stem_index == 0 and pa.stem_swapped is False
