import math
import random

import pytest
from hypothesis import given, strategies as st

from lexforge.corpus import PositionVector
from lexforge.errors import InsufficientFrequencyError
from lexforge.posvec import (
    DiffVector,
    PrefilterConfig,
    VectorStats,
    candidate_pairs,
    diff_vector,
    diff_vectors,
    euclid_distance,
    stats,
)

from oracles import prefilter_brute_force, two_pass_stats


@pytest.mark.parametrize("d", [1, 7, 3144])
def test_single_gap(d):
    assert diff_vector(PositionVector("w", (5, 5 + d))).values == (d,)


def test_first_gap_of_prosperity():
    assert diff_vector(PositionVector("prosperity", (2178, 5322))).values == (3144,)


def test_uniform_spacing():
    v = diff_vector(PositionVector("w", (0, 1, 2, 3)))
    assert v.values == (1, 1, 1)
    assert v.dim == 3 and v.count == 4


def test_single_occurrence_rejected():
    with pytest.raises(InsufficientFrequencyError):
        diff_vector(PositionVector("w", (4,)))


def test_diff_vectors_skips_rare_words():
    vecs = {"a": PositionVector("a", (1, 2, 3)), "b": PositionVector("b", (9,))}
    assert set(diff_vectors(vecs, 10, min_count=1)) == {"a"}
    assert diff_vectors(vecs, 10, min_count=4) == {}


@given(st.lists(st.integers(0, 10**6), min_size=2, max_size=50, unique=True))
def test_cumulative_sum_rebuilds_positions(raw):
    pos = tuple(sorted(raw))
    v = diff_vector(PositionVector("w", pos), 10**6 + 1)
    assert tuple(v.positions()) == pos
    assert v.dim == len(pos) - 1
    assert all(g >= 1 for g in v.values)
    assert sum(v.values) <= v.text_length


def test_stats_closed_forms():
    assert stats(DiffVector("w", (7, 7, 7))) == VectorStats(7.0, 0.0)
    assert stats(DiffVector("w", (1, 3))) == VectorStats(2.0, 1.0)


def test_stats_against_two_pass():
    rng = random.Random(3)
    for _ in range(50):
        vals = [rng.randint(1, 5000) for _ in range(20)]
        got = stats(DiffVector("w", tuple(vals)))
        mean, std = two_pass_stats(vals)
        assert got.mean == pytest.approx(mean, rel=1e-9)
        assert got.std == pytest.approx(std, rel=1e-9, abs=1e-12)


def test_euclid_distance():
    a = VectorStats(100, 50)
    assert euclid_distance(a, a) == 0
    assert euclid_distance(a, VectorStats(103, 54)) == 5


@given(st.floats(0, 1e4), st.floats(0, 1e4), st.floats(0, 1e4), st.floats(0, 1e4))
def test_euclid_symmetric(m1, s1, m2, s2):
    a, b = VectorStats(m1, s1), VectorStats(m2, s2)
    assert euclid_distance(a, b) == euclid_distance(b, a)


def _vec(word, pos, length):
    return diff_vector(PositionVector(word, tuple(pos)), length)


def test_pair_failing_distance_excluded():
    s = {"a": _vec("a", range(0, 1000, 100), 1000)}
    t = {"x": _vec("x", range(0, 1000, 90), 1000)}
    assert candidate_pairs(s, t, PrefilterConfig(euclid_threshold=5)) == []
    assert candidate_pairs(s, t, PrefilterConfig(euclid_threshold=20)) == [("a", "x")]


@pytest.mark.parametrize("bound", [1e-9, 1.0, 1e6])
def test_identical_signal_always_kept(bound):
    pos = [3, 50, 51, 300, 420, 421, 700, 800, 801, 990]
    s = {"a": _vec("a", pos, 1000)}
    t = {"x": _vec("x", pos, 1000)}
    assert candidate_pairs(s, t, PrefilterConfig(euclid_threshold=bound)) == [("a", "x")]
    assert candidate_pairs(s, t, PrefilterConfig(euclid_relative=bound)) == [("a", "x")]


def test_frequency_conditions():
    s = {"a": _vec("a", range(0, 1000, 100), 1000)}  # 10 occurrences
    t = {
        "few": _vec("few", range(0, 900, 100), 1000),  # 9, below the floor
        "many": _vec("many", range(0, 1050, 50), 1100),  # 21, ratio 2.1
        "ok": _vec("ok", range(0, 1000, 50), 1000),  # 20, ratio 2.0
    }
    got = candidate_pairs(s, t, PrefilterConfig(euclid_threshold=1e9))
    assert got == [("a", "ok")]


def test_start_offset_condition():
    s = {"a": _vec("a", range(0, 1000, 50), 1000)}
    t = {"late": _vec("late", range(310, 1000, 30), 1000),
         "early": _vec("early", range(290, 1000, 30), 1000)}
    got = candidate_pairs(s, t, PrefilterConfig(euclid_threshold=1e9))
    assert got == [("a", "early")]


def test_needs_a_distance_bound():
    with pytest.raises(ValueError):
        candidate_pairs({}, {}, PrefilterConfig())


def _universe(rng, n, length):
    words = {}
    for k in range(n):
        count = rng.randint(5, 30)
        pos = sorted(rng.sample(range(length), count))
        words[f"w{k:02d}"] = (pos, length)
    return words


def _diffs(universe):
    return {w: _vec(w, pos, length) for w, (pos, length) in universe.items()}


def test_matches_brute_force_on_random_universe():
    rng = random.Random(11)
    for trial in range(5):
        src = _universe(rng, 50, 5000)
        tgt = _universe(rng, 50, 4500)
        for thr, rel in ((150.0, None), (None, 0.3), (400.0, 0.5)):
            cfg = PrefilterConfig(10, 2.0, 0.3, thr, rel)
            expected = prefilter_brute_force(src, tgt, 10, 2.0, 0.3, thr, rel)
            assert candidate_pairs(_diffs(src), _diffs(tgt), cfg) == expected


def test_invariant_under_map_order():
    rng = random.Random(5)
    src, tgt = _diffs(_universe(rng, 30, 3000)), _diffs(_universe(rng, 30, 3000))
    cfg = PrefilterConfig(euclid_threshold=300)
    flipped_s = dict(reversed(list(src.items())))
    flipped_t = dict(reversed(list(tgt.items())))
    assert candidate_pairs(src, tgt, cfg) == candidate_pairs(flipped_s, flipped_t, cfg)


@given(st.floats(0.5, 2000), st.floats(0.5, 2000))
def test_threshold_monotone(a, b):
    rng = random.Random(int(a * 7 + b))
    src, tgt = _diffs(_universe(rng, 15, 3000)), _diffs(_universe(rng, 15, 3000))
    lo, hi = sorted((a, b))
    small = set(candidate_pairs(src, tgt, PrefilterConfig(euclid_threshold=lo)))
    big = set(candidate_pairs(src, tgt, PrefilterConfig(euclid_threshold=hi)))
    assert small <= big
    assert big <= {(s, t) for s in src for t in tgt}


def test_empty_maps():
    assert candidate_pairs({}, {"x": _vec("x", [1, 2], 3)}, PrefilterConfig(euclid_threshold=1)) == []
    assert math.isfinite(stats(DiffVector("w", (5,))).std)
