import math
import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from demcode.analytics import lsa, windowed_counts
from demcode.analytics.lsa import allison_liker, report_to_dot, transition_counts
from demcode.exchanges import classify, exchange_stream
from demcode.segmenter import segment


def hand_z(n, n_a, n_b, n_ab):
    p_a, p_b = n_a / n, n_b / n
    return (n_ab / n_a - p_b) / math.sqrt(p_b * (1 - p_b) * (1 - p_a) / (n * p_a))


def test_alternating_stream():
    r = lsa([["A", "B"] * 50])
    # 99 transitions: 50 from A (all to B), 49 from B (all to A)
    assert r.count("A", "B") == 50 and r.count("B", "A") == 49
    assert r.z_of("A", "B") == pytest.approx(hand_z(99, 50, 50, 50), abs=1e-9)
    assert r.z_of("A", "B") == pytest.approx(math.sqrt(99), abs=1e-9)
    assert ("A", "B") in r.significant and r.z_of("A", "B") > 1.96


def test_degenerate_stream():
    r = lsa([["A"] * 4])
    assert r.degenerate and not r.significant


def test_lag_two():
    r = lsa([["A", "B", "C"] * 30], lag=2)
    assert r.count("A", "C") == 30 and r.count("A", "B") == 0


def test_parameter_checks():
    with pytest.raises(ValueError):
        lsa([["A", "B"]], lag=0)
    with pytest.raises(ValueError):
        lsa([["A", "B"]], alpha=1.5)


def test_no_cross_stream_transitions():
    r = lsa([["A", "B"], ["C", "D"]])
    assert r.count("B", "C") == 0 and r.n == 2


def test_min_expected_guard():
    r = lsa([["A", "B"]] * 3)
    assert not r.significant  # expected counts are tiny


def test_fixture_counts_match_brute_force(transcript):
    seqs = segment(transcript)
    streams = exchange_stream([(s, classify(s)) for s in seqs])
    r = lsa(streams)
    tally = Counter((s[i], s[i + 1]) for s in streams for i in range(len(s) - 1))
    for a, b in r.pairs():
        assert r.count(a, b) == tally[(a, b)]


def test_duplication_scales_z_by_sqrt2():
    rng = random.Random(4)
    streams = [[rng.choice("ABC") for _ in range(30)] for _ in range(10)]
    z1 = lsa(streams).z
    z2 = lsa(streams + streams).z
    ok = ~np.isnan(z1)
    assert np.allclose(z2[ok], z1[ok] * math.sqrt(2), rtol=1e-12, atol=1e-12)


def test_iid_stream_has_no_extreme_z():
    rng = random.Random(11)
    r = lsa([[rng.choice("ABC") for _ in range(10_000)]])
    assert np.nanmax(np.abs(r.z)) < 6


def test_windowed_counts():
    c = windowed_counts([["A", "B", "A", "C"]], window=2, alphabet=("A", "B", "C"))
    # first A: ->B, ->A; B: ->A, ->C; second A: ->C
    assert c.tolist() == [[1, 1, 1], [1, 0, 1], [0, 0, 0]]


def test_undefined_variance_is_nan():
    z = allison_liker(np.array([[0, 3], [0, 0]]))
    assert np.isnan(z).all()


def test_dot_export():
    dot = report_to_dot(lsa([["A", "B"] * 50]))
    assert dot.startswith('digraph "transitions" {') and '"A" -> "B" [label="z=9.95"];' in dot


@given(st.lists(st.lists(st.sampled_from("XYZ"), max_size=12), max_size=8))
def test_counts_are_brute_force_tally(streams):
    alphabet = tuple(sorted({t for s in streams for t in s}))
    if not alphabet:
        return
    c = transition_counts(streams, 1, alphabet)
    for i, a in enumerate(alphabet):
        for j, b in enumerate(alphabet):
            assert c[i, j] == sum(s[k] == a and s[k + 1] == b for s in streams for k in range(len(s) - 1))
