import math

import pytest
from hypothesis import given, strategies as st

from demcode.analytics import ReliabilityError, cohen_kappa, perrault_leigh, reliability
from demcode.analytics.reliability import perrault_leigh_index


def table_codings(table):
    """Expand a confusion table into paired labels."""
    a, b = [], []
    for i, row in enumerate(table):
        for j, n in enumerate(row):
            a += [i] * n
            b += [j] * n
    return a, b


def test_two_by_two_table():
    a, b = table_codings([[20, 5], [10, 15]])
    r = cohen_kappa(a, b)
    assert r.observed_agreement == pytest.approx(0.7, abs=1e-12)
    assert r.expected_agreement == pytest.approx(0.5, abs=1e-12)
    assert r.kappa == pytest.approx(0.4, abs=1e-12)


def test_identical_codings():
    codes = ["EVAL", "INFO", "ACC", "INFO"]
    assert cohen_kappa(codes, codes).kappa == 1.0
    assert perrault_leigh(codes, codes).perrault_leigh == 1.0


def test_single_category_kappa_undefined():
    r = cohen_kappa(["ACC"] * 4, ["ACC"] * 4)
    assert r.kappa_undefined and r.kappa is None


def test_length_mismatch():
    with pytest.raises(ReliabilityError):
        cohen_kappa([1, 2], [1])
    with pytest.raises(ReliabilityError):
        cohen_kappa([], [])


def test_perrault_leigh_values():
    assert perrault_leigh_index(0.7, 2) == pytest.approx(math.sqrt(0.4), abs=1e-12)
    assert perrault_leigh_index(0.25, 4) == 0.0
    assert perrault_leigh_index(0.1, 4) == 0.0
    with pytest.raises(ReliabilityError):
        perrault_leigh_index(0.9, 1)


def test_perrault_leigh_category_count():
    a, b = table_codings([[20, 5], [10, 15]])
    assert perrault_leigh(a, b).categories == 2
    assert perrault_leigh(a, b, categories=9).perrault_leigh == pytest.approx(math.sqrt((0.7 - 1 / 9) * 9 / 8))


def test_combined_report():
    a, b = table_codings([[20, 5], [10, 15]])
    r = reliability(a, b)
    assert r.n_items == 50 and r.kappa == pytest.approx(0.4) and r.perrault_leigh == pytest.approx(math.sqrt(0.4))
    assert set(r.to_json()) >= {"kappa", "perrault_leigh", "observed_agreement"}


labels = st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from("abc")), min_size=1, max_size=30)


@given(labels)
def test_kappa_properties(pairs):
    a = [x for x, _ in pairs]
    b = [y for _, y in pairs]
    r1, r2 = cohen_kappa(a, b), cohen_kappa(b, a)
    if r1.kappa_undefined:
        assert r2.kappa_undefined
        return
    assert r1.kappa == pytest.approx(r2.kappa, abs=1e-12)
    assert -1 - 1e-12 <= r1.kappa <= 1 + 1e-12
    if r1.expected_agreement > 0:
        assert r1.kappa <= r1.observed_agreement + 1e-12
    if len(set(a)) > 1:
        assert cohen_kappa(a, a).kappa == pytest.approx(1.0)
