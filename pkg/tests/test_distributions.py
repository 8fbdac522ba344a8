import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from demcode.analytics import DistributionError, activity_distribution, level_distribution, subject_distribution
from demcode.codec import parse_transcript
from demcode.pipeline import analyse_transcript
from demcode.segmenter import segment
from demcode.synth import random_transcript


def test_fixture_level_counts(transcript):
    table = level_distribution(segment(transcript))
    assert table.counts() == {"0": 2, "1": 8, "2": 1, "3": 1}
    assert {k: r.share for k, r in table.rows.items()} == pytest.approx(
        {"0": 2 / 12, "1": 8 / 12, "2": 1 / 12, "3": 1 / 12}, abs=1e-12
    )
    assert table.correlation is not None and -1 <= table.correlation <= 1


def test_word_counts(transcript):
    table = level_distribution(segment(transcript))
    assert table.rows["0"].words == sum(m.word_count for m in transcript.moves if m.rank.number in (51, 62))
    assert sum(r.words for r in table.rows.values()) == sum(m.word_count for m in transcript.moves)


def test_single_intro():
    t = parse_transcript("# meeting: one\n1|A|here it is|INTRO/SOLa\n")
    table = level_distribution(segment(t))
    assert table.counts() == {"0": 1} and table.rows["0"].share == 1.0
    assert table.correlation is None


def test_fixture_level1_activities(transcript):
    table = activity_distribution(segment(transcript), 1)
    # B52 is a request and counts under JUSTIF
    assert table.counts() == {"JUSTIF": 3, "HYP": 1, "INFO": 3, "ACC": 1}
    assert table.total == 8
    assert sum(table.grouped.values()) == pytest.approx(1.0)
    assert table.grouped["Synch"] == pytest.approx(4 / 7)


def test_fixture_level3_activities(transcript):
    assert activity_distribution(segment(transcript), 3).counts() == {"ACC": 1}


def test_fixture_subjects(transcript):
    seqs = segment(transcript)
    assert subject_distribution(seqs, 2).counts() == {"hypothesis": 1}
    level1 = subject_distribution(seqs, 1)
    assert level1.counts() == {"introduction": 8} and level1.rows["introduction"].share == 1.0


@pytest.mark.parametrize("fn", [activity_distribution, subject_distribution])
def test_absent_level(transcript, fn):
    with pytest.raises(DistributionError, match="no moves at level 9"):
        fn(segment(transcript), 9)


def test_empty_corpus():
    with pytest.raises(DistributionError, match="empty"):
        level_distribution([])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_shares_sum_to_one(seed):
    a = analyse_transcript(random_transcript(random.Random(seed), 6))
    seqs = a.selected()
    tables = [level_distribution(seqs)]
    for lv in {lm.level for s in seqs for lm in s.moves}:
        tables += [activity_distribution(seqs, lv), subject_distribution(seqs, lv)]
    for t in tables:
        assert math.isclose(sum(r.share for r in t.rows.values()), 1.0, abs_tol=1e-9)
        if any(r.words for r in t.rows.values()):
            assert math.isclose(sum(r.word_share for r in t.rows.values()), 1.0, abs_tol=1e-9)
