"""Move and word distributions per nesting level, activity and subject class."""

from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..exchanges import subject_class
from ..model import Activity
from ..segmenter import LeveledMove, Sequence


class DistributionError(ValueError):
    pass


@dataclass(frozen=True)
class Row:
    count: int
    share: float
    words: int
    word_share: float


@dataclass
class DistributionTable:
    dimension: str  # "level" | "activity" | "subject-class"
    scope: str  # "corpus" | "level <n>"
    rows: dict[str, Row]
    correlation: Optional[float] = None
    grouped: dict[str, float] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(r.count for r in self.rows.values())

    def counts(self) -> dict[str, int]:
        return {k: r.count for k, r in self.rows.items() if r.count}

    def to_records(self) -> list[dict]:
        recs = [
            {
                "dimension": self.dimension,
                "scope": self.scope,
                "label": label,
                "count": r.count,
                "share": r.share,
                "words": r.words,
                "word_share": r.word_share,
            }
            for label, r in self.rows.items()
        ]
        for label, share in self.grouped.items():
            recs.append(
                {"dimension": f"{self.dimension}-group", "scope": self.scope, "label": label,
                 "count": "", "share": share, "words": "", "word_share": ""}
            )
        if self.correlation is not None:
            recs.append(
                {"dimension": f"{self.dimension}-correlation", "scope": self.scope, "label": "pearson_r",
                 "count": "", "share": self.correlation, "words": "", "word_share": ""}
            )
        return recs

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "scope": self.scope,
            "rows": {k: vars(r) for k, r in self.rows.items()},
            "correlation": self.correlation,
            "grouped": self.grouped,
        }


def _table(dimension: str, scope: str, labels: Iterable[str], moves: list[LeveledMove], key) -> DistributionTable:
    counts: Counter = Counter()
    words: Counter = Counter()
    for lm in moves:
        k = key(lm)
        counts[k] += 1
        words[k] += lm.move.word_count
    n = sum(counts.values())
    w = sum(words.values())
    rows = {
        label: Row(counts[label], counts[label] / n, words[label], words[label] / w if w else 0.0)
        for label in labels
    }
    return DistributionTable(dimension, scope, rows)


def _moves(sequences: Iterable[Sequence]) -> list[LeveledMove]:
    return [lm for s in sequences for lm in s.moves]


def _at_level(sequences: Iterable[Sequence], level: int) -> list[LeveledMove]:
    moves = _moves(sequences)
    if not moves:
        raise DistributionError("empty corpus")
    chosen = [lm for lm in moves if lm.level == level]
    if not chosen:
        raise DistributionError(f"no moves at level {level}")
    return chosen


def level_distribution(sequences: Iterable[Sequence]) -> DistributionTable:
    moves = _moves(sequences)
    if not moves:
        raise DistributionError("empty corpus")
    levels = sorted({lm.level for lm in moves})
    table = _table("level", "corpus", [str(lv) for lv in levels], moves, lambda lm: str(lm.level))
    shares = [r.share for r in table.rows.values()]
    word_shares = [r.word_share for r in table.rows.values()]
    try:
        table.correlation = statistics.correlation(shares, word_shares)
    except statistics.StatisticsError:
        table.correlation = None  # fewer than two levels, or constant shares
    return table


ACTIVITY_GROUPS = {
    "Synch": (Activity.HYP, Activity.INFO),
    "Review": (Activity.JUSTIF, Activity.EVAL),
    "AltElab": (Activity.DEV,),
}


def activity_distribution(sequences: Iterable[Sequence], level: int) -> DistributionTable:
    """Activity shares at one level; requests count under their activity.

    ``grouped`` holds the three exchange-family shares normalised over their
    own total, so they sum to 1 whenever any of them occurs.
    """
    moves = _at_level(sequences, level)
    table = _table("activity", f"level {level}", [a.value for a in Activity], moves, lambda lm: lm.move.activity.value)
    group_counts = {g: sum(table.rows[a.value].count for a in acts) for g, acts in ACTIVITY_GROUPS.items()}
    total = sum(group_counts.values())
    if total:
        table.grouped = {g: c / total for g, c in group_counts.items()}
    return table


SUBJECT_CLASSES = (
    "solution",
    "alternative",
    "criterion",
    "hypothesis",
    "evaluation",
    "justification",
    "rejection",
    "introduction",
    "other",
)


def coarse_subject_class(lm: LeveledMove) -> str:
    cls = subject_class(lm.move.subject)
    return cls if cls in SUBJECT_CLASSES else "other"


def subject_distribution(sequences: Iterable[Sequence], level: int) -> DistributionTable:
    moves = _at_level(sequences, level)
    return _table("subject-class", f"level {level}", SUBJECT_CLASSES, moves, coarse_subject_class)
