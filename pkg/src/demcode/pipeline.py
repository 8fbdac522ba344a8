"""The analysis chain for one transcript: validate, normalize, segment, classify."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence as Seq

from .codec import normalize, validate
from .exchanges import Exchange, classify, exchange_diagnostics
from .model import Diagnostic, Transcript
from .segmenter import LeveledMove, Sequence, SequenceKind, segment


class AnalysisError(ValueError):
    def __init__(self, diagnostics: Seq[Diagnostic]):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else "analysis failed"
        super().__init__(str(first))


@dataclass(frozen=True)
class Analysis:
    transcript: Transcript  # normalized
    sequences: tuple[Sequence, ...]
    exchanges: tuple[tuple[Exchange, ...], ...]  # parallel to sequences
    diagnostics: tuple[Diagnostic, ...]

    def classified(self, include_management: bool = False) -> list[tuple[Sequence, list[Exchange]]]:
        return [
            (s, list(ex))
            for s, ex in zip(self.sequences, self.exchanges)
            if include_management or s.kind is SequenceKind.SOLUTION
        ]

    def selected(self, include_management: bool = False) -> list[Sequence]:
        return [s for s, _ in self.classified(include_management)]

    def leveled(self) -> list[LeveledMove]:
        return [lm for s in self.sequences for lm in s.moves]


def analyse_transcript(t: Transcript) -> Analysis:
    """Run the whole chain; raises AnalysisError when validation finds errors."""
    t = normalize(t)
    diags = validate(t)
    errors = [d for d in diags if d.is_error]
    if errors:
        raise AnalysisError(errors)
    sequences = segment(t)
    exchanges = tuple(tuple(classify(s)) for s in sequences)
    out = list(diags)
    for s, exs in zip(sequences, exchanges):
        out.extend(s.diagnostics)
        out.extend(exchange_diagnostics(exs))
    return Analysis(t, tuple(sequences), exchanges, tuple(out))


def analyse_corpus(transcripts: Iterable[Transcript]) -> list[Analysis]:
    return [analyse_transcript(t) for t in transcripts]


def activity_streams(classified: Iterable[tuple[Sequence, list[Exchange]]]) -> list[list[str]]:
    """Per-sequence streams of move activities, for move-level LSA."""
    return [[lm.move.activity.value for lm in seq.moves] for seq, _ in classified]


def paired_codes(a: Transcript, b: Transcript, key: str = "activity") -> tuple[list[str], list[str]]:
    """Category labels of two codings of the same moves, paired by rank.

    Implicit moves are synthesized, not coded by a rater, and are skipped.
    """
    if key not in ("activity", "code"):
        raise ValueError(f"comparison key must be 'activity' or 'code', got {key!r}")
    ma = {m.rank: m for m in a.moves if not m.is_implicit}
    mb = {m.rank: m for m in b.moves if not m.is_implicit}
    if ma.keys() != mb.keys():
        only = sorted(ma.keys() ^ mb.keys())
        raise ValueError(f"the two codings cover different moves (e.g. rank {only[0]})")
    label = (lambda m: m.activity.value) if key == "activity" else (lambda m: m.code)
    ranks = sorted(ma)
    return [label(ma[r]) for r in ranks], [label(mb[r]) for r in ranks]
