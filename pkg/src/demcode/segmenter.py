"""Nesting levels and sequence segmentation.

Rule A nests a move one level below the move that instantiated its subject.
Rule B nests a move whose subject is a criterion one level below the latest
move that used that criterion as its attribute. Introductions of solutions
sit at level 0 and open a new sequence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence as Seq

from .model import (
    Activity,
    CodedMove,
    CriterionRef,
    Diagnostic,
    Meeting,
    MoveResult,
    Project,
    Rank,
    SolutionRef,
    Subject,
    Transcript,
)


class Rule(str, enum.Enum):
    A = "A"
    B = "B"
    ROOT = "root"

    @property
    def column(self) -> str:
        """Cell text of the Rule column (blank for the root)."""
        return "" if self is Rule.ROOT else self.value


class SequenceKind(str, enum.Enum):
    SOLUTION = "solution"
    MANAGEMENT = "management"


class SegmentationError(ValueError):
    pass


@dataclass(frozen=True)
class LeveledMove:
    move: CodedMove
    level: int
    rule: Rule


@dataclass(frozen=True)
class Sequence:
    index: int
    main_subject: Subject
    moves: tuple[LeveledMove, ...]
    diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)

    @property
    def opener(self) -> LeveledMove:
        return self.moves[0]

    @property
    def kind(self) -> SequenceKind:
        if isinstance(self.main_subject, (Project, Meeting)):
            return SequenceKind.MANAGEMENT
        if all(lm.move.activity is Activity.MAN for lm in self.moves):
            return SequenceKind.MANAGEMENT
        return SequenceKind.SOLUTION

    def ranks(self) -> set[Rank]:
        return {lm.move.rank for lm in self.moves}


def _criterion_key(kind, letter) -> tuple:
    return (kind, letter)


def assign_levels(t: Transcript) -> list[LeveledMove]:
    levels: dict[Rank, int] = {}
    criterion_levels: dict[tuple, int] = {}
    out: list[LeveledMove] = []
    for m in t.moves:
        subj = m.subject
        if m.opens_solution():
            level, rule = 0, (Rule.ROOT if m.is_implicit else Rule.A)
        elif isinstance(subj, (SolutionRef, Project, Meeting)):
            level, rule = 1, Rule.A
        elif isinstance(subj, MoveResult):
            if subj.rank not in levels:
                raise SegmentationError(f"move {m.move_id}: unresolvable subject {subj}")
            level, rule = levels[subj.rank] + 1, Rule.A
        elif isinstance(subj, CriterionRef):
            key = _criterion_key(subj.kind, subj.letter)
            if key not in criterion_levels:
                raise SegmentationError(f"move {m.move_id}: criterion {subj} never used as an attribute")
            level, rule = criterion_levels[key] + 1, Rule.B
        else:  # pragma: no cover - Subject is a closed union
            raise SegmentationError(f"move {m.move_id}: unknown subject {subj!r}")
        levels[m.rank] = level
        if m.attribute is not None:
            criterion_levels[_criterion_key(m.attribute.kind, m.attribute.criterion)] = level
        out.append(LeveledMove(m, level, rule))
    return out


def _opens_management(m: CodedMove) -> bool:
    return m.activity is Activity.MAN and isinstance(m.subject, (Project, Meeting))


def _cross_sequence(members: Seq[LeveledMove], index: int) -> tuple[Diagnostic, ...]:
    ranks: set[Rank] = set()
    criteria: set[tuple] = set()
    out = []
    for lm in members:
        m = lm.move
        subj = m.subject
        if isinstance(subj, MoveResult) and subj.rank not in ranks:
            out.append(
                Diagnostic(
                    "warning",
                    f"move {m.move_id}: subject {subj} lies outside sequence {index}",
                    line=m.line,
                    rank=m.rank,
                )
            )
        elif isinstance(subj, CriterionRef) and _criterion_key(subj.kind, subj.letter) not in criteria:
            out.append(
                Diagnostic(
                    "warning",
                    f"move {m.move_id}: criterion {subj} was last used outside sequence {index}",
                    line=m.line,
                    rank=m.rank,
                )
            )
        ranks.add(m.rank)
        if m.attribute is not None:
            criteria.add(_criterion_key(m.attribute.kind, m.attribute.criterion))
    return tuple(out)


def segment_sequences(lm: Iterable[LeveledMove]) -> list[Sequence]:
    groups: list[list[LeveledMove]] = []
    in_management = False
    for item in lm:
        m = item.move
        if m.opens_solution():
            groups.append([item])
            in_management = False
        elif _opens_management(m) and not in_management:
            groups.append([item])
            in_management = True
        elif not groups:
            groups.append([item])
            in_management = m.activity is Activity.MAN
        else:
            groups[-1].append(item)
    return [
        Sequence(i, members[0].move.subject, tuple(members), _cross_sequence(members, i))
        for i, members in enumerate(groups, start=1)
    ]


def partition_by_kind(seqs: Iterable[Sequence]) -> tuple[list[Sequence], list[Sequence]]:
    solution, management = [], []
    for s in seqs:
        (management if s.kind is SequenceKind.MANAGEMENT else solution).append(s)
    return solution, management


def segment(t: Transcript) -> list[Sequence]:
    return segment_sequences(assign_levels(t))


def find_move(seqs: Iterable[Sequence], rank: Rank) -> Optional[LeveledMove]:
    for s in seqs:
        for lm in s.moves:
            if lm.move.rank == rank:
                return lm
    return None
