"""Grouping the moves of a sequence into functional exchanges.

Each head activity opens (or continues) an exchange of its pattern; ACC and
nested INTRO moves are absorbed into the open exchange. A request travels
forward to the exchange of the move that answers it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .model import (
    Activity,
    CodedMove,
    CriterionRef,
    Diagnostic,
    Meeting,
    MoveResult,
    Project,
    SolutionRef,
    Subject,
)
from .segmenter import LeveledMove, Sequence


class ExchangeKind(enum.Enum):
    COGNITIVE_SYNCHRONISATION = ("COGN.SYNCHRO", "SYNCH")
    REVIEW = ("REVIEW", "REV")
    CONFLICT_RESOLUTION = ("CONFLICT", "CONF")
    ALTERNATIVE_ELABORATION = ("ALT.ELAB", "ALT")
    MANAGEMENT = ("MANAGEMENT", "MAN")

    def __init__(self, label: str, token: str):
        self.label = label
        self.token = token

    @classmethod
    def from_label(cls, label: str) -> "ExchangeKind":
        for kind in cls:
            if label in (kind.label, kind.token, kind.name):
                return kind
        raise ValueError(f"unknown exchange kind {label!r}")


INTRO_TOKEN = "INTRO"


def subject_class(subject: Subject) -> str:
    """Fine-grained class of a subject, shared with the distribution tables."""
    if isinstance(subject, SolutionRef):
        return "solution"
    if isinstance(subject, (Project, Meeting)):
        return "task"
    if isinstance(subject, CriterionRef):
        return "criterion"
    assert isinstance(subject, MoveResult)
    return {
        Activity.INTRO: "introduction",
        Activity.DEV: "alternative",
        Activity.HYP: "hypothesis",
        Activity.INFO: "information",
        Activity.EVAL: "evaluation",
        Activity.JUSTIF: "justification",
        Activity.REJ: "rejection",
        Activity.ACC: "acceptance",
        Activity.MAN: "management",
    }[subject.activity]


_DESIGN = frozenset({"solution", "introduction", "criterion", "alternative"})

# head activities and the subject classes each pattern admits
PATTERNS: dict[ExchangeKind, tuple[frozenset, frozenset, frozenset]] = {
    ExchangeKind.COGNITIVE_SYNCHRONISATION: (
        frozenset({Activity.INFO, Activity.HYP}),
        _DESIGN,
        frozenset({"information", "hypothesis"}),
    ),
    ExchangeKind.REVIEW: (
        frozenset({Activity.EVAL, Activity.JUSTIF}),
        _DESIGN,
        frozenset({"evaluation", "justification"}),
    ),
    ExchangeKind.CONFLICT_RESOLUTION: (
        frozenset({Activity.REJ}),
        _DESIGN | {"hypothesis"},
        frozenset({"rejection"}),
    ),
    ExchangeKind.ALTERNATIVE_ELABORATION: (
        frozenset({Activity.DEV}),
        frozenset({"alternative", "solution", "introduction"}),
        frozenset({"alternative"}),
    ),
    ExchangeKind.MANAGEMENT: (
        frozenset({Activity.MAN}),
        frozenset({"task"}),
        frozenset(),
    ),
}

HEAD_KIND = {act: kind for kind, (heads, _, _) in PATTERNS.items() for act in heads}


@dataclass
class Exchange:
    kind: ExchangeKind
    moves: list[LeveledMove]
    warnings: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def opener(self) -> LeveledMove:
        heads = PATTERNS[self.kind][0]
        for lm in self.moves:
            if lm.move.activity in heads and not lm.move.is_request:
                return lm
        for lm in self.moves:
            if lm.move.activity in heads:
                return lm
        return self.moves[0]

    @property
    def degenerate(self) -> bool:
        """True when no asserted head move answers the pattern (lone request or orphan)."""
        heads = PATTERNS[self.kind][0]
        return not any(lm.move.activity in heads and not lm.move.is_request for lm in self.moves)

    def ranks(self) -> list:
        return [lm.move.rank for lm in self.moves]


def _decide(m: CodedMove) -> tuple[Optional[ExchangeKind], Optional[str]]:
    """Pattern a move opens, or None when it is absorbed into the open exchange."""
    kind = HEAD_KIND.get(m.activity)
    if kind is None:
        return None, None
    if subject_class(m.subject) not in PATTERNS[kind][1]:
        return kind, (
            f"move {m.move_id}: {m.activity.value} on a {subject_class(m.subject)} subject "
            f"fits no exchange pattern"
        )
    return kind, None


def _answers(answer: CodedMove, request: CodedMove) -> bool:
    subj = answer.subject
    return subj == request.subject or (isinstance(subj, MoveResult) and subj.rank == request.rank)


class _Builder:
    def __init__(self) -> None:
        self.exchanges: list[Exchange] = []
        self.orphans: list[LeveledMove] = []

    @property
    def current(self) -> Optional[Exchange]:
        return self.exchanges[-1] if self.exchanges else None

    def place(self, lm: LeveledMove, kind: Optional[ExchangeKind], warning: Optional[str]) -> None:
        cur = self.current
        if warning is not None and cur is not None:
            # unclassifiable: attach to the enclosing exchange
            cur.moves.append(lm)
            cur.warnings.append(warning)
            return
        if kind is None:
            if cur is None:
                self.orphans.append(lm)
            else:
                cur.moves.append(lm)
            return
        if cur is not None and cur.kind is kind:
            cur.moves.append(lm)
        else:
            self.exchanges.append(Exchange(kind, self.orphans + [lm]))
            self.orphans = []
        if warning is not None:
            self.current.warnings.append(warning)

    def finish(self) -> list[Exchange]:
        if self.orphans:
            if self.exchanges:  # pragma: no cover - orphans only exist before the first exchange
                self.exchanges[-1].moves.extend(self.orphans)
            else:
                ex = Exchange(ExchangeKind.REVIEW, self.orphans)
                ex.warnings.append("no head activity in sequence; acceptance recorded as a degenerate review")
                self.exchanges.append(ex)
            self.orphans = []
        for ex in self.exchanges:
            if ex.kind is ExchangeKind.CONFLICT_RESOLUTION:
                for lm in ex.moves:
                    m = lm.move
                    if m.activity is Activity.REJ and subject_class(m.subject) != "hypothesis":
                        ex.notes.append(
                            f"REJ {m.move_id} targets a {subject_class(m.subject)}; may also read as a negative review"
                        )
        return self.exchanges


def classify(seq: Sequence) -> list[Exchange]:
    moves = list(seq.moves)
    if moves and moves[0].move.opens_solution():
        moves = moves[1:]
    b = _Builder()
    pending: list[LeveledMove] = []
    for lm in moves:
        m = lm.move
        if m.is_request:
            pending.append(lm)
            continue
        kind, warning = _decide(m)
        split = len(pending)
        while split > 0 and _answers(m, pending[split - 1].move):
            split -= 1
        for req in pending[:split]:
            b.place(req, *_decide(req.move))
        # answered requests follow their answer: absorbed when it is
        target = None if (warning is not None and b.current is not None) else kind
        for req in pending[split:]:
            b.place(req, target, None)
        pending = []
        b.place(lm, kind, warning)
    for req in pending:
        b.place(req, *_decide(req.move))
    return b.finish()


def exchange_diagnostics(exchanges: Iterable[Exchange]) -> list[Diagnostic]:
    out = []
    for ex in exchanges:
        line = ex.moves[0].move.line
        for w in ex.warnings:
            out.append(Diagnostic("warning", w, line=line, rank=ex.moves[0].move.rank))
    return out


def stream_for(seq: Sequence, exchanges: Iterable[Exchange]) -> list[str]:
    tokens = [INTRO_TOKEN] if seq.moves and seq.opener.move.opens_solution() else []
    tokens.extend(ex.kind.token for ex in exchanges)
    return tokens


def exchange_stream(classified: Iterable[tuple[Sequence, list[Exchange]]]) -> list[list[str]]:
    """One token stream per sequence: INTRO for the opener, then one token per exchange."""
    return [stream_for(seq, exs) for seq, exs in classified]
