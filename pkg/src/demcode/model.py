"""Typed model of coded meeting transcripts.

A move is one speaker contribution described by five characteristics:
its ID (speaker + rank), TYPE (assertion or request), ACTIVITY, SUBJECT
and an optional ATTRIBUTE (a form or content criterion).
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Optional, Union

IMPLICIT_SPEAKER = "--"


class Activity(str, enum.Enum):
    MAN = "MAN"
    INTRO = "INTRO"
    DEV = "DEV"
    EVAL = "EVAL"
    HYP = "HYP"
    INFO = "INFO"
    JUSTIF = "JUSTIF"
    ACC = "ACC"
    REJ = "REJ"

    def __str__(self) -> str:
        return self.value


class MoveType(str, enum.Enum):
    ASSERTION = "assertion"
    REQUEST = "request"


class Polarity(str, enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"


# Activities that may carry a +/- polarity suffix.
POLARIZABLE = frozenset({Activity.EVAL, Activity.JUSTIF, Activity.REJ})


class CriterionKind(str, enum.Enum):
    FORM = "form"
    CONTENT = "content"

    @property
    def code(self) -> str:
        return "F" if self is CriterionKind.FORM else "C"

    @classmethod
    def from_code(cls, code: str) -> "CriterionKind":
        if code == "F":
            return cls.FORM
        if code == "C":
            return cls.CONTENT
        raise ValueError(f"criterion kind must be F or C, got {code!r}")


@functools.total_ordering
@dataclass(frozen=True)
class Rank:
    """Position of a move in the polylogue.

    ``sub`` is only set on synthesized implicit moves; ``52.0`` sorts
    immediately before ``52``.
    """

    number: int
    sub: Optional[int] = None

    def _key(self) -> tuple[int, int, int]:
        return (self.number, 0 if self.sub is not None else 1, self.sub or 0)

    def __lt__(self, other: "Rank") -> bool:
        if not isinstance(other, Rank):
            return NotImplemented
        return self._key() < other._key()

    def __str__(self) -> str:
        return str(self.number) if self.sub is None else f"{self.number}.{self.sub}"

    @classmethod
    def parse(cls, token: str) -> "Rank":
        head, dot, tail = token.partition(".")
        if not head.isdigit() or (dot and not tail.isdigit()):
            raise ValueError(f"bad rank {token!r}")
        number = int(head)
        if number < 1:
            raise ValueError(f"rank must be positive, got {token!r}")
        return cls(number, int(tail) if dot else None)


@dataclass(frozen=True)
class SolutionRef:
    label: str

    def __str__(self) -> str:
        return f"SOL{self.label}"


@dataclass(frozen=True)
class Project:
    def __str__(self) -> str:
        return "PROJ"


@dataclass(frozen=True)
class Meeting:
    def __str__(self) -> str:
        return "MEET"


@dataclass(frozen=True)
class MoveResult:
    """The object created by an earlier move, e.g. ``HYP57``."""

    activity: Activity
    rank: Rank

    def __str__(self) -> str:
        return f"{self.activity.value}{self.rank}"


@dataclass(frozen=True)
class CriterionRef:
    """A criterion taken as the subject of a move (nesting Rule B)."""

    kind: CriterionKind
    letter: Optional[str] = None

    def __str__(self) -> str:
        return f"CRIT.{self.kind.code}{self.letter or ''}"


Subject = Union[SolutionRef, Project, Meeting, MoveResult, CriterionRef]


@dataclass(frozen=True)
class Attribute:
    kind: CriterionKind
    criterion: Optional[str] = None

    def __str__(self) -> str:
        return f"CRIT.{self.kind.code}{self.criterion or ''}"

    def as_subject(self) -> CriterionRef:
        return CriterionRef(self.kind, self.criterion)


@dataclass(frozen=True)
class CodedMove:
    rank: Rank
    speaker: str
    activity: Activity
    subject: Subject
    text: str = ""
    move_type: MoveType = MoveType.ASSERTION
    attribute: Optional[Attribute] = None
    polarity: Optional[Polarity] = None
    # source line in the transcript file, for diagnostics only
    line: Optional[int] = field(default=None, compare=False)

    @property
    def is_implicit(self) -> bool:
        return self.speaker == IMPLICIT_SPEAKER

    @property
    def is_request(self) -> bool:
        return self.move_type is MoveType.REQUEST

    @property
    def word_count(self) -> int:
        return len(self.text.split())

    @property
    def result(self) -> MoveResult:
        """The object this move instantiates, referable by later moves."""
        return MoveResult(self.activity, self.rank)

    @property
    def move_id(self) -> str:
        return f"{self.speaker}{self.rank}"

    @property
    def code(self) -> str:
        parts = []
        if self.is_request:
            parts.append("REQ")
        parts.append(self.activity.value + (self.polarity.value if self.polarity else ""))
        parts.append(str(self.subject))
        if self.attribute is not None:
            parts.append(str(self.attribute))
        return "/".join(parts)

    def opens_solution(self) -> bool:
        return self.activity is Activity.INTRO and isinstance(self.subject, SolutionRef)


@dataclass(frozen=True)
class Transcript:
    meeting_id: str
    moves: tuple[CodedMove, ...] = ()

    def __len__(self) -> int:
        return len(self.moves)

    def by_rank(self) -> dict[Rank, CodedMove]:
        return {m.rank: m for m in self.moves}


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning" | "info"
    message: str
    line: Optional[int] = None
    rank: Optional[Rank] = None

    def __str__(self) -> str:
        where = self.line if self.line is not None else "-"
        return f"{self.severity}:{where}:{self.message}"

    @property
    def is_error(self) -> bool:
        return self.severity == "error"
