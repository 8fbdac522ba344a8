"""Reading, checking and writing coded transcripts.

Record format, one move per line::

    rank|speaker|text|code-tail

where the code tail is ``[REQ/]ACTIVITY[+|-]/SUBJECT[/CRIT.<F|C><letter>]``.
A transcript file starts with a ``# meeting: <id>`` header; blank lines and
further ``#`` lines are ignored.
"""

from __future__ import annotations

import io
import re
from typing import Iterable, Optional, TextIO, Union

from .criteria import DEFAULT_REGISTRY, CriterionRegistry
from .model import (
    IMPLICIT_SPEAKER,
    POLARIZABLE,
    Activity,
    Attribute,
    CodedMove,
    CriterionKind,
    CriterionRef,
    Diagnostic,
    Meeting,
    MoveResult,
    MoveType,
    Polarity,
    Project,
    Rank,
    SolutionRef,
    Subject,
    Transcript,
)

HEADER_RE = re.compile(r"^#\s*meeting:\s*(\S.*?)\s*$")
_RESULT_RE = re.compile(r"^([A-Z]+)(\d+(?:\.\d+)?)$")
_CRIT_RE = re.compile(r"^CRIT\.([A-Z])([a-z]?)$")
_SOL_RE = re.compile(r"^SOL([A-Za-z0-9_]+)$")


class CodecError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, token: Optional[str] = None):
        self.line = line
        self.token = token
        self.reason = message
        detail = f" (at {token!r})" if token is not None else ""
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}{detail}")

    def diagnostic(self) -> Diagnostic:
        detail = f" (at {self.token!r})" if self.token is not None else ""
        return Diagnostic("error", f"{self.reason}{detail}", line=self.line)


def _activity(token: str, line: Optional[int]) -> Activity:
    try:
        return Activity(token)
    except ValueError:
        raise CodecError("unknown activity tag", line, token) from None


def _criterion(token: str, registry: CriterionRegistry, line: Optional[int]) -> tuple[CriterionKind, Optional[str]]:
    match = _CRIT_RE.match(token)
    if not match:
        raise CodecError("unparsable criterion", line, token)
    try:
        kind = CriterionKind.from_code(match.group(1))
    except ValueError:
        raise CodecError("criterion kind must be F or C", line, token) from None
    letter = match.group(2) or None
    if letter is not None and not registry.has(kind, letter):
        raise CodecError(f"unknown {kind.value} criterion letter", line, token)
    return kind, letter


def parse_subject(token: str, registry: CriterionRegistry = DEFAULT_REGISTRY, line: Optional[int] = None) -> Subject:
    if token == "PROJ":
        return Project()
    if token == "MEET":
        return Meeting()
    sol = _SOL_RE.match(token)
    if sol:
        return SolutionRef(sol.group(1))
    if token.startswith("CRIT."):
        return CriterionRef(*_criterion(token, registry, line))
    res = _RESULT_RE.match(token)
    if res:
        activity = _activity(res.group(1), line)
        rank = Rank.parse(res.group(2))
        if rank.number < 1:
            raise CodecError("unparsable subject", line, token)
        return MoveResult(activity, rank)
    raise CodecError("unparsable subject", line, token)


def parse_code(
    tail: str,
    registry: CriterionRegistry = DEFAULT_REGISTRY,
    line: Optional[int] = None,
) -> tuple[MoveType, Activity, Optional[Polarity], Subject, Optional[Attribute]]:
    """Parse ``[REQ/]ACTIVITY[+|-]/SUBJECT[/ATTRIBUTE]``."""
    parts = tail.strip().split("/")
    move_type = MoveType.ASSERTION
    if parts and parts[0] == "REQ":
        move_type = MoveType.REQUEST
        parts = parts[1:]
    if len(parts) not in (2, 3):
        raise CodecError(f"code needs ACTIVITY/SUBJECT[/ATTRIBUTE], got {len(parts)} field(s)", line, tail)
    tag = parts[0]
    polarity = None
    if tag[-1:] in ("+", "-"):
        polarity = Polarity(tag[-1])
        tag = tag[:-1]
    activity = _activity(tag, line)
    if polarity is not None and activity not in POLARIZABLE:
        raise CodecError(f"polarity suffix not allowed on {activity.value}", line, parts[0])
    subject = parse_subject(parts[1], registry, line)
    attribute = None
    if len(parts) == 3:
        attribute = Attribute(*_criterion(parts[2], registry, line))
    return move_type, activity, polarity, subject, attribute


def parse_move(line: str, lineno: Optional[int] = None, registry: CriterionRegistry = DEFAULT_REGISTRY) -> CodedMove:
    record = line.rstrip("\r\n")
    fields = record.split("|", 2)
    if len(fields) < 3 or "|" not in fields[2]:
        count = len(record.split("|"))
        raise CodecError(f"expected 4 pipe-delimited fields, got {count}", lineno, record)
    rank_tok, speaker, rest = fields
    text, code = rest.rsplit("|", 1)
    speaker = speaker.strip()
    if not speaker or any(ch.isspace() for ch in speaker):
        raise CodecError("speaker must be a non-empty token", lineno, speaker)
    try:
        rank = Rank.parse(rank_tok.strip())
    except ValueError:
        raise CodecError("bad rank", lineno, rank_tok) from None
    if rank.sub is not None and speaker != IMPLICIT_SPEAKER:
        raise CodecError("sub-ranks are reserved for implicit moves", lineno, rank_tok)
    move_type, activity, polarity, subject, attribute = parse_code(code, registry, lineno)
    return CodedMove(
        rank=rank,
        speaker=speaker,
        activity=activity,
        subject=subject,
        text=text.strip(),
        move_type=move_type,
        attribute=attribute,
        polarity=polarity,
        line=lineno,
    )


def render_move(m: CodedMove) -> str:
    return f"{m.rank}|{m.speaker}|{m.text}|{m.code}"


def _lines(stream: Union[str, TextIO, Iterable[str]]) -> Iterable[str]:
    if isinstance(stream, str):
        return io.StringIO(stream)
    return stream


def parse_transcript(
    stream: Union[str, TextIO, Iterable[str]],
    registry: CriterionRegistry = DEFAULT_REGISTRY,
    first_line: int = 1,
) -> Transcript:
    meeting_id = None
    moves: list[CodedMove] = []
    for lineno, raw in enumerate(_lines(stream), start=first_line):
        line = raw.rstrip("\r\n")
        if meeting_id is None:
            if not line.strip():
                continue
            header = HEADER_RE.match(line)
            if not header:
                raise CodecError("missing '# meeting: <id>' header", lineno, line)
            meeting_id = header.group(1)
            continue
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        move = parse_move(line, lineno, registry)
        if moves:
            prev = moves[-1].rank
            if move.rank == prev:
                raise CodecError(f"duplicate rank {move.rank}", lineno, str(move.rank))
            if move.rank < prev:
                raise CodecError(f"non-increasing rank {move.rank} after {prev}", lineno, str(move.rank))
        moves.append(move)
    if meeting_id is None:
        raise CodecError("missing '# meeting: <id>' header", first_line)
    return Transcript(meeting_id, tuple(moves))


def render_transcript(t: Transcript) -> str:
    lines = [f"# meeting: {t.meeting_id}"]
    lines.extend(render_move(m) for m in t.moves)
    return "\n".join(lines) + "\n"


def _diag(severity: str, m: CodedMove, message: str) -> Diagnostic:
    return Diagnostic(severity, f"move {m.move_id}: {message}", line=m.line, rank=m.rank)


def validate(t: Transcript) -> list[Diagnostic]:
    """Check the referential and subject-restriction rules of a transcript.

    Errors break later analysis (dangling references, misplaced PROJ/MEET,
    malformed implicit moves). Warnings flag codings that are legal but
    suspicious, such as un-introduced solutions (fixed by ``normalize``).
    """
    out: list[Diagnostic] = []
    seen: dict[Rank, CodedMove] = {}
    introduced: set[str] = set()
    criteria_used: set[tuple] = set()
    prev: Optional[Rank] = None
    for m in t.moves:
        if prev is not None and not prev < m.rank:
            out.append(_diag("error", m, f"rank {m.rank} does not follow {prev}"))
        prev = m.rank
        subj = m.subject
        if m.is_implicit:
            if m.activity is not Activity.INTRO:
                out.append(_diag("error", m, "implicit move must be an INTRO"))
            if m.text:
                out.append(_diag("error", m, "implicit move must have empty text"))
        if isinstance(subj, (Project, Meeting)) and m.activity is not Activity.MAN:
            out.append(_diag("error", m, f"{subj} is exclusively a subject of MAN"))
        if m.activity is Activity.MAN and isinstance(subj, SolutionRef):
            out.append(_diag("warning", m, f"MAN takes a project or meeting subject, not {subj}"))
        if isinstance(subj, MoveResult):
            target = seen.get(subj.rank)
            if target is None:
                out.append(_diag("error", m, f"dangling reference {subj}: no earlier move at rank {subj.rank}"))
            elif target.activity is not subj.activity:
                out.append(
                    _diag("error", m, f"dangling reference {subj}: move {subj.rank} is {target.activity.value}")
                )
        elif isinstance(subj, SolutionRef):
            if m.activity is Activity.INTRO:
                introduced.add(subj.label)
            elif subj.label not in introduced:
                out.append(_diag("warning", m, f"{subj} used before any introduction (run normalize)"))
        elif isinstance(subj, CriterionRef):
            if (subj.kind, subj.letter) not in criteria_used:
                out.append(_diag("error", m, f"criterion subject {subj} is not an attribute of any earlier move"))
        if m.attribute is not None:
            criteria_used.add((m.attribute.kind, m.attribute.criterion))
        seen[m.rank] = m
    return out


def implicit_intro(label: str, before: CodedMove) -> CodedMove:
    return CodedMove(
        rank=Rank(before.rank.number, 0),
        speaker=IMPLICIT_SPEAKER,
        activity=Activity.INTRO,
        subject=SolutionRef(label),
    )


def normalize(t: Transcript) -> Transcript:
    """Insert an implicit INTRO before the first use of each un-introduced solution."""
    introduced: set[str] = set()
    out: list[CodedMove] = []
    changed = False
    for m in t.moves:
        subj = m.subject
        if isinstance(subj, SolutionRef):
            if m.activity is not Activity.INTRO and subj.label not in introduced and m.rank.sub is None:
                out.append(implicit_intro(subj.label, m))
                changed = True
            introduced.add(subj.label)
        out.append(m)
    if not changed:
        return t
    return Transcript(t.meeting_id, tuple(out))


def parse_corpus(
    stream: Union[str, TextIO, Iterable[str]],
    registry: CriterionRegistry = DEFAULT_REGISTRY,
) -> list[Transcript]:
    """Split a concatenation of transcript files at their headers."""
    chunks: list[list[str]] = []
    offsets: list[int] = []
    for lineno, raw in enumerate(_lines(stream), start=1):
        if HEADER_RE.match(raw.rstrip("\r\n")) or not chunks:
            if not chunks and not raw.strip():
                continue
            chunks.append([])
            offsets.append(lineno - 1)
        chunks[-1].append(raw)
    return [parse_transcript(chunk, registry, offset + 1) for offset, chunk in zip(offsets, chunks)]
