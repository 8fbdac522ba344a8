"""Tabular exports (CSV with RFC-4180 quoting, JSON) and re-reading them.

The segment and exchange tables carry the original ``rank|speaker|text|code``
fields, so a downstream command can rebuild the transcript from them and
recompute everything else.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Mapping, Sequence as Seq

from .codec import HEADER_RE, CodecError, parse_corpus, parse_move
from .criteria import DEFAULT_REGISTRY, CriterionRegistry
from .model import Rank, Transcript
from .pipeline import Analysis

SEGMENT_COLUMNS = ("meeting", "rank", "speaker", "text", "code", "level", "rule", "sequence")
EXCHANGE_COLUMNS = SEGMENT_COLUMNS + ("exchange", "exchange_kind")


def segment_records(a: Analysis) -> list[dict]:
    return [
        {
            "meeting": a.transcript.meeting_id,
            "rank": str(lm.move.rank),
            "speaker": lm.move.speaker,
            "text": lm.move.text,
            "code": lm.move.code,
            "level": lm.level,
            "rule": lm.rule.column,
            "sequence": seq.index,
        }
        for seq in a.sequences
        for lm in seq.moves
    ]


def exchange_records(a: Analysis) -> list[dict]:
    where: dict = {}
    for exs in a.exchanges:
        for i, ex in enumerate(exs, start=1):
            for lm in ex.moves:
                where[lm.move.rank] = (i, ex.kind.label)
    out = []
    for rec in segment_records(a):
        index, label = where.get(Rank.parse(rec["rank"]), ("", ""))
        out.append({**rec, "exchange": index, "exchange_kind": label})
    return out


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(records: Iterable[Mapping], columns: Seq[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_cell(rec.get(c)) for c in columns])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def columns_of(records: Seq[Mapping]) -> list[str]:
    cols: list[str] = []
    for rec in records:
        for k in rec:
            if k not in cols:
                cols.append(k)
    return cols


def _records_to_transcripts(records: Iterable[Mapping], registry: CriterionRegistry) -> list[Transcript]:
    groups: dict[str, list] = {}
    for n, rec in enumerate(records, start=2):
        try:
            fields = [str(rec[c]) for c in ("meeting", "rank", "speaker", "text", "code")]
        except KeyError as exc:
            raise CodecError(f"table lacks column {exc.args[0]!r}", n) from None
        meeting, rank, speaker, text, code = fields
        groups.setdefault(meeting, []).append(parse_move(f"{rank}|{speaker}|{text}|{code}", n, registry))
    return [Transcript(meeting, tuple(moves)) for meeting, moves in groups.items()]


def read_input(text: str, registry: CriterionRegistry = DEFAULT_REGISTRY) -> list[Transcript]:
    """Transcripts from a transcript file, a CSV table or a JSON table."""
    head = text.lstrip()
    if not head:
        return []
    if HEADER_RE.match(head.splitlines()[0]):
        return parse_corpus(text, registry)
    if head[0] == "[":
        try:
            records = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CodecError(f"invalid JSON table: {exc.msg}", exc.lineno) from None
        if not isinstance(records, list) or not all(isinstance(r, dict) for r in records):
            raise CodecError("JSON table must be an array of objects", 1)
        return _records_to_transcripts(records, registry)
    reader = csv.DictReader(io.StringIO(text, newline=""))
    if reader.fieldnames is None or "code" not in reader.fieldnames:
        raise CodecError("input is neither a transcript (missing '# meeting: <id>' header) nor a table", 1)
    return _records_to_transcripts(reader, registry)
