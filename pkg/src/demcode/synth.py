"""Seeded generators for synthetic corpora and configuration streams.

Everything here takes an explicit ``random.Random`` so that outputs are a
pure function of the seed.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence as Seq

from .criteria import DEFAULT_REGISTRY, CriterionRegistry
from .model import (
    IMPLICIT_SPEAKER,
    POLARIZABLE,
    Activity,
    Attribute,
    CodedMove,
    CriterionKind,
    CriterionRef,
    Meeting,
    MoveType,
    Polarity,
    Project,
    Rank,
    SolutionRef,
    Transcript,
)

SPEAKERS = ("A", "B", "C", "M")
WORDS = ("the", "field", "array", "message", "type", "we", "need", "define", "fix", "check", "memory", "why", "ok")

# non-opening activities and their relative frequency in generated sequences
BODY_WEIGHTS = {
    Activity.INFO: 4,
    Activity.HYP: 2,
    Activity.EVAL: 3,
    Activity.JUSTIF: 3,
    Activity.DEV: 2,
    Activity.REJ: 2,
    Activity.ACC: 3,
    Activity.INTRO: 1,
}


def _text(rng: random.Random) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(1, 8)))


def _attribute(rng: random.Random, registry: CriterionRegistry) -> Attribute:
    kind = rng.choice((CriterionKind.FORM, CriterionKind.CONTENT))
    letters = sorted(registry.column(kind))
    return Attribute(kind, rng.choice(letters))


class _Writer:
    def __init__(self, rng: random.Random, registry: CriterionRegistry):
        self.rng = rng
        self.registry = registry
        self.rank = 0
        self.moves: list[CodedMove] = []

    def next_rank(self) -> Rank:
        self.rank += self.rng.choice((1, 1, 1, 2, 3))
        return Rank(self.rank)

    def emit(self, **kw) -> CodedMove:
        m = CodedMove(rank=self.next_rank(), **kw)
        self.moves.append(m)
        return m

    def solution_sequence(self, label: str, length: int) -> None:
        rng = self.rng
        implicit = rng.random() < 0.3
        opener = self.emit(
            speaker=IMPLICIT_SPEAKER if implicit else rng.choice(SPEAKERS),
            activity=Activity.INTRO,
            subject=SolutionRef(label),
            text="" if implicit else _text(rng),
        )
        body: list[CodedMove] = [opener]
        attributes: list[Attribute] = []
        acts, weights = zip(*BODY_WEIGHTS.items())
        for _ in range(length):
            activity = rng.choices(acts, weights)[0]
            roll = rng.random()
            if attributes and roll < 0.1:
                attr = rng.choice(attributes)
                subject = CriterionRef(attr.kind, attr.criterion)
            elif roll < 0.3:
                subject = SolutionRef(label)
            else:
                target = rng.choice(body)
                subject = target.result
            if activity is Activity.INTRO and isinstance(subject, SolutionRef):
                subject = opener.result  # a nested INTRO never opens a sequence
            polarity = rng.choice((None, Polarity.POSITIVE, Polarity.NEGATIVE)) if activity in POLARIZABLE else None
            attribute = _attribute(rng, self.registry) if rng.random() < 0.4 else None
            m = self.emit(
                speaker=rng.choice(SPEAKERS),
                activity=activity,
                subject=subject,
                text=_text(rng),
                move_type=MoveType.REQUEST if rng.random() < 0.15 else MoveType.ASSERTION,
                attribute=attribute,
                polarity=polarity,
            )
            body.append(m)
            if attribute is not None:
                attributes.append(attribute)

    def management_sequence(self, length: int) -> None:
        rng = self.rng
        for i in range(max(1, length)):
            self.emit(
                speaker=rng.choice(SPEAKERS),
                activity=Activity.MAN,
                subject=rng.choice((Project(), Meeting())),
                text=_text(rng),
                move_type=MoveType.REQUEST if i and rng.random() < 0.2 else MoveType.ASSERTION,
            )


def random_transcript(
    rng: random.Random,
    n_sequences: int,
    meeting_id: str = "synthetic",
    max_body: int = 10,
    p_management: float = 0.1,
    registry: CriterionRegistry = DEFAULT_REGISTRY,
) -> Transcript:
    """A valid, normalized transcript with ``n_sequences`` sequences."""
    w = _Writer(rng, registry)
    for i in range(n_sequences):
        if w.moves and rng.random() < p_management:
            w.management_sequence(rng.randint(1, 4))
        else:
            w.solution_sequence(f"s{i}", rng.randint(0, max_body))
    return Transcript(meeting_id, tuple(w.moves))


def random_corpus(
    rng: random.Random,
    n_sequences: int,
    per_meeting: int = 25,
    registry: CriterionRegistry = DEFAULT_REGISTRY,
    **kw,
) -> list[Transcript]:
    out = []
    left = n_sequences
    while left > 0:
        n = min(per_meeting, left)
        out.append(random_transcript(rng, n, meeting_id=f"synthetic-{len(out) + 1}", registry=registry, **kw))
        left -= n
    return out


# --- configuration streams --------------------------------------------------

EXCHANGE_TOKENS = {"INTRO": "INTRO", "SYNCH": "SYNCH", "EVAL": "REV", "DEV": "ALT"}


def configuration_stream(
    rng: random.Random,
    p_synch: float = 0.5,
    weights: Seq[float] = (1.0, 1.0, 1.0),
) -> list[str]:
    """INTRO, optionally SYNCH, then one of EVAL | DEV EVAL | EVAL DEV."""
    stream = ["INTRO"]
    if rng.random() < p_synch:
        stream.append("SYNCH")
    tail = rng.choices((["EVAL"], ["DEV", "EVAL"], ["EVAL", "DEV"]), weights)[0]
    return stream + tail


def configuration_streams(rng: random.Random, n: int, **kw) -> list[list[str]]:
    return [configuration_stream(rng, **kw) for _ in range(n)]


def realize_streams(
    streams: Seq[Seq[str]],
    meeting_id: str = "configurations",
    rng: Optional[random.Random] = None,
) -> Transcript:
    """A transcript whose exchange streams are ``streams`` (under EXCHANGE_TOKENS)."""
    rng = rng or random.Random(0)
    w = _Writer(rng, DEFAULT_REGISTRY)
    for i, stream in enumerate(streams):
        opener = None
        last_dev = None
        for token in stream:
            speaker = rng.choice(SPEAKERS)
            if token == "INTRO":
                opener = w.emit(speaker=speaker, activity=Activity.INTRO, subject=SolutionRef(f"c{i}"), text=_text(rng))
            elif token == "SYNCH":
                w.emit(speaker=speaker, activity=Activity.INFO, subject=opener.result, text=_text(rng))
            elif token == "EVAL":
                target = last_dev or opener
                w.emit(speaker=speaker, activity=Activity.EVAL, subject=target.result, text=_text(rng))
            elif token == "DEV":
                last_dev = w.emit(speaker=speaker, activity=Activity.DEV, subject=opener.result, text=_text(rng))
            else:
                raise ValueError(f"cannot realize token {token!r}")
    return Transcript(meeting_id, tuple(w.moves))
