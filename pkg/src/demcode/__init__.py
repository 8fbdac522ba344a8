"""Analysis of coded design-evaluation meeting transcripts.

The chain runs codec -> segmenter -> exchanges, feeding the statistics in
:mod:`demcode.analytics` and the design-rationale graphs in :mod:`demcode.qoc`.
"""

from .codec import CodecError, normalize, parse_move, parse_transcript, render_move, render_transcript, validate
from .criteria import CriterionRegistry
from .exchanges import Exchange, ExchangeKind, classify, exchange_stream
from .model import Activity, CodedMove, Diagnostic, Rank, Transcript
from .pipeline import Analysis, analyse_transcript
from .qoc import QocGraph, export_qoc, extract_qoc
from .segmenter import LeveledMove, Sequence, assign_levels, segment, segment_sequences

__version__ = "0.1.0"

__all__ = [
    "Activity",
    "Analysis",
    "CodecError",
    "CodedMove",
    "CriterionRegistry",
    "Diagnostic",
    "Exchange",
    "ExchangeKind",
    "LeveledMove",
    "QocGraph",
    "Rank",
    "Sequence",
    "Transcript",
    "analyse_transcript",
    "assign_levels",
    "classify",
    "exchange_stream",
    "export_qoc",
    "extract_qoc",
    "normalize",
    "parse_move",
    "parse_transcript",
    "render_move",
    "render_transcript",
    "segment",
    "segment_sequences",
    "validate",
]
