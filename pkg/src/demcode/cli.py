"""Command-line entry point: ``demcode <command> [options] FILE...``.

Exit status is 0 on success, 1 when a diagnostic of error severity was
reported, and 2 on usage errors. Diagnostics go to standard error as
``severity:line:message``; reports go to standard output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Callable, Optional, Sequence as Seq

from . import __version__
from .analytics import (
    DistributionError,
    ReliabilityError,
    activity_distribution,
    cluster,
    level_distribution,
    lsa,
    mine_configurations,
    reliability,
    subject_distribution,
)
from .analytics.lsa import report_to_dot
from .analytics.mining import grammar_to_dot
from .codec import CodecError, normalize, render_transcript, validate
from .criteria import ENV_VAR, CriterionRegistry
from .exchanges import exchange_stream
from .model import Activity, Diagnostic, Transcript
from .pipeline import Analysis, AnalysisError, activity_streams, analyse_transcript, paired_codes
from .qoc import QocError, export_corpus, export_qoc, extract_qoc
from .synth import configuration_streams, random_corpus, realize_streams
from .tables import EXCHANGE_COLUMNS, SEGMENT_COLUMNS, exchange_records, read_input, segment_records, to_csv, to_json

DIAGNOSTIC_COLUMNS = ("meeting", "severity", "line", "rank", "message")
STATS_COLUMNS = ("dimension", "scope", "label", "count", "share", "words", "word_share")
LSA_COLUMNS = ("antecedent", "consequent", "count", "expected", "z", "p", "significant")
RULE_COLUMNS = ("cycle", "left", "right", "token", "z", "p", "replacements")
MERGE_COLUMNS = ("step", "left", "right", "height", "size")
KAPPA_COLUMNS = (
    "n_items",
    "categories",
    "observed_agreement",
    "expected_agreement",
    "kappa",
    "perrault_leigh",
    "kappa_undefined",
)


class Failure(Exception):
    """Abort the command with error diagnostics already collected."""


class Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.errors = False

    def report(self, diagnostics: Seq[Diagnostic], source: str = "") -> None:
        for d in diagnostics:
            msg = f"{source}: {d.message}" if source else d.message
            print(Diagnostic(d.severity, msg, d.line, d.rank), file=sys.stderr)
            self.errors |= d.is_error

    def registry(self) -> CriterionRegistry:
        try:
            return CriterionRegistry.from_env(self.args.criteria)
        except (OSError, ValueError) as exc:
            self.report([Diagnostic("error", f"criterion registry: {exc}")])
            raise Failure from None

    def load(self, paths: Seq[str]) -> list[tuple[str, Transcript]]:
        registry = self.registry()
        out = []
        for path in paths:
            name = "<stdin>" if path == "-" else path
            try:
                if path == "-":
                    text = sys.stdin.read()
                else:
                    with open(path, encoding="utf-8") as fh:
                        text = fh.read()
                out.extend((name, t) for t in read_input(text, registry))
            except OSError as exc:
                self.report([Diagnostic("error", f"cannot read input: {exc.strerror}")], name)
                raise Failure from None
            except CodecError as exc:
                self.report([exc.diagnostic()], name)
                raise Failure from None
        return out

    def analyse(self, paths: Seq[str]) -> list[Analysis]:
        out = []
        for name, t in self.load(paths):
            try:
                a = analyse_transcript(t)
            except AnalysisError as exc:
                self.report(exc.diagnostics, name)
                raise Failure from None
            self.report(a.diagnostics, name)
            out.append(a)
        return out

    def classified(self, paths: Seq[str]):
        include = self.args.include_management
        return [pair for a in self.analyse(paths) for pair in a.classified(include)]


def _write(data) -> None:
    if isinstance(data, str):
        data = data.encode("utf-8")
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()


def _table(ctx: Context, records: list[dict], columns: Seq[str], json_doc=None) -> None:
    if ctx.args.format == "json":
        _write(to_json(records if json_doc is None else json_doc))
    else:
        _write(to_csv(records, columns))


# --- commands ---------------------------------------------------------------

def cmd_validate(ctx: Context) -> None:
    records = []
    for name, t in ctx.load(ctx.args.inputs):
        diags = validate(t)
        ctx.report(diags, name)
        records.extend(
            {"meeting": t.meeting_id, "severity": d.severity, "line": d.line, "rank": d.rank, "message": d.message}
            for d in diags
        )
    _table(ctx, records, DIAGNOSTIC_COLUMNS)


def cmd_normalize(ctx: Context) -> None:
    _write("".join(render_transcript(normalize(t)) for _, t in ctx.load(ctx.args.inputs)))


def cmd_segment(ctx: Context) -> None:
    _table(ctx, [r for a in ctx.analyse(ctx.args.inputs) for r in segment_records(a)], SEGMENT_COLUMNS)


def cmd_exchanges(ctx: Context) -> None:
    _table(ctx, [r for a in ctx.analyse(ctx.args.inputs) for r in exchange_records(a)], EXCHANGE_COLUMNS)


def cmd_stats(ctx: Context) -> None:
    args = ctx.args
    seqs = [s for s, _ in ctx.classified(args.inputs)]
    try:
        if args.by == "level":
            tables = [level_distribution(seqs)]
        else:
            fn = activity_distribution if args.by == "activity" else subject_distribution
            levels = [args.level] if args.level is not None else sorted({lm.level for s in seqs for lm in s.moves})
            if not levels:
                raise DistributionError("empty corpus")
            tables = [fn(seqs, lv) for lv in levels]
    except DistributionError as exc:
        ctx.report([Diagnostic("error", str(exc))])
        raise Failure from None
    _table(ctx, [r for t in tables for r in t.to_records()], STATS_COLUMNS, [t.to_json() for t in tables])


def _streams(ctx: Context) -> list[list[str]]:
    classified = ctx.classified(ctx.args.inputs)
    if ctx.args.unit == "move":
        return activity_streams(classified)
    return exchange_stream(classified)


def cmd_lsa(ctx: Context) -> None:
    args = ctx.args
    report = lsa(_streams(ctx), lag=args.lag, alpha=args.alpha)
    if report.degenerate:
        ctx.report([Diagnostic("warning", "degenerate streams: fewer than two units or no transitions")])
    if args.format == "dot":
        _write(report_to_dot(report))
    else:
        _table(ctx, report.to_records(), LSA_COLUMNS, report.to_json())


def cmd_mine(ctx: Context) -> None:
    args = ctx.args
    result = mine_configurations(_streams(ctx), alpha=args.alpha, max_cycles=args.max_cycles)
    if args.format == "dot":
        _write(grammar_to_dot(result.grammar))
    else:
        _table(ctx, result.grammar.to_records(), RULE_COLUMNS, result.to_json())


def cmd_cluster(ctx: Context) -> None:
    args = ctx.args
    report = lsa(_streams(ctx), lag=args.lag, alpha=args.alpha)
    try:
        dendrogram = cluster(report, linkage=args.linkage)
    except ValueError as exc:
        ctx.report([Diagnostic("error", str(exc))])
        raise Failure from None
    if args.format == "dot":
        _write(dendrogram.to_dot())
    else:
        _table(ctx, dendrogram.to_records(), MERGE_COLUMNS, dendrogram.to_json())


def cmd_kappa(ctx: Context) -> None:
    args = ctx.args
    first = [t for _, t in ctx.load([args.inputs[0]])]
    second = [t for _, t in ctx.load([args.inputs[1]])]
    if [t.meeting_id for t in first] != [t.meeting_id for t in second]:
        ctx.report([Diagnostic("error", "the two codings must cover the same meetings in the same order")])
        raise Failure
    a: list[str] = []
    b: list[str] = []
    try:
        for ta, tb in zip(first, second):
            la, lb = paired_codes(ta, tb, args.key)
            a.extend(la)
            b.extend(lb)
        categories = len(Activity) if args.key == "activity" else None
        report = reliability(a, b, categories)
    except (ValueError, ReliabilityError) as exc:
        ctx.report([Diagnostic("error", str(exc))])
        raise Failure from None
    if report.kappa_undefined:
        ctx.report([Diagnostic("warning", "kappa undefined: both coders used a single category")])
    _table(ctx, [report.to_json()], KAPPA_COLUMNS, report.to_json())


def cmd_qoc(ctx: Context) -> None:
    registry = ctx.registry()
    analyses = ctx.analyse(ctx.args.inputs)
    fmt = ctx.args.format
    graphs = []
    for a in analyses:
        for seq in a.selected():
            g = extract_qoc(seq, registry)
            ctx.report(g.diagnostics, a.transcript.meeting_id)
            graphs.append((a.transcript.meeting_id, g))
    try:
        if len(analyses) == 1 and len(graphs) == 1:
            _write(export_qoc(graphs[0][1], fmt))
        elif len(analyses) == 1:
            _write(export_corpus([g for _, g in graphs], fmt))
        else:
            chunks = []
            for a in analyses:
                mine = [g for m, g in graphs if m == a.transcript.meeting_id]
                chunks.append((a.transcript.meeting_id, mine))
            _write(_merged(chunks, fmt))
    except QocError as exc:
        ctx.report([Diagnostic("error", str(exc))])
        raise Failure from None


def _merged(chunks, fmt: str) -> bytes:
    """One document over several meetings; node IDs are prefixed by meeting."""
    if fmt == "json":
        doc = {m: json.loads(export_corpus(gs, "json", namespace=f"{m}.")) for m, gs in chunks}
        return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")
    bodies = []
    for m, gs in chunks:
        text = export_corpus(gs, "dot", namespace=f"{m}.").decode("utf-8")
        bodies.extend(text.splitlines()[1:-1])
    return ("\n".join(['digraph "qoc" {', *bodies, "}"]) + "\n").encode("utf-8")


def cmd_synth(ctx: Context) -> None:
    args = ctx.args
    rng = random.Random(args.seed)
    if args.kind == "configurations":
        corpus = [realize_streams(configuration_streams(rng, args.sequences), rng=rng)]
    else:
        corpus = random_corpus(rng, args.sequences, registry=ctx.registry())
    _write("".join(render_transcript(t) for t in corpus))


# --- argument parsing -------------------------------------------------------

def _alpha(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError("alpha must lie in (0, 1)")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


COMMANDS: dict[str, tuple[Callable[[Context], None], str]] = {
    "validate": (cmd_validate, "check referential and subject rules"),
    "normalize": (cmd_normalize, "insert implicit introductions"),
    "segment": (cmd_segment, "levels, rules and sequences per move"),
    "exchanges": (cmd_exchanges, "segment table plus exchange labels"),
    "stats": (cmd_stats, "move/word distributions"),
    "lsa": (cmd_lsa, "lag sequential analysis of exchange streams"),
    "mine": (cmd_mine, "iterated LSA and rewriting into configurations"),
    "cluster": (cmd_cluster, "hierarchical clustering of transition profiles"),
    "kappa": (cmd_kappa, "Cohen's kappa and Perrault-Leigh index of two codings"),
    "qoc": (cmd_qoc, "Question/Option/Criterion graphs of review sequences"),
    "synth": (cmd_synth, "generate a seeded synthetic corpus"),
}

FORMATS = {
    "validate": ("csv", "json"),
    "segment": ("csv", "json"),
    "exchanges": ("csv", "json"),
    "stats": ("csv", "json"),
    "lsa": ("csv", "json", "dot"),
    "mine": ("csv", "json", "dot"),
    "cluster": ("csv", "json", "dot"),
    "kappa": ("csv", "json"),
    "qoc": ("dot", "json"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="demcode", description="Analyse coded design-review meeting transcripts.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument(
            "--criteria",
            metavar="PATH",
            help=f"criterion registry file (INI); defaults to ${ENV_VAR}, then the built-in table",
        )
        if name in FORMATS:
            p.add_argument("--format", choices=FORMATS[name], default=FORMATS[name][0])
        if name == "synth":
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--sequences", type=_positive, default=20)
            p.add_argument("--kind", choices=("corpus", "configurations"), default="corpus")
            continue
        if name == "kappa":
            p.add_argument("inputs", nargs=2, metavar="FILE", help="two codings of the same meeting(s)")
            p.add_argument("--key", choices=("activity", "code"), default="activity")
            continue
        p.add_argument("inputs", nargs="+", metavar="FILE", help="transcript or table; '-' reads stdin")
        if name in ("stats", "lsa", "mine", "cluster"):
            p.add_argument("--include-management", action="store_true", help="keep management sequences")
        else:
            p.set_defaults(include_management=True)
        if name == "stats":
            p.add_argument("--by", choices=("level", "activity", "subject"), default="level")
            p.add_argument("--level", type=_non_negative)
        if name in ("lsa", "mine", "cluster"):
            p.add_argument("--alpha", type=_alpha, default=0.05)
            p.add_argument("--unit", choices=("exchange", "move"), default="exchange")
        if name in ("lsa", "cluster"):
            p.add_argument("--lag", type=_positive, default=1)
        if name == "mine":
            p.add_argument("--max-cycles", type=_positive, default=20)
        if name == "cluster":
            p.add_argument("--linkage", choices=("single", "complete"), default="complete")
    return parser


def main(argv: Optional[Seq[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    ctx = Context(args)
    try:
        COMMANDS[args.command][0](ctx)
    except Failure:
        return 1
    except BrokenPipeError:
        return 0
    return 1 if ctx.errors else 0
