"""Question/Option/Criterion graphs extracted from review sequences.

Options are the opening solution and every DEV move; Questions are the
requests of the sequence, plus one implicit Question when options get
assessed before anybody asked; Criteria come from the attributes of
EVAL/JUSTIF/REJ/ACC moves. Edges only ever run Option -> Question
(responds-to) or Option -> Criterion (assessed-by).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .criteria import DEFAULT_REGISTRY, CriterionRegistry
from .dot import attrs, quote
from .model import Activity, CodedMove, Diagnostic, MoveResult, Polarity, Rank, SolutionRef, Subject
from .segmenter import Sequence


class NodeKind(str, enum.Enum):
    QUESTION = "Question"
    OPTION = "Option"
    CRITERION = "Criterion"


class Relation(str, enum.Enum):
    RESPONDS_TO = "responds-to"
    ASSESSED_BY = "assessed-by"


class EdgePolarity(str, enum.Enum):
    SUPPORTS = "supports"
    REJECTS = "rejects"
    NEUTRAL = "neutral"


ASSESSING = frozenset({Activity.EVAL, Activity.JUSTIF, Activity.REJ})
CRITERION_SOURCES = ASSESSING | {Activity.ACC}


@dataclass(frozen=True)
class QocNode:
    id: str
    kind: NodeKind
    label: str
    origin: Optional[Rank]  # None for the synthesized implicit Question
    text: str = ""
    criterion_kind: Optional[str] = None
    criterion_letter: Optional[str] = None
    uncoded: bool = False


@dataclass
class QocEdge:
    source: str
    target: str
    relation: Relation
    polarity: EdgePolarity
    evidence: list[Rank] = field(default_factory=list)


@dataclass
class QocGraph:
    sequence: int
    nodes: list[QocNode] = field(default_factory=list)
    edges: list[QocEdge] = field(default_factory=list)
    decision: Optional[str] = None
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def node(self, node_id: str) -> QocNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def of_kind(self, kind: NodeKind) -> list[QocNode]:
        return [n for n in self.nodes if n.kind is kind]

    def weight(self, node_id: str) -> int:
        """Strength of a criterion: number of assessing moves that invoked it."""
        return sum(len(e.evidence) for e in self.edges if e.target == node_id and e.relation is Relation.ASSESSED_BY)

    @property
    def empty(self) -> bool:
        return not self.nodes


class QocError(ValueError):
    pass


class _Extractor:
    def __init__(self, seq: Sequence, registry: CriterionRegistry):
        self.seq = seq
        self.registry = registry
        self.moves = [lm.move for lm in seq.moves]
        self.by_rank = {m.rank: m for m in self.moves}
        self.graph = QocGraph(seq.index)
        self.counters = {NodeKind.QUESTION: 0, NodeKind.OPTION: 0, NodeKind.CRITERION: 0}
        self.questions: list[tuple[int, QocNode]] = []
        self.options: dict[Rank, tuple[int, QocNode]] = {}
        self.criteria: dict[tuple, QocNode] = {}
        self.edges: dict[tuple, QocEdge] = {}

    def add_node(self, kind: NodeKind, label: str, origin: Optional[Rank], **extra) -> QocNode:
        self.counters[kind] += 1
        node = QocNode(f"{kind.value[0]}{self.counters[kind]}", kind, label, origin, **extra)
        self.graph.nodes.append(node)
        return node

    def add_edge(self, source: QocNode, target: QocNode, relation: Relation, polarity: EdgePolarity, ranks) -> None:
        key = (source.id, target.id, relation, polarity)
        edge = self.edges.get(key)
        if edge is None:
            edge = self.edges[key] = QocEdge(source.id, target.id, relation, polarity)
            self.graph.edges.append(edge)
        for r in ranks:
            if r not in edge.evidence:
                edge.evidence.append(r)
        edge.evidence.sort()

    def resolve(self, subject: Subject) -> tuple[Optional[QocNode], bool]:
        """Option a subject bears on, and whether it bears on it directly."""
        opener = self.moves[0]
        if isinstance(subject, SolutionRef):
            if subject == opener.subject:
                return self.options[opener.rank][1], True
            return None, False
        if isinstance(subject, MoveResult):
            if subject.rank in self.options:
                return self.options[subject.rank][1], True
            target = self.by_rank.get(subject.rank)
            if target is None:
                return None, False
            option, _ = self.resolve(target.subject)
            return option, False
        return None, False

    def polarity(self, m: CodedMove, direct: bool) -> EdgePolarity:
        if m.activity is Activity.REJ:
            return EdgePolarity.REJECTS if direct else EdgePolarity.NEUTRAL
        if m.activity is Activity.EVAL:
            if not direct or m.polarity is None:
                return EdgePolarity.NEUTRAL
            return EdgePolarity.SUPPORTS if m.polarity is Polarity.POSITIVE else EdgePolarity.REJECTS
        if direct:
            return EdgePolarity.SUPPORTS
        # a justification (or acceptance) of a direct rejection sides with it
        subj = m.subject
        if isinstance(subj, MoveResult) and subj.activity is Activity.REJ:
            rej = self.by_rank.get(subj.rank)
            if rej is not None and self.resolve(rej.subject)[1]:
                return EdgePolarity.REJECTS
        return EdgePolarity.NEUTRAL

    def criterion_for(self, m: CodedMove) -> Optional[QocNode]:
        if m.attribute is not None:
            key = (m.attribute.kind, m.attribute.criterion)
            if key not in self.criteria:
                self.criteria[key] = self.add_node(
                    NodeKind.CRITERION,
                    self.registry.name(m.attribute.kind, m.attribute.criterion),
                    m.rank,
                    criterion_kind=m.attribute.kind.value,
                    criterion_letter=m.attribute.criterion,
                )
            return self.criteria[key]
        if (
            m.activity is Activity.JUSTIF
            and isinstance(m.subject, MoveResult)
            and m.subject.activity is Activity.REJ
        ):
            return self.add_node(NodeKind.CRITERION, f"uncoded ({m.move_id})", m.rank, text=m.text, uncoded=True)
        return None

    def run(self) -> QocGraph:
        g = self.graph
        if not self.moves or not self.moves[0].opens_solution():
            g.diagnostics.append(Diagnostic("info", f"sequence {g.sequence} is not a solution sequence"))
            return g
        body = self.moves[1:]
        if not any(m.is_request or m.activity in ASSESSING or m.activity is Activity.DEV for m in body):
            g.diagnostics.append(
                Diagnostic("info", f"sequence {g.sequence} has no review or alternative content; empty graph")
            )
            return g
        opener = self.moves[0]
        self.options[opener.rank] = (0, self.add_node(NodeKind.OPTION, str(opener.subject), opener.rank, text=opener.text))
        for pos, m in enumerate(body, start=1):
            if m.is_request:
                q = self.add_node(NodeKind.QUESTION, m.text or m.code, m.rank, text=m.text)
                self.questions.append((pos, q))
                continue
            if (m.activity in ASSESSING or m.activity is Activity.DEV) and not self.questions:
                q = self.add_node(NodeKind.QUESTION, f"implicit question on {opener.subject}", None)
                self.questions.append((pos, q))
            if m.activity is Activity.DEV:
                self.options[m.rank] = (pos, self.add_node(NodeKind.OPTION, m.move_id, m.rank, text=m.text))
            if m.activity in CRITERION_SOURCES:
                option, direct = self.resolve(m.subject)
                crit = self.criterion_for(m)
                if crit is not None and option is not None:
                    self.add_edge(option, crit, Relation.ASSESSED_BY, self.polarity(m, direct), [m.rank])
                if m.activity is Activity.ACC and direct and option is not None:
                    g.decision = option.id
        for rank, (pos, option) in self.options.items():
            earlier = [q for qpos, q in self.questions if qpos <= pos]
            question = earlier[-1] if earlier else self.questions[0][1]
            evidence = [rank] + ([question.origin] if question.origin is not None else [])
            self.add_edge(option, question, Relation.RESPONDS_TO, EdgePolarity.NEUTRAL, evidence)
        g.edges.sort(key=lambda e: (e.relation is not Relation.RESPONDS_TO, _id_key(e.source), _id_key(e.target), e.polarity.value))
        return g


def _id_key(node_id: str) -> tuple[str, int]:
    return (node_id[0], int(node_id[1:]))


def extract_qoc(seq: Sequence, registry: CriterionRegistry = DEFAULT_REGISTRY) -> QocGraph:
    return _Extractor(seq, registry).run()


# --- serialization ---------------------------------------------------------

def _rank_json(r: Optional[Rank]) -> Optional[str]:
    return None if r is None else str(r)


def graph_to_json(g: QocGraph, prefix: str = "") -> dict:
    return {
        "sequence": g.sequence,
        "nodes": [
            {
                "id": prefix + n.id,
                "kind": n.kind.value,
                "label": n.label,
                "origin": _rank_json(n.origin),
                "text": n.text,
                "criterion_kind": n.criterion_kind,
                "criterion_letter": n.criterion_letter,
                "uncoded": n.uncoded,
                "weight": g.weight(n.id) if n.kind is NodeKind.CRITERION else None,
            }
            for n in g.nodes
        ],
        "edges": [
            {
                "from": prefix + e.source,
                "to": prefix + e.target,
                "relation": e.relation.value,
                "polarity": e.polarity.value,
                "evidence": [str(r) for r in e.evidence],
            }
            for e in g.edges
        ],
        "decision": None if g.decision is None else prefix + g.decision,
    }


def graph_from_json(data: dict) -> QocGraph:
    g = QocGraph(int(data["sequence"]))
    for n in data["nodes"]:
        g.nodes.append(
            QocNode(
                id=n["id"],
                kind=NodeKind(n["kind"]),
                label=n["label"],
                origin=None if n["origin"] is None else Rank.parse(n["origin"]),
                text=n.get("text", ""),
                criterion_kind=n.get("criterion_kind"),
                criterion_letter=n.get("criterion_letter"),
                uncoded=bool(n.get("uncoded", False)),
            )
        )
    for e in data["edges"]:
        g.edges.append(
            QocEdge(
                e["from"],
                e["to"],
                Relation(e["relation"]),
                EdgePolarity(e["polarity"]),
                [Rank.parse(r) for r in e["evidence"]],
            )
        )
    g.decision = data.get("decision")
    return g


_SHAPES = {NodeKind.QUESTION: "diamond", NodeKind.OPTION: "box", NodeKind.CRITERION: "ellipse"}


def _dot_body(g: QocGraph, prefix: str, indent: str) -> list[str]:
    lines = []
    for n in g.nodes:
        label = n.label
        if n.kind is NodeKind.CRITERION and n.criterion_kind:
            label = f"{n.criterion_kind}: {label}"
        extra = {"peripheries": "2"} if n.id == g.decision else {}
        lines.append(f"{indent}{quote(prefix + n.id)}{attrs(shape=_SHAPES[n.kind], label=label, **extra)};")
    for e in g.edges:
        kw = {"label": e.relation.value if e.relation is Relation.RESPONDS_TO else e.polarity.value}
        if e.polarity is EdgePolarity.REJECTS:
            kw["style"] = "dashed"
        lines.append(f"{indent}{quote(prefix + e.source)} -> {quote(prefix + e.target)}{attrs(**kw)};")
    return lines


def graph_to_dot(g: QocGraph) -> str:
    lines = [f"digraph {quote(f'qoc_{g.sequence}')} {{"]
    lines.extend(_dot_body(g, "", "  "))
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_qoc(g: QocGraph, format: str) -> bytes:
    if format == "dot":
        return graph_to_dot(g).encode("utf-8")
    if format == "json":
        return (json.dumps(graph_to_json(g), indent=2, sort_keys=True) + "\n").encode("utf-8")
    raise QocError(f"unknown export format {format!r} (expected dot or json)")


def export_corpus(graphs: Iterable[QocGraph], format: str, namespace: str = "") -> bytes:
    """All graphs in one document, node IDs prefixed by their sequence."""
    graphs = list(graphs)

    def prefix(g: QocGraph) -> str:
        return f"{namespace}s{g.sequence}."

    if format == "json":
        doc = [graph_to_json(g, prefix(g)) for g in graphs]
        return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")
    if format == "dot":
        lines = ['digraph "qoc" {']
        for g in graphs:
            lines.append(f"  subgraph {quote(f'cluster_{namespace}s{g.sequence}')} {{")
            lines.append(f"    label={quote(f'{namespace}sequence {g.sequence}')};")
            lines.extend(_dot_body(g, prefix(g), "    "))
            lines.append("  }")
        lines.append("}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise QocError(f"unknown export format {format!r} (expected dot or json)")
