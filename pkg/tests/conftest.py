from __future__ import annotations

import contextlib
import graphlib
import time
from pathlib import Path

import pytest

from demcode.codec import parse_transcript
from demcode.model import Activity, CriterionRef, MoveResult, SolutionRef, Transcript
from demcode.qoc import NodeKind, QocGraph, Relation
from demcode.segmenter import Sequence

FIXTURES = Path(__file__).parent / "fixtures"
FIXTURE = FIXTURES / "review_meeting.demp"

_ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


@pytest.fixture
def fixture_path() -> Path:
    return FIXTURE


@pytest.fixture
def fixture_text() -> str:
    return FIXTURE.read_text(encoding="utf-8")


@pytest.fixture
def transcript(fixture_text) -> Transcript:
    return parse_transcript(fixture_text)


def reference_depths(t: Transcript) -> list[int]:
    """Independent brute-force nesting depth: recursive walk over subjects."""
    moves = list(t.moves)
    position = {m.rank: i for i, m in enumerate(moves)}

    def depth(i: int) -> int:
        m = moves[i]
        s = m.subject
        if m.activity is Activity.INTRO and isinstance(s, SolutionRef):
            return 0
        if isinstance(s, MoveResult):
            return 1 + depth(position[s.rank])
        if isinstance(s, CriterionRef):
            users = [
                j for j in range(i)
                if moves[j].attribute is not None
                and (moves[j].attribute.kind, moves[j].attribute.criterion) == (s.kind, s.letter)
            ]
            return 1 + depth(users[-1])
        return 1

    return [depth(i) for i in range(len(moves))]


def check_qoc_structure(seq: Sequence, g: QocGraph) -> None:
    """Tripartite shape, acyclicity, evidence completeness and size bound."""
    kinds = {n.id: n.kind for n in g.nodes}
    assert len(kinds) == len(g.nodes)
    ranks = {lm.move.rank for lm in seq.moves}
    sorter = graphlib.TopologicalSorter()
    for e in g.edges:
        assert kinds[e.source] is NodeKind.OPTION
        want = NodeKind.QUESTION if e.relation is Relation.RESPONDS_TO else NodeKind.CRITERION
        assert kinds[e.target] is want
        assert e.evidence and set(e.evidence) <= ranks
        sorter.add(e.target, e.source)
    tuple(sorter.static_order())  # raises CycleError on a cycle
    for n in g.nodes:
        assert n.origin is None or n.origin in ranks
        if n.kind is NodeKind.OPTION:
            assert any(e.source == n.id and e.relation is Relation.RESPONDS_TO for e in g.edges)
    assert len(g.nodes) <= len(seq.moves) + 1
    assert g.decision is None or kinds[g.decision] is NodeKind.OPTION


@pytest.fixture
def acceptance():
    """Record the outcome of one acceptance criterion for the run summary."""

    @contextlib.contextmanager
    def record(number: int, title: str, budget: float):
        start = time.perf_counter()
        try:
            yield
            elapsed = time.perf_counter() - start
            assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
        except BaseException:
            _ACCEPTANCE[number] = (title, "FAIL", time.perf_counter() - start)
            raise
        _ACCEPTANCE[number] = (title, "PASS", elapsed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, outcome, elapsed = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number} [{outcome}] {title} ({elapsed:.2f}s)")
