"""Iterated LSA + rewriting: induce composite units from significant successions."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..dot import attrs, quote
from .lsa import MIN_EXPECTED, TransitionReport, lsa


class RewriteWarning(UserWarning):
    pass


def compose(left: str, right: str) -> str:
    """Name of the composite unit; composite operands are parenthesised."""
    wrap = lambda tok: f"({tok})" if "-" in tok else tok  # noqa: E731
    return f"{wrap(left)}-{wrap(right)}"


def apply_rewrite(stream: Sequence[str], pair: tuple[str, str], new_token: str) -> list[str]:
    """Replace each non-overlapping left-to-right occurrence of the adjacent pair."""
    a, b = pair
    out: list[str] = []
    i = 0
    n = len(stream)
    while i < n:
        if i + 1 < n and stream[i] == a and stream[i + 1] == b:
            out.append(new_token)
            i += 2
        else:
            out.append(stream[i])
            i += 1
    if len(out) == n:
        warnings.warn(f"pair {a} {b} does not occur; stream unchanged", RewriteWarning, stacklevel=2)
    return out


@dataclass(frozen=True)
class RewriteRule:
    left: str
    right: str
    token: str
    cycle: int
    z: float
    p: float
    replacements: int

    @property
    def pair(self) -> tuple[str, str]:
        return (self.left, self.right)


@dataclass
class ConfigurationGrammar:
    rules: list[RewriteRule] = field(default_factory=list)
    cycles: int = 0

    def apply(self, stream: Sequence[str]) -> list[str]:
        out = list(stream)
        for rule in self.rules:
            if _occurs(out, rule.pair):
                out = apply_rewrite(out, rule.pair, rule.token)
        return out

    def expand(self, token: str) -> list[str]:
        """Original units covered by a (possibly composite) token."""
        by_token = {r.token: r for r in self.rules}
        if token not in by_token:
            return [token]
        r = by_token[token]
        return self.expand(r.left) + self.expand(r.right)

    def to_records(self) -> list[dict]:
        return [
            {
                "cycle": r.cycle,
                "left": r.left,
                "right": r.right,
                "token": r.token,
                "z": r.z,
                "p": r.p,
                "replacements": r.replacements,
            }
            for r in self.rules
        ]


@dataclass
class MiningResult:
    grammar: ConfigurationGrammar
    report: TransitionReport
    streams: list[list[str]]
    history: list[TransitionReport] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "cycles": self.grammar.cycles,
            "rules": self.grammar.to_records(),
            "final": self.report.to_json(),
        }


def _occurs(stream: Sequence[str], pair: tuple[str, str]) -> bool:
    a, b = pair
    return any(stream[i] == a and stream[i + 1] == b for i in range(len(stream) - 1))


def best_pair(report: TransitionReport) -> Optional[tuple[str, str]]:
    """Most over-represented significant pair; ties broken lexicographically."""
    candidates = [(a, b) for (a, b) in report.significant if report.z_of(a, b) > 0]
    if not candidates:
        return None
    return min(candidates, key=lambda ab: (-report.z_of(*ab), ab))


def mine_configurations(
    streams: Sequence[Sequence[str]],
    alpha: float = 0.05,
    max_cycles: int = 20,
    min_expected: float = MIN_EXPECTED,
) -> MiningResult:
    """Repeat LSA and rewrite the strongest succession until none is significant.

    ``grammar.cycles`` counts the LSA passes run, including the final pass
    that found nothing left to rewrite.
    """
    if max_cycles < 1:
        raise ValueError("max_cycles must be >= 1")
    current = [list(s) for s in streams]
    grammar = ConfigurationGrammar()
    history: list[TransitionReport] = []
    for cycle in range(1, max_cycles + 1):
        report = lsa(current, lag=1, alpha=alpha, min_expected=min_expected)
        history.append(report)
        grammar.cycles = cycle
        pair = None if report.degenerate else best_pair(report)
        if pair is None:
            break
        token = compose(*pair)
        while token in report.alphabet:
            token += "'"
        before = sum(len(s) for s in current)
        current = [apply_rewrite(s, pair, token) if _occurs(s, pair) else s for s in current]
        grammar.rules.append(
            RewriteRule(
                left=pair[0],
                right=pair[1],
                token=token,
                cycle=cycle,
                z=report.z_of(*pair),
                p=report.p_of(*pair),
                replacements=before - sum(len(s) for s in current),
            )
        )
    else:
        # budget exhausted right after a rewrite: report on the rewritten streams
        report = lsa(current, lag=1, alpha=alpha, min_expected=min_expected)
    return MiningResult(grammar, report, current, history)


def grammar_to_dot(grammar: ConfigurationGrammar, name: str = "configurations") -> str:
    """Significant successions found while mining, labelled with z and cycle."""
    lines = [f"digraph {quote(name)} {{", "  rankdir=LR;"]
    nodes: list[str] = []
    for r in grammar.rules:
        for tok in (r.left, r.right):
            if tok not in nodes:
                nodes.append(tok)
    for tok in nodes:
        shape = "box" if "-" in tok else "ellipse"
        lines.append(f"  {quote(tok)}{attrs(shape=shape)};")
    for r in grammar.rules:
        lines.append(f"  {quote(r.left)} -> {quote(r.right)}{attrs(label=f'z={r.z:.2f} (cycle {r.cycle})')};")
    lines.append("}")
    return "\n".join(lines) + "\n"
