"""Lag sequential analysis over categorical token streams.

Transitions are tallied inside each stream only (never across stream
boundaries). For antecedent A and consequent B at the chosen lag the
Allison-Liker statistic is::

    z = (p(B|A) - p(B)) / sqrt(p(B) * (1 - p(B)) * (1 - p(A)) / (N * p(A)))

with p(A), p(B) the antecedent and consequent marginals of the transition
table and N its total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..dot import attrs, quote

MIN_EXPECTED = 5.0


@dataclass
class TransitionReport:
    alphabet: tuple[str, ...]
    lag: int
    counts: np.ndarray
    z: np.ndarray
    p: np.ndarray
    expected: np.ndarray
    alpha: float
    significant: frozenset = field(default_factory=frozenset)
    degenerate: bool = False
    min_expected: float = MIN_EXPECTED

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    def index(self, token: str) -> int:
        return self.alphabet.index(token)

    def count(self, a: str, b: str) -> int:
        return int(self.counts[self.index(a), self.index(b)])

    def z_of(self, a: str, b: str) -> float:
        return float(self.z[self.index(a), self.index(b)])

    def p_of(self, a: str, b: str) -> float:
        return float(self.p[self.index(a), self.index(b)])

    def pairs(self) -> list[tuple[str, str]]:
        return [(a, b) for a in self.alphabet for b in self.alphabet]

    def profiles(self) -> np.ndarray:
        """Outgoing transition probabilities, one row per antecedent (zero rows stay zero)."""
        rows = self.counts.sum(axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            prof = np.where(rows > 0, self.counts / np.where(rows > 0, rows, 1), 0.0)
        return prof

    def to_records(self) -> list[dict]:
        recs = []
        for i, a in enumerate(self.alphabet):
            for j, b in enumerate(self.alphabet):
                z = self.z[i, j]
                recs.append(
                    {
                        "antecedent": a,
                        "consequent": b,
                        "count": int(self.counts[i, j]),
                        "expected": float(self.expected[i, j]),
                        "z": None if math.isnan(z) else float(z),
                        "p": None if math.isnan(self.p[i, j]) else float(self.p[i, j]),
                        "significant": (a, b) in self.significant,
                    }
                )
        return recs

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "lag": self.lag,
            "alpha": self.alpha,
            "n": self.n,
            "degenerate": self.degenerate,
            "min_expected": self.min_expected,
            "significant": sorted([list(p) for p in self.significant]),
            "transitions": self.to_records(),
        }


def alphabet_of(streams: Iterable[Sequence[str]]) -> tuple[str, ...]:
    return tuple(sorted({tok for s in streams for tok in s}))


def transition_counts(streams: Sequence[Sequence[str]], lag: int = 1, alphabet=None) -> np.ndarray:
    alphabet = alphabet or alphabet_of(streams)
    idx = {tok: i for i, tok in enumerate(alphabet)}
    counts = np.zeros((len(alphabet), len(alphabet)), dtype=np.int64)
    for s in streams:
        for i in range(len(s) - lag):
            counts[idx[s[i]], idx[s[i + lag]]] += 1
    return counts


def windowed_counts(streams: Sequence[Sequence[str]], window: int, alphabet=None) -> np.ndarray:
    """Co-occurrence of B anywhere 1..window positions after A. No significance is attached."""
    if window < 1:
        raise ValueError("window must be >= 1")
    alphabet = alphabet or alphabet_of(streams)
    idx = {tok: i for i, tok in enumerate(alphabet)}
    counts = np.zeros((len(alphabet), len(alphabet)), dtype=np.int64)
    for s in streams:
        for i in range(len(s)):
            for j in range(i + 1, min(len(s), i + window + 1)):
                counts[idx[s[i]], idx[s[j]]] += 1
    return counts


def allison_liker(counts: np.ndarray) -> np.ndarray:
    """z-scores for a transition table; NaN where the variance is undefined."""
    counts = np.asarray(counts, dtype=float)
    n = counts.sum()
    z = np.full(counts.shape, np.nan)
    if n == 0:
        return z
    row = counts.sum(axis=1)
    col = counts.sum(axis=0)
    p_a = row / n
    p_b = col / n
    for i in range(counts.shape[0]):
        if row[i] == 0:
            continue
        for j in range(counts.shape[1]):
            var = p_b[j] * (1.0 - p_b[j]) * (1.0 - p_a[i]) / (n * p_a[i])
            if var <= 0.0:
                continue
            z[i, j] = (counts[i, j] / row[i] - p_b[j]) / math.sqrt(var)
    return z


def two_tailed_p(z: np.ndarray) -> np.ndarray:
    out = np.full(z.shape, np.nan)
    ok = ~np.isnan(z)
    out[ok] = [math.erfc(abs(v) / math.sqrt(2.0)) for v in z[ok]]
    return out


def lsa(
    streams: Sequence[Sequence[str]],
    lag: int = 1,
    alpha: float = 0.05,
    min_expected: float = MIN_EXPECTED,
) -> TransitionReport:
    if lag < 1:
        raise ValueError("lag must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    streams = [list(s) for s in streams]
    alphabet = alphabet_of(streams)
    counts = transition_counts(streams, lag, alphabet)
    n = counts.sum()
    degenerate = bool(len(alphabet) < 2 or n == 0)
    z = allison_liker(counts)
    p = two_tailed_p(z)
    if n:
        expected = np.outer(counts.sum(axis=1), counts.sum(axis=0)) / n
    else:
        expected = np.zeros(counts.shape)
    significant = set()
    if not degenerate:
        for i, a in enumerate(alphabet):
            for j, b in enumerate(alphabet):
                if not math.isnan(p[i, j]) and p[i, j] < alpha and expected[i, j] >= min_expected:
                    significant.add((a, b))
    return TransitionReport(
        alphabet=alphabet,
        lag=lag,
        counts=counts,
        z=z,
        p=p,
        expected=expected,
        alpha=alpha,
        significant=frozenset(significant),
        degenerate=degenerate,
        min_expected=min_expected,
    )


def report_to_dot(report: TransitionReport, name: str = "transitions") -> str:
    lines = [f"digraph {quote(name)} {{"]
    for a in report.alphabet:
        lines.append(f"  {quote(a)};")
    for a, b in sorted(report.significant):
        lines.append(f"  {quote(a)} -> {quote(b)}{attrs(label=f'z={report.z_of(a, b):.2f}')};")
    lines.append("}")
    return "\n".join(lines) + "\n"
