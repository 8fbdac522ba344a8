"""Chance-corrected agreement between two codings of the same moves."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Optional, Sequence


class ReliabilityError(ValueError):
    pass


@dataclass(frozen=True)
class ReliabilityReport:
    n_items: int
    categories: int
    observed_agreement: float
    expected_agreement: float
    kappa: Optional[float] = None
    perrault_leigh: Optional[float] = None
    kappa_undefined: bool = False

    def to_json(self) -> dict:
        return dict(vars(self))


def _agreement(a: Sequence[Hashable], b: Sequence[Hashable]) -> tuple[int, float, float, int]:
    if len(a) != len(b):
        raise ReliabilityError(f"codings differ in length ({len(a)} vs {len(b)})")
    n = len(a)
    if n == 0:
        raise ReliabilityError("no items to compare")
    p_o = sum(x == y for x, y in zip(a, b)) / n
    ca, cb = Counter(a), Counter(b)
    p_e = sum(ca[k] * cb[k] for k in ca) / (n * n)
    return n, p_o, p_e, len(set(ca) | set(cb))


def cohen_kappa(a: Sequence[Hashable], b: Sequence[Hashable]) -> ReliabilityReport:
    """kappa = (Po - Pe) / (1 - Pe), Pe from the product of the two marginals."""
    n, p_o, p_e, k = _agreement(a, b)
    if math.isclose(p_e, 1.0):
        return ReliabilityReport(n, k, p_o, p_e, kappa=None, kappa_undefined=True)
    return ReliabilityReport(n, k, p_o, p_e, kappa=(p_o - p_e) / (1.0 - p_e))


def perrault_leigh_index(p_o: float, k: int) -> float:
    if k < 2:
        raise ReliabilityError("Perrault-Leigh index needs at least 2 categories")
    if p_o < 1.0 / k:
        return 0.0
    return math.sqrt((p_o - 1.0 / k) * k / (k - 1))


def perrault_leigh(a: Sequence[Hashable], b: Sequence[Hashable], categories: Optional[int] = None) -> ReliabilityReport:
    """``categories`` defaults to the number of distinct labels either coder used."""
    n, p_o, p_e, k = _agreement(a, b)
    k = categories if categories is not None else k
    return ReliabilityReport(n, k, p_o, p_e, perrault_leigh=perrault_leigh_index(p_o, k))


def reliability(a: Sequence[Hashable], b: Sequence[Hashable], categories: Optional[int] = None) -> ReliabilityReport:
    ck = cohen_kappa(a, b)
    pl = perrault_leigh(a, b, categories)
    return ReliabilityReport(
        n_items=ck.n_items,
        categories=pl.categories,
        observed_agreement=ck.observed_agreement,
        expected_agreement=ck.expected_agreement,
        kappa=ck.kappa,
        perrault_leigh=pl.perrault_leigh,
        kappa_undefined=ck.kappa_undefined,
    )
