"""Agglomerative clustering of units by their outgoing transition profiles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.cluster.hierarchy import linkage as _linkage
from scipy.spatial.distance import pdist

from ..dot import attrs, quote
from .lsa import TransitionReport

LINKAGES = ("single", "complete")


@dataclass(frozen=True)
class Merge:
    left: tuple[str, ...]
    right: tuple[str, ...]
    height: float

    @property
    def members(self) -> tuple[str, ...]:
        return self.left + self.right


@dataclass(frozen=True)
class Dendrogram:
    leaves: tuple[str, ...]
    merges: tuple[Merge, ...]
    linkage: str

    def first_merge_containing(self, token: str) -> int:
        for i, m in enumerate(self.merges):
            if token in m.members:
                return i
        raise KeyError(token)

    def merge_index(self, a: str, b: str) -> int:
        """Step at which a and b first share a cluster."""
        for i, m in enumerate(self.merges):
            if (a in m.left and b in m.right) or (b in m.left and a in m.right):
                return i
        raise KeyError((a, b))

    def to_records(self) -> list[dict]:
        return [
            {
                "step": i + 1,
                "left": " ".join(m.left),
                "right": " ".join(m.right),
                "height": m.height,
                "size": len(m.members),
            }
            for i, m in enumerate(self.merges)
        ]

    def to_json(self) -> dict:
        return {"linkage": self.linkage, "leaves": list(self.leaves), "merges": self.to_records()}

    def to_dot(self, name: str = "dendrogram") -> str:
        lines = [f"digraph {quote(name)} {{", "  rankdir=BT;"]
        for leaf in self.leaves:
            lines.append(f"  {quote(leaf)}{attrs(shape='plaintext')};")
        ids = {(leaf,): leaf for leaf in self.leaves}
        for i, m in enumerate(self.merges, start=1):
            node = f"m{i}"
            lines.append(f"  {quote(node)}{attrs(label=f'{m.height:.3f}', shape='point', xlabel=f'{m.height:.3f}')};")
            for part in (m.left, m.right):
                lines.append(f"  {quote(ids[part])} -> {quote(node)}{attrs(arrowhead='none')};")
            ids[m.members] = node
        lines.append("}")
        return "\n".join(lines) + "\n"


def cluster_profiles(labels, profiles: np.ndarray, linkage: str = "complete") -> Dendrogram:
    if linkage not in LINKAGES:
        raise ValueError(f"linkage must be one of {LINKAGES}")
    labels = tuple(labels)
    if len(labels) < 2:
        raise ValueError("clustering needs at least 2 units")
    z = _linkage(pdist(np.asarray(profiles, dtype=float), metric="euclidean"), method=linkage)
    clusters: dict[int, tuple[str, ...]] = {i: (lab,) for i, lab in enumerate(labels)}
    merges = []
    order = {lab: i for i, lab in enumerate(labels)}
    for step, (a, b, height, _) in enumerate(z):
        left, right = clusters[int(a)], clusters[int(b)]
        if order[left[0]] > order[right[0]]:
            left, right = right, left
        merges.append(Merge(left, right, float(height)))
        clusters[len(labels) + step] = tuple(sorted(left + right, key=order.__getitem__))
    return Dendrogram(labels, tuple(merges), linkage)


def cluster(report: TransitionReport, linkage: str = "complete") -> Dendrogram:
    return cluster_profiles(report.alphabet, report.profiles(), linkage)
