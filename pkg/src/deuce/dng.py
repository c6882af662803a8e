"""Dual-neighbor graph: merge of the textual and label kNN graphs.

The edge set is the union of the two symmetric graphs' edge sets.  Pairs
adjacent in both spaces are dual-neighbor edges and get weight
w_z * w_y + gamma; pairs present in one space keep that space's weight.
With gamma >= 1 every dual edge outweighs every single edge, which is what
lets downstream clustering and traversal prefer pairs that agree in both
textual content and predicted class.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .knn import GraphKind, SparseWeightedGraph


class EdgeType(enum.IntEnum):
    SINGLE_TEXTUAL = 0
    SINGLE_LABEL = 1
    DUAL = 2


@dataclass
class DualNeighborGraph:
    """Undirected weighted graph with typed edges, one row per pair u < v."""

    n_nodes: int
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_w: np.ndarray
    edge_type: np.ndarray
    gamma: float
    _adjacency: list | None = field(default=None, repr=False, compare=False)

    @property
    def n_edges(self) -> int:
        return len(self.edge_u)

    def adjacency(self) -> list[list[tuple[int, float]]]:
        """Neighbor lists [(neighbor, weight), ...] sorted by neighbor index."""
        if self._adjacency is None:
            adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n_nodes)]
            for u, v, w in zip(
                self.edge_u.tolist(), self.edge_v.tolist(), self.edge_w.tolist()
            ):
                adj[u].append((v, w))
                adj[v].append((u, w))
            for entry in adj:
                entry.sort()
            self._adjacency = adj
        return self._adjacency

    def weighted_degrees(self) -> np.ndarray:
        """Sum of incident edge weights per node."""
        deg = np.zeros(self.n_nodes)
        np.add.at(deg, self.edge_u, self.edge_w)
        np.add.at(deg, self.edge_v, self.edge_w)
        return deg

    def dump(self, path: str | Path) -> None:
        """Debug edge list, one ``src dst weight type`` line per edge."""
        names = {t.value: t.name.lower() for t in EdgeType}
        with open(path, "w", encoding="utf-8") as fh:
            for u, v, w, t in zip(self.edge_u, self.edge_v, self.edge_w, self.edge_type):
                fh.write(f"{int(u)} {int(v)} {float(w)!r} {names[int(t)]}\n")


def merge(
    g_text: SparseWeightedGraph,
    g_label: SparseWeightedGraph,
    gamma: float,
) -> DualNeighborGraph:
    """Union the two symmetric graphs into the dual-neighbor graph."""
    for name, g in (("textual", g_text), ("label", g_label)):
        if g.kind is not GraphKind.SYMMETRIC:
            raise ValueError(f"{name} graph must be symmetric, got {g.kind}")
    if g_text.n_nodes != g_label.n_nodes:
        raise ValueError(
            f"node count mismatch: textual {g_text.n_nodes} vs label {g_label.n_nodes}"
        )
    if gamma < 0.0:
        raise ValueError(f"gamma must be nonnegative, got {gamma}")

    n = g_text.n_nodes
    key_z = g_text.edge_u * n + g_text.edge_v
    key_y = g_label.edge_u * n + g_label.edge_v

    # Symmetric graphs keep keys sorted, so set algebra can assume order.
    common, idx_z, idx_y = np.intersect1d(
        key_z, key_y, assume_unique=True, return_indices=True
    )
    only_z = np.setdiff1d(np.arange(len(key_z)), idx_z, assume_unique=True)
    only_y = np.setdiff1d(np.arange(len(key_y)), idx_y, assume_unique=True)

    keys = np.concatenate([common, key_z[only_z], key_y[only_y]])
    weights = np.concatenate(
        [
            g_text.edge_w[idx_z] * g_label.edge_w[idx_y] + gamma,
            g_text.edge_w[only_z],
            g_label.edge_w[only_y],
        ]
    )
    types = np.concatenate(
        [
            np.full(len(common), EdgeType.DUAL, dtype=np.uint8),
            np.full(len(only_z), EdgeType.SINGLE_TEXTUAL, dtype=np.uint8),
            np.full(len(only_y), EdgeType.SINGLE_LABEL, dtype=np.uint8),
        ]
    )
    order = np.argsort(keys, kind="stable")
    keys, weights, types = keys[order], weights[order], types[order]

    return DualNeighborGraph(
        n_nodes=n,
        edge_u=(keys // n).astype(np.int64),
        edge_v=(keys % n).astype(np.int64),
        edge_w=weights,
        edge_type=types,
        gamma=float(gamma),
    )
