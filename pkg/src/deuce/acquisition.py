"""Seed-set acquisition: uncertainty propagation and farthest point sampling.

Within each representatively-uncertain group, one step of message passing
boosts a document's uncertainty by its clustered neighbors' weighted,
membership-scaled uncertainty.  Candidate seed sets are then drawn by
farthest point sampling over graph geodesics (edge length 1/w_dual) from
the highest-weighted-degree nodes, and the candidate with the largest
summed propagated uncertainty wins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .bundle import SelectionResult
from .clustering import ClusterAssignment
from .dng import DualNeighborGraph


@dataclass
class PropagatedUncertainty:
    """Post-propagation uncertainty; mask marks documents inside a group."""

    values: np.ndarray
    propagated_mask: np.ndarray


@dataclass
class FpsCandidate:
    start_index: int
    selected: list[int]
    score: float


def propagate(
    u: np.ndarray,
    clusters: ClusterAssignment,
    g: DualNeighborGraph,
) -> PropagatedUncertainty:
    """One propagation step within clusters, along existing edges only.

    For clustered i:  u~_i = u_i + sum_j w_dual(i,j) * p_j * u_j  over
    cluster-mates j adjacent to i.  Outliers keep u unchanged.  The edge
    weight is defined only on edges, so non-adjacent cluster-mates
    contribute nothing.
    """
    u = np.asarray(u, dtype=np.float64)
    if len(u) != g.n_nodes or len(clusters.assignment) != g.n_nodes:
        raise ValueError("uncertainty, clusters, and graph must cover the same documents")
    values = u.copy()
    a = clusters.assignment
    same = (a[g.edge_u] == a[g.edge_v]) & (a[g.edge_u] >= 0)
    eu, ev, w = g.edge_u[same], g.edge_v[same], g.edge_w[same]
    p = clusters.membership
    np.add.at(values, eu, w * p[ev] * u[ev])
    np.add.at(values, ev, w * p[eu] * u[eu])
    return PropagatedUncertainty(values=values, propagated_mask=a >= 0)


def _geodesic_csr(g: DualNeighborGraph) -> csr_matrix:
    """Symmetric sparse matrix of edge lengths delta = 1/w_dual."""
    delta = 1.0 / g.edge_w
    rows = np.concatenate([g.edge_u, g.edge_v])
    cols = np.concatenate([g.edge_v, g.edge_u])
    return csr_matrix(
        (np.concatenate([delta, delta]), (rows, cols)), shape=(g.n_nodes, g.n_nodes)
    )


def _fps_from(csgraph: csr_matrix, n: int, start: int, b: int) -> list[int]:
    selected = [start]
    min_dist = dijkstra(csgraph, directed=True, indices=[start])[0]
    chosen = np.zeros(n, dtype=bool)
    chosen[start] = True
    for _ in range(b - 1):
        # Unreachable nodes carry +inf, so argmax prefers them; ties at
        # equal distance resolve to the first (lowest) index.
        scores = np.where(chosen, -np.inf, min_dist)
        nxt = int(np.argmax(scores))
        selected.append(nxt)
        chosen[nxt] = True
        fresh = dijkstra(csgraph, directed=True, indices=[nxt])[0]
        np.minimum(min_dist, fresh, out=min_dist)
    return selected


def fps(g: DualNeighborGraph, start: int, b: int) -> list[int]:
    """Greedy max-min selection of b nodes on graph geodesics from start."""
    if not (1 <= b <= g.n_nodes):
        raise ValueError(f"budget {b} outside [1, {g.n_nodes}]")
    if not (0 <= start < g.n_nodes):
        raise ValueError(f"start node {start} outside [0, {g.n_nodes})")
    return _fps_from(_geodesic_csr(g), g.n_nodes, start, b)


def select(
    g: DualNeighborGraph,
    u_tilde: PropagatedUncertainty,
    b: int,
    n_starts: int,
    doc_ids: list[str] | None = None,
) -> SelectionResult:
    """Run FPS from the top weighted-degree nodes, keep the best candidate.

    The winning candidate maximizes the summed propagated uncertainty of
    its members; score ties go to the lower start index.
    """
    if not (1 <= b <= g.n_nodes):
        raise ValueError(f"budget {b} outside [1, {g.n_nodes}]")
    if n_starts < 1:
        raise ValueError(f"need at least one FPS start, got {n_starts}")
    n_starts = min(n_starts, g.n_nodes)

    deg = g.weighted_degrees()
    starts = np.lexsort((np.arange(g.n_nodes), -deg))[:n_starts]

    csgraph = _geodesic_csr(g)
    candidates = []
    for start in starts.tolist():
        members = _fps_from(csgraph, g.n_nodes, start, b)
        score = float(u_tilde.values[members].sum())
        candidates.append(FpsCandidate(start_index=start, selected=members, score=score))

    best = candidates[0]
    for cand in candidates[1:]:
        if cand.score > best.score or (
            cand.score == best.score and cand.start_index < best.start_index
        ):
            best = cand

    ids = doc_ids if doc_ids is not None else [str(i) for i in range(g.n_nodes)]
    return SelectionResult(
        selected_indices=list(best.selected),
        selected_ids=[ids[i] for i in best.selected],
        candidate_scores={c.start_index: c.score for c in candidates},
        config={"n_docs": g.n_nodes, "b": b, "n_starts": n_starts},
    )
