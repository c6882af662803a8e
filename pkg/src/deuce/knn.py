"""Exact kNN graphs, per-node smooth normalization, fuzzy symmetrization.

Two metric spaces feed the selection pipeline: textual embeddings under
angular cosine distance, and calibrated label rows under l1 distance.
Raw kNN distances from the two spaces are not comparable, so each node's
out-edge distances are passed through exp(-(d - rho_i) / sigma_i) with
sigma_i solved per node so the transformed weights sum to log2(k).  The
directed result is then symmetrized as a fuzzy union: membership of an
unordered pair is a + b - a*b over the two directed weights.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SIGMA_LOWER = 1e-12
SIGMA_UPPER_SCALE = 1e4
SIGMA_TOLERANCE = 1e-5
SIGMA_MAX_ITER = 100

_KNN_BLOCK_ROWS = 512


class Metric(enum.Enum):
    """Distance used for neighbor search."""

    TEXTUAL = "textual"  # arccos of inner product over pi, rows unit-norm
    LABEL = "label"      # l1 over calibrated label rows


class GraphKind(enum.Enum):
    DIRECTED_KNN = "directed_knn"
    NORMALIZED_DIRECTED = "normalized_directed"
    SYMMETRIC = "symmetric"


@dataclass
class SparseWeightedGraph:
    """Weighted adjacency in one of three stages.

    Directed kinds store per-node neighbor/distance arrays of shape (N, k)
    sorted by (distance, index); the normalized kind adds weights plus the
    per-node rho (nearest-neighbor distance) and sigma (smoothing factor).
    The symmetric kind stores each unordered pair once as parallel arrays
    ``edge_u < edge_v`` in lexicographic order.
    """

    n_nodes: int
    kind: GraphKind
    neighbors: np.ndarray | None = None
    distances: np.ndarray | None = None
    weights: np.ndarray | None = None
    rho: np.ndarray | None = None
    sigma: np.ndarray | None = None
    edge_u: np.ndarray | None = None
    edge_v: np.ndarray | None = None
    edge_w: np.ndarray | None = None

    @property
    def k(self) -> int:
        if self.neighbors is None:
            raise ValueError("symmetric graphs have no fixed out-degree")
        return self.neighbors.shape[1]

    @property
    def n_edges(self) -> int:
        if self.kind is GraphKind.SYMMETRIC:
            return len(self.edge_u)
        return int(self.neighbors.size)

    def edge_list(self) -> np.ndarray:
        """Edges as a (E, 3) float array of (src, dst, value) rows.

        Directed graphs report distances (kNN stage) or normalized weights;
        symmetric graphs report each unordered pair once.
        """
        if self.kind is GraphKind.SYMMETRIC:
            return np.column_stack([self.edge_u, self.edge_v, self.edge_w]).astype(np.float64)
        src = np.repeat(np.arange(self.n_nodes), self.k)
        dst = self.neighbors.ravel()
        val = (self.weights if self.kind is GraphKind.NORMALIZED_DIRECTED else self.distances).ravel()
        return np.column_stack([src, dst, val]).astype(np.float64)

    def dump(self, path: str | Path) -> None:
        """Debug edge list, one ``src dst weight`` line per edge."""
        rows = self.edge_list()
        with open(path, "w", encoding="utf-8") as fh:
            for s, d, w in rows:
                fh.write(f"{int(s)} {int(d)} {float(w)!r}\n")


def textual_distances(block: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Angular distance arccos(<x, y>)/pi between unit rows.

    Inner products are clamped to [-1, 1]: floating-point dot products of
    unit vectors can exceed 1 by an epsilon, which arccos rejects.
    """
    dots = np.clip(block @ points.T, -1.0, 1.0)
    return np.arccos(dots) / np.pi


def label_distances(block: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Pairwise l1 distances between label rows."""
    return np.abs(block[:, None, :] - points[None, :, :]).sum(axis=2)


_DISTANCE_FN = {Metric.TEXTUAL: textual_distances, Metric.LABEL: label_distances}


def build_knn(
    points: np.ndarray,
    metric: Metric,
    k: int,
    threads: int = 1,
) -> SparseWeightedGraph:
    """Exact k nearest neighbors per node, self excluded.

    Ties break toward the lower index.  Work proceeds in row blocks so the
    full N x N distance matrix is never materialized; blocks are
    independent, so they may be dispatched to a thread pool without
    affecting the result.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 points, got {n}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k >= n:
        raise ValueError(f"k={k} must be smaller than the number of points {n}")

    distance_fn = _DISTANCE_FN[metric]
    neighbors = np.empty((n, k), dtype=np.int64)
    distances = np.empty((n, k), dtype=np.float64)

    def fill(start: int, stop: int) -> None:
        block = distance_fn(points[start:stop], points)
        block[np.arange(start, stop) - start, np.arange(start, stop)] = np.inf
        order = np.argsort(block, axis=1, kind="stable")[:, :k]
        neighbors[start:stop] = order
        distances[start:stop] = np.take_along_axis(block, order, axis=1)

    spans = [(s, min(s + _KNN_BLOCK_ROWS, n)) for s in range(0, n, _KNN_BLOCK_ROWS)]
    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda span: fill(*span), spans))
    else:
        for span in spans:
            fill(*span)

    return SparseWeightedGraph(
        n_nodes=n,
        kind=GraphKind.DIRECTED_KNN,
        neighbors=neighbors,
        distances=distances,
        rho=distances[:, 0].copy(),
    )


def normalize_graph(g: SparseWeightedGraph, k: int | None = None) -> SparseWeightedGraph:
    """Solve per-node sigma and rescale out-edges to smooth weights.

    For node i with sorted neighbor distances d_1 <= ... <= d_k and
    rho_i = d_1, sigma_i > 0 satisfies

        sum_j exp(-(d_j - rho_i) / sigma_i) = log2(k)

    to within ``SIGMA_TOLERANCE``, found by bisection: the left side is
    monotone increasing in sigma from (number of d_j equal to rho_i) up to
    k.  When that lower limit already reaches the target (all retained
    distances equal, or the k=2 infimum), sigma falls back to the lower
    bracket and the weight formula is applied as-is.  The nearest-neighbor
    edge always gets weight exactly 1.
    """
    if g.kind is not GraphKind.DIRECTED_KNN:
        raise ValueError(f"expected a directed kNN graph, got {g.kind}")
    if k is None:
        k = g.k
    target = np.log2(k)

    excess = g.distances - g.rho[:, None]  # first column exactly 0
    lo = np.full(g.n_nodes, SIGMA_LOWER)
    hi = np.maximum(SIGMA_UPPER_SCALE * g.distances.max(axis=1), SIGMA_LOWER)

    at_zero = (excess == 0.0).sum(axis=1).astype(np.float64)
    boundary = at_zero >= target

    # Full iteration budget narrows the bracket to ~2^-100 of its width,
    # leaving the residual far inside SIGMA_TOLERANCE; bailing out early at
    # the tolerance would leave sigma itself with only ~1e-5 accuracy.
    sigma = lo.copy()
    active = ~boundary
    lo_a, hi_a = lo[active], hi[active]
    ex_a = excess[active]
    for _ in range(SIGMA_MAX_ITER):
        mid = 0.5 * (lo_a + hi_a)
        high = np.exp(-ex_a / mid[:, None]).sum(axis=1) > target
        hi_a = np.where(high, mid, hi_a)
        lo_a = np.where(high, lo_a, mid)
    sigma[active] = 0.5 * (lo_a + hi_a)

    with np.errstate(under="ignore"):
        weights = np.exp(-excess / sigma[:, None])

    return SparseWeightedGraph(
        n_nodes=g.n_nodes,
        kind=GraphKind.NORMALIZED_DIRECTED,
        neighbors=g.neighbors,
        distances=g.distances,
        weights=weights,
        rho=g.rho,
        sigma=sigma,
    )


def symmetrize(g: SparseWeightedGraph) -> SparseWeightedGraph:
    """Fuzzy union of directed weights: w(i,j) = a + b - a*b.

    ``a`` and ``b`` are the two directed weights of an unordered pair, 0
    when a direction is absent.  Each pair is stored once with u < v,
    sorted lexicographically.  Directed weights that underflowed to 0
    (possible only for degenerate sigma fallbacks) carry no membership and
    are dropped.
    """
    if g.kind is not GraphKind.NORMALIZED_DIRECTED:
        raise ValueError(f"expected a normalized directed graph, got {g.kind}")
    src = np.repeat(np.arange(g.n_nodes, dtype=np.int64), g.k)
    dst = g.neighbors.ravel()
    w = g.weights.ravel()
    keep = w > 0.0
    src, dst, w = src[keep], dst[keep], w[keep]

    u = np.minimum(src, dst)
    v = np.maximum(src, dst)
    key = u * g.n_nodes + v
    uniq, inverse, counts = np.unique(key, return_inverse=True, return_counts=True)

    w_sum = np.zeros(len(uniq))
    np.add.at(w_sum, inverse, w)
    w_prod = np.ones(len(uniq))
    np.multiply.at(w_prod, inverse, w)
    w_sym = np.where(counts == 2, w_sum - w_prod, w_sum)

    return SparseWeightedGraph(
        n_nodes=g.n_nodes,
        kind=GraphKind.SYMMETRIC,
        edge_u=(uniq // g.n_nodes).astype(np.int64),
        edge_v=(uniq % g.n_nodes).astype(np.int64),
        edge_w=w_sym,
    )
