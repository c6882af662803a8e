"""Reference selection strategies sharing the pipeline's interface."""

from __future__ import annotations

import enum

import numpy as np


class StrategyKind(str, enum.Enum):
    RANDOM = "random"
    ENTROPY = "entropy"
    CORESET = "coreset"
    DEUCE = "deuce"


def select_random(n: int, b: int, rng_seed: int) -> np.ndarray:
    """Uniform sample of b distinct indices, deterministic per seed."""
    if b > n:
        raise ValueError(f"budget {b} exceeds pool size {n}")
    rng = np.random.default_rng(rng_seed)
    return np.sort(rng.choice(n, size=b, replace=False)).astype(np.int64)


def select_entropy(u: np.ndarray, b: int) -> np.ndarray:
    """Top-b documents by uncertainty, ties to the lower index."""
    u = np.asarray(u, dtype=np.float64)
    if b > len(u):
        raise ValueError(f"budget {b} exceeds pool size {len(u)}")
    order = np.argsort(-u, kind="stable")
    return order[:b].astype(np.int64)


def select_coreset(points: np.ndarray, b: int) -> np.ndarray:
    """Greedy k-center in Euclidean space.

    Starts from the lowest-index point of maximal norm, then repeatedly
    adds the point whose distance to the selected set is largest; all ties
    break to the lower index.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if b > n:
        raise ValueError(f"budget {b} exceeds pool size {n}")
    start = int(np.argmax(np.linalg.norm(points, axis=1)))
    selected = [start]
    min_dist = np.linalg.norm(points - points[start], axis=1)
    min_dist[start] = -np.inf
    for _ in range(b - 1):
        nxt = int(np.argmax(min_dist))
        selected.append(nxt)
        fresh = np.linalg.norm(points - points[nxt], axis=1)
        np.minimum(min_dist, fresh, out=min_dist)
        min_dist[nxt] = -np.inf
    return np.asarray(selected, dtype=np.int64)
