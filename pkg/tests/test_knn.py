"""kNN construction, smooth normalization, and fuzzy symmetrization."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deuce.knn import (
    GraphKind,
    Metric,
    SparseWeightedGraph,
    build_knn,
    normalize_graph,
    symmetrize,
)


def knn_oracle(points, metric, k):
    """Per-pair python arithmetic, sorted by (distance, index)."""
    n = len(points)
    neighbors = []
    for i in range(n):
        cand = []
        for j in range(n):
            if j == i:
                continue
            if metric is Metric.TEXTUAL:
                dot = min(1.0, max(-1.0, float(np.dot(points[i], points[j]))))
                d = math.acos(dot) / math.pi
            else:
                d = float(sum(abs(a - b) for a, b in zip(points[i], points[j])))
            cand.append((d, j))
        cand.sort()
        neighbors.append([j for _, j in cand[:k]])
    return neighbors


def unit_rows(rng, n, d):
    rows = rng.standard_normal((n, d))
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def directed_graph(row):
    """Directed kNN graph where every node carries the given distance row."""
    row = np.asarray(row, dtype=np.float64)
    k = len(row)
    n = k + 1
    distances = np.tile(row, (n, 1))
    neighbors = (np.arange(n)[:, None] + np.arange(1, k + 1)) % n
    return SparseWeightedGraph(
        n_nodes=n,
        kind=GraphKind.DIRECTED_KNN,
        neighbors=neighbors,
        distances=distances,
        rho=distances[:, 0].copy(),
    )


class TestBuildKnn:
    def test_collinear_angles(self):
        angles = np.deg2rad([0.0, 10.0, 90.0])
        points = np.column_stack([np.cos(angles), np.sin(angles)])
        g = build_knn(points, Metric.TEXTUAL, k=1)
        assert g.neighbors[0, 0] == 1
        assert g.distances[0, 0] == pytest.approx(10.0 / 180.0)
        assert g.neighbors[1, 0] == 0
        assert g.neighbors[2, 0] == 1
        assert g.distances[2, 0] == pytest.approx(80.0 / 180.0)

    def test_duplicate_points_have_zero_rho(self):
        points = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        g = build_knn(points, Metric.TEXTUAL, k=2)
        assert g.distances[0, 0] == 0.0
        assert g.rho[0] == 0.0
        assert g.neighbors[0, 0] == 1  # the duplicate, not self

    def test_l1_metric(self):
        rows = np.array([[0.0, 0.0], [1.0, 1.0]])
        g = build_knn(rows, Metric.LABEL, k=1)
        assert g.distances[0, 0] == pytest.approx(2.0)

    def test_rejects_k_too_large(self):
        points = np.eye(3)
        with pytest.raises(ValueError, match="smaller"):
            build_knn(points, Metric.TEXTUAL, k=3)

    @pytest.mark.parametrize("metric", [Metric.TEXTUAL, Metric.LABEL])
    @pytest.mark.parametrize("seed", range(5))
    def test_matches_bruteforce_oracle(self, metric, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(5, 200))
        k = int(rng.integers(1, min(n, 12)))
        if metric is Metric.TEXTUAL:
            points = unit_rows(rng, n, 6)
        else:
            points = rng.uniform(0, 1, size=(n, 4))
        g = build_knn(points, metric, k)
        assert g.neighbors.tolist() == knn_oracle(points, metric, k)

    def test_tie_break_prefers_lower_index(self):
        # Nodes 1 and 2 are identical, both nearest to node 0.
        points = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 1.0], [-1.0, 0.0]])
        g = build_knn(points, Metric.TEXTUAL, k=2)
        assert g.neighbors[0].tolist() == [1, 2]
        assert g.neighbors[3].tolist() == [1, 2]

    def test_threads_do_not_change_result(self):
        rng = np.random.default_rng(3)
        points = unit_rows(rng, 700, 5)
        a = build_knn(points, Metric.TEXTUAL, k=8, threads=1)
        b = build_knn(points, Metric.TEXTUAL, k=8, threads=4)
        assert np.array_equal(a.neighbors, b.neighbors)
        assert np.array_equal(a.distances, b.distances)


class TestNormalization:
    def test_closed_form_sigma(self):
        # Distances [rho, rho+a, rho+a, rho+a] solve 1 + 3 exp(-a/s) = 2,
        # so s = a / ln 3 and the far weights are exactly 1/3.
        rho, a = 0.05, 0.2
        g = directed_graph([rho, rho + a, rho + a, rho + a])
        norm = normalize_graph(g)
        assert norm.sigma[0] == pytest.approx(a / math.log(3.0), abs=1e-9)
        assert norm.weights[0, 0] == 1.0
        assert norm.weights[0, 1:] == pytest.approx([1 / 3] * 3, abs=1e-9)

    def test_all_equal_distances_fall_back_to_unit_weights(self):
        g = directed_graph([0.3, 0.3, 0.3, 0.3])
        norm = normalize_graph(g)
        assert (norm.weights[0] == 1.0).all()
        assert norm.sigma[0] == pytest.approx(1e-12)

    def test_duplicates_within_row_keep_weight_one(self):
        g = directed_graph([0.0, 0.0, 0.5, 0.9])
        norm = normalize_graph(g)
        assert norm.weights[0, 0] == 1.0
        assert norm.weights[0, 1] == 1.0

    @pytest.mark.parametrize("k", [4, 16, 64])
    def test_residual_and_nearest_weight(self, k):
        rng = np.random.default_rng(k)
        n = 300
        points = unit_rows(rng, n, 8)
        norm = normalize_graph(build_knn(points, Metric.TEXTUAL, k=k))
        sums = norm.weights.sum(axis=1)
        assert np.abs(sums - math.log2(k)).max() <= 1e-3
        assert (norm.weights[:, 0] == 1.0).all()
        assert (norm.weights > 0).all()
        assert (norm.weights <= 1.0).all()

    def test_weights_monotone_in_distance(self):
        rng = np.random.default_rng(5)
        norm = normalize_graph(build_knn(unit_rows(rng, 80, 4), Metric.TEXTUAL, k=10))
        diffs = np.diff(norm.weights, axis=1)
        assert (diffs <= 1e-15).all()

    def test_k2_infimum_falls_back_to_lower_bracket(self):
        # With k=2 the target log2(2)=1 is the infimum of the sum; sigma
        # collapses to the bracket floor and the far edge underflows.
        g = directed_graph([0.1, 0.4])
        norm = normalize_graph(g)
        assert norm.sigma[0] == pytest.approx(1e-12)
        assert norm.weights[0, 0] == 1.0
        assert norm.weights[0, 1] == 0.0


class TestSymmetrize:
    def make_normalized(self, n, edges):
        """Normalized directed graph with explicit (src, dst, w) edges."""
        k = max(len([e for e in edges if e[0] == i]) for i in range(n))
        neighbors = np.zeros((n, k), dtype=np.int64)
        weights = np.zeros((n, k))
        dist = np.zeros((n, k))
        counts = [0] * n
        for src, dst, w in edges:
            neighbors[src, counts[src]] = dst
            weights[src, counts[src]] = w
            counts[src] += 1
        # Pad unused slots with self-loops of weight zero; they are dropped.
        for i in range(n):
            for slot in range(counts[i], k):
                neighbors[i, slot] = i
        return SparseWeightedGraph(
            n_nodes=n,
            kind=GraphKind.NORMALIZED_DIRECTED,
            neighbors=neighbors,
            distances=dist,
            weights=weights,
            rho=np.zeros(n),
            sigma=np.ones(n),
        )

    def test_fuzzy_union_of_two_directions(self):
        g = self.make_normalized(2, [(0, 1, 0.6), (1, 0, 0.5)])
        sym = symmetrize(g)
        assert sym.edge_w[0] == pytest.approx(0.6 + 0.5 - 0.3)

    def test_two_certain_memberships_stay_one(self):
        g = self.make_normalized(2, [(0, 1, 1.0), (1, 0, 1.0)])
        assert symmetrize(g).edge_w[0] == 1.0

    def test_one_sided_edge_passes_through(self):
        g = self.make_normalized(3, [(0, 1, 0.4), (1, 2, 0.7)])
        sym = symmetrize(g)
        assert sym.edge_u.tolist() == [0, 1]
        assert sym.edge_v.tolist() == [1, 2]
        assert sym.edge_w.tolist() == [0.4, 0.7]

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=25, deadline=None)
    def test_matches_pairwise_formula(self, seed):
        rng = np.random.default_rng(seed)
        n, k = 20, 4
        points = unit_rows(rng, n, 5)
        norm = normalize_graph(build_knn(points, Metric.TEXTUAL, k=k))
        sym = symmetrize(norm)

        directed = {}
        for i in range(n):
            for slot in range(k):
                directed[(i, int(norm.neighbors[i, slot]))] = float(norm.weights[i, slot])
        for u, v, w in zip(sym.edge_u, sym.edge_v, sym.edge_w):
            a = directed.get((int(u), int(v)), 0.0)
            b = directed.get((int(v), int(u)), 0.0)
            assert w == a + b - a * b
        # Every directed edge appears exactly once as an unordered pair.
        pairs = {(min(i, j), max(i, j)) for i, j in directed}
        assert pairs == set(zip(sym.edge_u.tolist(), sym.edge_v.tolist()))
        assert (sym.edge_w > 0).all()
        assert (sym.edge_w <= 1.0).all()

    def test_symmetric_weights_in_unit_interval(self):
        rng = np.random.default_rng(1)
        sym = symmetrize(
            normalize_graph(build_knn(unit_rows(rng, 60, 4), Metric.TEXTUAL, k=6))
        )
        assert (sym.edge_w > 0).all()
        assert (sym.edge_w <= 1.0).all()
        assert (sym.edge_u < sym.edge_v).all()


class TestDump:
    def test_edge_list_round_trips_values(self, tmp_path):
        rng = np.random.default_rng(0)
        g = build_knn(unit_rows(rng, 10, 3), Metric.TEXTUAL, k=2)
        path = tmp_path / "edges.txt"
        g.dump(path)
        lines = path.read_text().strip().splitlines()
        assert len(lines) == 20
        src, dst, w = lines[0].split()
        assert int(src) == 0
        assert int(dst) == g.neighbors[0, 0]
        assert float(w) == g.distances[0, 0]
