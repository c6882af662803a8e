"""Random, entropy, and coreset reference strategies."""

import numpy as np
import pytest

from deuce.baselines import select_coreset, select_entropy, select_random


class TestRandom:
    def test_full_budget_returns_everything(self):
        assert sorted(select_random(5, 5, 0)) == [0, 1, 2, 3, 4]

    def test_deterministic_per_seed(self):
        assert np.array_equal(select_random(50, 10, 7), select_random(50, 10, 7))
        assert not np.array_equal(select_random(50, 10, 7), select_random(50, 10, 8))

    def test_rejects_oversized_budget(self):
        with pytest.raises(ValueError):
            select_random(3, 4, 0)

    def test_uniform_frequency(self):
        counts = np.zeros(10)
        trials = 10_000
        for t in range(trials):
            counts[select_random(10, 1, t)[0]] += 1
        freq = counts / trials
        assert np.abs(freq - 0.1).max() <= 0.03

    def test_indices_distinct(self):
        out = select_random(30, 20, 3)
        assert len(set(out.tolist())) == 20


class TestEntropy:
    def test_top_b_by_uncertainty(self):
        assert select_entropy(np.array([0.1, 3.0, 2.0]), 2).tolist() == [1, 2]

    def test_ties_break_to_lower_index(self):
        assert select_entropy(np.ones(4), 2).tolist() == [0, 1]

    def test_full_budget(self):
        assert sorted(select_entropy(np.array([0.5, 0.1, 0.9]), 3).tolist()) == [0, 1, 2]

    def test_rejects_oversized_budget(self):
        with pytest.raises(ValueError):
            select_entropy(np.ones(2), 3)


class TestCoreset:
    def test_collinear_hand_case(self):
        points = np.array([[0.0], [1.0], [10.0]])
        out = select_coreset(points, 2)
        assert out.tolist() == [2, 0]

    def test_full_budget(self):
        points = np.random.default_rng(0).standard_normal((6, 2))
        assert sorted(select_coreset(points, 6).tolist()) == list(range(6))

    def test_duplicates_never_selected_while_fresh_points_remain(self):
        rng = np.random.default_rng(1)
        base = rng.standard_normal((15, 3))
        doubled = np.vstack([base, base])
        out = select_coreset(doubled, 15)
        assert len({i % 15 for i in out.tolist()}) == 15

    def test_maxmin_radii_non_increasing(self):
        rng = np.random.default_rng(2)
        points = rng.standard_normal((40, 4))
        out = select_coreset(points, 12)
        radii = []
        for t in range(1, len(out)):
            prior = points[out[:t]]
            radii.append(np.linalg.norm(prior - points[out[t]], axis=1).min())
        assert all(a >= b for a, b in zip(radii, radii[1:]))

    def test_start_is_lowest_index_of_max_norm(self):
        points = np.array([[3.0, 0.0], [0.0, 3.0], [1.0, 0.0]])
        assert select_coreset(points, 1).tolist() == [0]
