"""Synthetic bundle generator."""

import numpy as np
import pytest

from deuce.bundle import save_bundle
from deuce.synth import SyntheticSpec, apportion, generate


class TestApportionment:
    def test_exact_quarters(self):
        assert apportion(np.array([0.25] * 4), 400).tolist() == [100] * 4

    def test_largest_remainder(self):
        # Quotas 4.5, 3.3, 2.2: floor leaves one seat for the largest
        # fractional part.
        assert apportion(np.array([0.45, 0.33, 0.22]), 10).tolist() == [5, 3, 2]

    def test_counts_always_sum_to_total(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            c = int(rng.integers(2, 8))
            raw = rng.uniform(0.05, 1, size=c)
            props = raw / raw.sum()
            total = int(rng.integers(1, 500))
            assert apportion(props, total).sum() == total

    def test_fraction_ties_take_lower_class(self):
        assert apportion(np.array([0.5, 0.5]), 3).tolist() == [2, 1]


class TestGenerate:
    def spec(self, **kw):
        base = dict(
            n_docs=60,
            n_classes=3,
            dim=8,
            class_proportions=[0.5, 0.3, 0.2],
            cluster_spread=0.3,
            rng_seed=5,
        )
        base.update(kw)
        return SyntheticSpec(**base)

    def test_exact_class_counts(self):
        bundle = generate(self.spec())
        counts = np.bincount(bundle.gold_labels, minlength=3)
        assert counts.tolist() == [30, 18, 12]

    def test_same_seed_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.dbnd", tmp_path / "b.dbnd"
        save_bundle(generate(self.spec()), a)
        save_bundle(generate(self.spec()), b)
        assert a.read_bytes() == b.read_bytes()

    def test_different_seed_differs(self):
        a = generate(self.spec())
        b = generate(self.spec(rng_seed=6))
        assert not np.array_equal(a.textual, b.textual)

    def test_zero_spread_collapses_classes(self):
        bundle = generate(self.spec(cluster_spread=0.0))
        for j in range(3):
            rows = bundle.textual[bundle.gold_labels == j]
            assert np.array_equal(rows, np.tile(rows[0], (len(rows), 1)))

    def test_rows_unit_norm(self):
        bundle = generate(self.spec())
        for mat in (bundle.textual, bundle.predictive, bundle.class_embeds):
            assert np.allclose(np.linalg.norm(mat, axis=1), 1.0, atol=1e-12)

    def test_bad_proportions_rejected(self):
        with pytest.raises(ValueError, match="sum"):
            generate(self.spec(class_proportions=[0.5, 0.3, 0.1]))
        with pytest.raises(ValueError, match="positive"):
            generate(self.spec(class_proportions=[0.5, 0.5, 0.0]))
        with pytest.raises(ValueError, match="proportions"):
            generate(self.spec(class_proportions=[0.5, 0.5]))
