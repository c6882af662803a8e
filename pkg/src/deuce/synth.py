"""Synthetic embedding bundles for pipeline verification.

Generates a labeled corpus-like bundle: class centroids on the unit
sphere, textual rows as noisy copies of the gold-class centroid, and
predictive rows as an independent noisy mixture of the same centroid.
Class proportions are realized exactly by largest-remainder apportionment,
and every draw flows from one seeded generator, so a spec plus seed is
reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bundle import EmbeddingBundle, build_bundle


@dataclass
class SyntheticSpec:
    n_docs: int
    n_classes: int
    dim: int
    class_proportions: list[float]
    cluster_spread: float = 0.3
    rng_seed: int = 0

    def validate(self) -> None:
        if self.n_docs < 1 or self.n_classes < 1 or self.dim < 1:
            raise ValueError("n_docs, n_classes, and dim must be positive")
        props = np.asarray(self.class_proportions, dtype=np.float64)
        if len(props) != self.n_classes:
            raise ValueError(
                f"{len(props)} proportions for {self.n_classes} classes"
            )
        if (props <= 0).any():
            raise ValueError("class proportions must be positive")
        if abs(props.sum() - 1.0) > 1e-9:
            raise ValueError(f"class proportions sum to {props.sum()}, not 1")
        if self.cluster_spread < 0:
            raise ValueError("cluster_spread must be nonnegative")


def apportion(proportions: np.ndarray, total: int) -> np.ndarray:
    """Largest-remainder rounding of total * proportions to integer counts."""
    proportions = np.asarray(proportions, dtype=np.float64)
    quotas = proportions * total
    counts = np.floor(quotas).astype(np.int64)
    short = total - counts.sum()
    if short > 0:
        # Ties on the fractional part go to the lower class index.
        order = np.argsort(-(quotas - counts), kind="stable")
        counts[order[:short]] += 1
    return counts


def _unit_rows(rows: np.ndarray) -> np.ndarray:
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def generate(spec: SyntheticSpec) -> EmbeddingBundle:
    spec.validate()
    rng = np.random.default_rng(spec.rng_seed)

    centroids = _unit_rows(rng.standard_normal((spec.n_classes, spec.dim)))
    counts = apportion(np.asarray(spec.class_proportions), spec.n_docs)
    labels = np.repeat(np.arange(spec.n_classes), counts)
    labels = labels[rng.permutation(spec.n_docs)]

    textual = centroids[labels] + spec.cluster_spread * rng.standard_normal(
        (spec.n_docs, spec.dim)
    )
    predictive = centroids[labels] + spec.cluster_spread * rng.standard_normal(
        (spec.n_docs, spec.dim)
    )
    return build_bundle(
        textual=_unit_rows(textual),
        predictive=_unit_rows(predictive),
        class_embeds=centroids,
        class_names=[f"class-{j}" for j in range(spec.n_classes)],
        doc_ids=[f"doc-{i:05d}" for i in range(spec.n_docs)],
        gold_labels=labels,
    )
