"""Calibrated label estimation and one-vs-all predictive uncertainty.

Raw inner-product similarities between predictive and class embeddings are
heavily anisotropic, so they are mapped through the empirical distribution
function of the whole similarity matrix.  The calibrated scores are then
read one-vs-all: the event "document i scores high for exactly one class"
has probability p_i, and the uncertainty is its self-information -log p_i.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import rankdata

from .bundle import EmbeddingBundle


@dataclass
class LabelMatrix:
    """Per-document calibrated class scores and uncertainty.

    ``scores[i, j]`` is the e.d.f.-calibrated estimate in (0, 1];
    ``uncertainty[i]`` is -log of the one-vs-all event probability
    (natural log, +inf when the probability underflows to zero).
    """

    scores: np.ndarray
    raw_similarity: np.ndarray
    uncertainty: np.ndarray
    argmax_class: np.ndarray


def similarity_matrix(bundle: EmbeddingBundle) -> np.ndarray:
    """Inner products of predictive rows against class rows, (N, C)."""
    return bundle.predictive @ bundle.class_embeds.T


def edf_calibrate(sim: np.ndarray) -> np.ndarray:
    """Map similarities through their empirical distribution function.

    Output entry (i, j) is the fraction of all N*C entries that are <= the
    input entry, the entry itself included, so values lie in [1/(NC), 1].
    Ties share the count of entries at or below their value; ranking the
    flattened matrix with max-ties gives exactly that count without the
    quadratic double sum.
    """
    sim = np.asarray(sim, dtype=np.float64)
    if not np.isfinite(sim).all():
        raise ValueError("similarity matrix contains non-finite entries")
    ranks = rankdata(sim, method="max").reshape(sim.shape)
    return ranks / sim.size


def ova_uncertainty(scores: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One-vs-all event probability and self-information per document.

    p_i = max_j [ y_ij * prod_{l != j} (1 - y_il) ] and u_i = -log p_i.
    Evaluated in log space: at large C the product underflows long before
    the probability is meaningfully zero.  A score of exactly 1 forces
    every branch except its own to -inf; a row with two unit scores has
    p_i = 0 and u_i = +inf.

    Returns (u, p).
    """
    y = np.asarray(scores, dtype=np.float64)
    if y.min() < 0.0 or y.max() > 1.0:
        raise ValueError("calibrated scores must lie in [0, 1]")

    with np.errstate(divide="ignore"):
        log_y = np.log(y)        # -inf where y == 0
        log_1m = np.log1p(-y)    # -inf where y == 1

    inf_mask = np.isinf(log_1m)
    n_inf = inf_mask.sum(axis=1, keepdims=True)
    finite_1m = np.where(inf_mask, 0.0, log_1m)
    finite_sum = finite_1m.sum(axis=1, keepdims=True)

    # Sum over l != j of log(1 - y_il): -inf as soon as any *other* entry is 1.
    others_inf = n_inf - inf_mask
    others = np.where(others_inf > 0, -np.inf, finite_sum - finite_1m)

    branches = log_y + others
    log_p = branches.max(axis=1)
    return -log_p, np.exp(log_p)


def label_matrix(bundle: EmbeddingBundle) -> LabelMatrix:
    """Full prediction stage: similarity, calibration, uncertainty."""
    sim = similarity_matrix(bundle)
    scores = edf_calibrate(sim)
    u, _ = ova_uncertainty(scores)
    return LabelMatrix(
        scores=scores,
        raw_similarity=sim,
        uncertainty=u,
        argmax_class=scores.argmax(axis=1),
    )


def randomize_predictions(bundle: EmbeddingBundle, rng_seed: int) -> EmbeddingBundle:
    """Replace predictive rows with random unit vectors (ablation).

    Textual and class matrices are untouched; the draw is an isotropic
    Gaussian, row-normalized, deterministic per seed.
    """
    rng = np.random.default_rng(rng_seed)
    rows = rng.standard_normal(bundle.predictive.shape)
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    return replace(bundle, predictive=rows)
