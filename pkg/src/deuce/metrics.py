"""Selection quality metrics: class imbalance and textual diversity.

Class imbalance (IMB) is the ratio of the most- to least-frequent class in
the selection; a class with zero instances makes it infinite, the
signature of a missed cluster.  Textual diversity D is the inverse of the
mean distance from each unselected document to its nearest selected one,
computed over a caller-supplied reference embedding matrix.  Infinities
are serialized as the string ``"inf"`` in machine-readable reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_DIVERSITY_BLOCK = 1024


@dataclass
class SelectionReport:
    imb: float
    diversity: float
    class_counts: list[int]
    b: int

    def as_record(self) -> dict:
        """JSON-safe dict; infinities become the string sentinel."""
        return {
            "imb": "inf" if np.isinf(self.imb) else float(self.imb),
            "diversity": "inf" if np.isinf(self.diversity) else float(self.diversity),
            "class_counts": [int(c) for c in self.class_counts],
            "b": int(self.b),
        }

    def as_table(self) -> str:
        lines = [
            f"selected            {self.b}",
            f"class counts        {' '.join(str(c) for c in self.class_counts)}",
            f"imbalance (IMB)     {self.imb}",
            f"diversity (D)       {self.diversity}",
        ]
        return "\n".join(lines)


def class_counts(labels: np.ndarray, n_classes: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.min(initial=0) < 0 or labels.max(initial=-1) >= n_classes:
        raise ValueError("label index outside [0, n_classes)")
    return np.bincount(labels, minlength=n_classes)


def imbalance(labels: np.ndarray, n_classes: int) -> float:
    """max_j n_j / min_j n_j over all classes; an absent class gives +inf."""
    counts = class_counts(labels, n_classes)
    low = counts.min()
    if low == 0:
        return float("inf")
    return float(counts.max() / low)


def diversity(reference: np.ndarray, selected: np.ndarray) -> float:
    """Inverse mean nearest-selected distance over unselected documents.

    Distances are Euclidean in the reference embedding space.  If every
    unselected document coincides with a selected one the mean is zero and
    D is +inf.
    """
    reference = np.asarray(reference, dtype=np.float64)
    selected = np.asarray(selected, dtype=np.int64)
    n = reference.shape[0]
    mask = np.ones(n, dtype=bool)
    mask[selected] = False
    unselected = np.nonzero(mask)[0]
    if len(unselected) == 0:
        raise ValueError("selection covers every document; diversity undefined")

    chosen = reference[selected]
    total = 0.0
    for s in range(0, len(unselected), _DIVERSITY_BLOCK):
        block = reference[unselected[s : s + _DIVERSITY_BLOCK]]
        d = np.linalg.norm(block[:, None, :] - chosen[None, :, :], axis=2)
        total += d.min(axis=1).sum()
    mean = total / len(unselected)
    if mean == 0.0:
        return float("inf")
    return float(1.0 / mean)


def selection_report(
    gold_labels: np.ndarray,
    n_classes: int,
    reference: np.ndarray,
    selected: np.ndarray,
) -> SelectionReport:
    selected = np.asarray(selected, dtype=np.int64)
    return SelectionReport(
        imb=imbalance(np.asarray(gold_labels)[selected], n_classes),
        diversity=diversity(reference, selected),
        class_counts=class_counts(np.asarray(gold_labels)[selected], n_classes).tolist(),
        b=len(selected),
    )
