"""From embeddings to the dual-neighbor graph, stage by stage.

Each document gets k nearest neighbors in two different metric spaces:
angular distance between textual embeddings, and l1 distance between
calibrated label rows.  Distances from the two spaces live on different
scales, so each node's out-edges are renormalized to sum to log2(k)
before the directed graphs are symmetrized (fuzzy union) and merged.
Pairs that are neighbors in both spaces become boosted dual edges.
"""

import numpy as np

from deuce import Metric, SyntheticSpec, build_knn, generate, label_matrix, merge
from deuce import normalize_graph, symmetrize
from deuce.dng import EdgeType

K = 8
bundle = generate(
    SyntheticSpec(
        n_docs=150,
        n_classes=3,
        dim=16,
        class_proportions=[0.4, 0.35, 0.25],
        cluster_spread=0.3,
        rng_seed=0,
    )
)
scores = label_matrix(bundle).scores

g_text = build_knn(bundle.textual, Metric.TEXTUAL, K)
g_label = build_knn(scores, Metric.LABEL, K)
print("metric scales before normalization:")
print(f"  textual distances: {g_text.distances.min():.3f} .. {g_text.distances.max():.3f}")
print(f"  label distances:   {g_label.distances.min():.3f} .. {g_label.distances.max():.3f}")

n_text = normalize_graph(g_text)
n_label = normalize_graph(g_label)
print()
print(f"after normalization every node's weights sum to log2({K}) = {np.log2(K)}:")
print(f"  textual row sums: {n_text.weights.sum(axis=1).min():.6f} .. {n_text.weights.sum(axis=1).max():.6f}")
print(f"  label row sums:   {n_label.weights.sum(axis=1).min():.6f} .. {n_label.weights.sum(axis=1).max():.6f}")

s_text, s_label = symmetrize(n_text), symmetrize(n_label)
dual = merge(s_text, s_label, gamma=1.0)
counts = {t.name.lower(): int((dual.edge_type == t).sum()) for t in EdgeType}
print()
print(f"dual-neighbor graph: {dual.n_edges} edges over {dual.n_nodes} nodes")
print("  edge types:", counts)

dual_w = dual.edge_w[dual.edge_type == EdgeType.DUAL]
single_w = dual.edge_w[dual.edge_type != EdgeType.DUAL]
print(f"  dual weights:   {dual_w.min():.3f} .. {dual_w.max():.3f}  (boosted by gamma = 1)")
print(f"  single weights: {single_w.min():.3f} .. {single_w.max():.3f}")

same = bundle.gold_labels[dual.edge_u] == bundle.gold_labels[dual.edge_v]
print(f"  fraction of dual edges joining same-class docs: "
      f"{same[dual.edge_type == EdgeType.DUAL].mean():.2f}")
