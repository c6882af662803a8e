"""Cold-start active learning via dual-diversity graphs.

From unlabeled document embeddings, selects a class-balanced,
uncertainty-aware seed set: calibrated label prediction, dual kNN-graph
construction, dual-neighbor merging, density-based uncertainty
propagation, and farthest point sampling.
"""

from .acquisition import FpsCandidate, PropagatedUncertainty, fps, propagate, select
from .baselines import StrategyKind, select_coreset, select_entropy, select_random
from .bundle import (
    BundleFormatError,
    EmbeddingBundle,
    SelectionResult,
    build_bundle,
    load_bundle,
    load_selection,
    save_bundle,
    save_selection,
)
from .clustering import ClusterAssignment, cluster
from .dng import DualNeighborGraph, EdgeType, merge
from .knn import GraphKind, Metric, SparseWeightedGraph, build_knn, normalize_graph, symmetrize
from .metrics import SelectionReport, diversity, imbalance, selection_report
from .pipeline import PipelineConfig, PipelineOutput, StageError, run_pipeline
from .prediction import (
    LabelMatrix,
    edf_calibrate,
    label_matrix,
    ova_uncertainty,
    randomize_predictions,
    similarity_matrix,
)
from .synth import SyntheticSpec, apportion, generate

__version__ = "0.1.0"

__all__ = [
    "BundleFormatError",
    "ClusterAssignment",
    "DualNeighborGraph",
    "EdgeType",
    "EmbeddingBundle",
    "FpsCandidate",
    "GraphKind",
    "LabelMatrix",
    "Metric",
    "PipelineConfig",
    "PipelineOutput",
    "PropagatedUncertainty",
    "SelectionReport",
    "SelectionResult",
    "SparseWeightedGraph",
    "StageError",
    "StrategyKind",
    "SyntheticSpec",
    "apportion",
    "build_bundle",
    "build_knn",
    "cluster",
    "diversity",
    "edf_calibrate",
    "fps",
    "generate",
    "imbalance",
    "label_matrix",
    "load_bundle",
    "load_selection",
    "merge",
    "normalize_graph",
    "ova_uncertainty",
    "propagate",
    "randomize_predictions",
    "run_pipeline",
    "save_bundle",
    "save_selection",
    "select",
    "select_coreset",
    "select_entropy",
    "select_random",
    "selection_report",
    "similarity_matrix",
    "symmetrize",
]
