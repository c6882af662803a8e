"""Embedding bundle container and selection record I/O.

The bundle container is the interchange format between the embedding
extractor and the selection pipeline.  Layout, all little-endian:

    bytes 0..7    magic ``DEUCEBND``
    byte  8       format version (currently 1)
    bytes 9..16   uint64 length M of the JSON manifest
    next M bytes  UTF-8 JSON manifest: n_docs, n_classes, dim,
                  class_names, doc_ids, gold_labels (or null),
                  renormalized flag
    then          textual matrix,    n_docs    * dim float32, row-major
    then          predictive matrix, n_docs    * dim float32, row-major
    then          class matrix,      n_classes * dim float32, row-major

No trailing bytes are permitted; every structural field is validated on
load.  Rows of all three matrices are unit vectors: the cosine metric and
the inner-product similarity downstream assume it.  Rows whose norm
deviates from 1 by more than ``NORM_TOLERANCE`` are renormalized at load
time and the bundle is flagged.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

MAGIC = b"DEUCEBND"
FORMAT_VERSION = 1
NORM_TOLERANCE = 1e-4

_HEADER = struct.Struct("<8sBQ")  # magic, version, manifest length


class BundleFormatError(ValueError):
    """Raised when a bundle or selection file fails validation."""


@dataclass
class EmbeddingBundle:
    """Unit-normalized document, prediction, and class embeddings.

    ``textual`` and ``predictive`` are (n_docs, dim); ``class_embeds`` is
    (n_classes, dim).  ``gold_labels`` is evaluation-only metadata and may
    be absent.  ``renormalized`` records whether any row needed rescaling
    to unit norm when the bundle was loaded or constructed.
    """

    textual: np.ndarray
    predictive: np.ndarray
    class_embeds: np.ndarray
    class_names: list[str]
    doc_ids: list[str]
    gold_labels: np.ndarray | None = None
    renormalized: bool = False

    @property
    def n_docs(self) -> int:
        return self.textual.shape[0]

    @property
    def n_classes(self) -> int:
        return self.class_embeds.shape[0]

    @property
    def dim(self) -> int:
        return self.textual.shape[1]

    def validate(self) -> None:
        if self.textual.ndim != 2 or self.predictive.ndim != 2 or self.class_embeds.ndim != 2:
            raise BundleFormatError("embedding matrices must be 2-dimensional")
        n, d = self.textual.shape
        if self.predictive.shape != (n, d):
            raise BundleFormatError(
                f"predictive shape {self.predictive.shape} != textual shape {(n, d)}"
            )
        if self.class_embeds.shape[1] != d:
            raise BundleFormatError(
                f"class embedding width {self.class_embeds.shape[1]} != dim {d}"
            )
        if len(self.doc_ids) != n:
            raise BundleFormatError(f"{len(self.doc_ids)} doc ids for {n} documents")
        if len(self.class_names) != self.class_embeds.shape[0]:
            raise BundleFormatError(
                f"{len(self.class_names)} class names for {self.class_embeds.shape[0]} classes"
            )
        for name, mat in (
            ("textual", self.textual),
            ("predictive", self.predictive),
            ("class_embeds", self.class_embeds),
        ):
            bad = ~np.isfinite(mat)
            if bad.any():
                row = int(np.nonzero(bad.any(axis=1))[0][0])
                raise BundleFormatError(f"non-finite value in {name} row {row}")
        if self.gold_labels is not None:
            if self.gold_labels.shape != (n,):
                raise BundleFormatError("gold_labels length does not match n_docs")
            c = self.class_embeds.shape[0]
            if self.gold_labels.min(initial=0) < 0 or self.gold_labels.max(initial=0) >= c:
                raise BundleFormatError("gold label outside [0, n_classes)")


def _normalize_rows(mat: np.ndarray, name: str) -> tuple[np.ndarray, bool]:
    """Rescale rows to unit norm where they deviate beyond tolerance."""
    norms = np.linalg.norm(mat, axis=1)
    zero = norms == 0.0
    if zero.any():
        row = int(np.nonzero(zero)[0][0])
        raise BundleFormatError(f"zero-norm vector in {name} row {row}")
    off = np.abs(norms - 1.0) > NORM_TOLERANCE
    if not off.any():
        return mat, False
    out = mat.copy()
    out[off] = mat[off] / norms[off, None]
    return out, True


def build_bundle(
    textual: np.ndarray,
    predictive: np.ndarray,
    class_embeds: np.ndarray,
    class_names: list[str],
    doc_ids: list[str],
    gold_labels: np.ndarray | None = None,
) -> EmbeddingBundle:
    """Assemble and validate a bundle from in-memory matrices.

    Rows are renormalized if needed, mirroring the loader's behavior.
    """
    textual = np.ascontiguousarray(textual, dtype=np.float64)
    predictive = np.ascontiguousarray(predictive, dtype=np.float64)
    class_embeds = np.ascontiguousarray(class_embeds, dtype=np.float64)
    bundle = EmbeddingBundle(
        textual=textual,
        predictive=predictive,
        class_embeds=class_embeds,
        class_names=list(class_names),
        doc_ids=list(doc_ids),
        gold_labels=None if gold_labels is None else np.asarray(gold_labels, dtype=np.int64),
    )
    bundle.validate()
    t, rt = _normalize_rows(bundle.textual, "textual")
    p, rp = _normalize_rows(bundle.predictive, "predictive")
    c, rc = _normalize_rows(bundle.class_embeds, "class_embeds")
    return replace(bundle, textual=t, predictive=p, class_embeds=c, renormalized=rt or rp or rc)


def save_bundle(bundle: EmbeddingBundle, path: str | Path) -> None:
    """Write a validated bundle to ``path`` in the container format."""
    bundle.validate()
    manifest = {
        "n_docs": bundle.n_docs,
        "n_classes": bundle.n_classes,
        "dim": bundle.dim,
        "class_names": bundle.class_names,
        "doc_ids": bundle.doc_ids,
        "gold_labels": None if bundle.gold_labels is None else bundle.gold_labels.tolist(),
        "renormalized": bool(bundle.renormalized),
    }
    blob = json.dumps(manifest, ensure_ascii=False).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, len(blob)))
        fh.write(blob)
        for mat in (bundle.textual, bundle.predictive, bundle.class_embeds):
            fh.write(np.ascontiguousarray(mat, dtype="<f4").tobytes())


def load_bundle(path: str | Path) -> EmbeddingBundle:
    """Read and validate a bundle container.

    Rows off unit norm by more than ``NORM_TOLERANCE`` are renormalized
    and the returned bundle carries ``renormalized=True``.
    """
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise BundleFormatError("file too short for bundle header")
    magic, version, manifest_len = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise BundleFormatError(f"bad magic {magic!r}; not a bundle file")
    if version != FORMAT_VERSION:
        raise BundleFormatError(f"unsupported bundle version {version}")
    body = raw[_HEADER.size :]
    if manifest_len > len(body):
        raise BundleFormatError("manifest length exceeds file size")
    try:
        manifest = json.loads(body[:manifest_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise BundleFormatError(f"malformed manifest: {exc}") from exc
    for key in ("n_docs", "n_classes", "dim", "class_names", "doc_ids", "renormalized"):
        if key not in manifest:
            raise BundleFormatError(f"manifest missing field {key!r}")
    n, c, d = manifest["n_docs"], manifest["n_classes"], manifest["dim"]
    if not all(isinstance(v, int) and v > 0 for v in (n, c, d)):
        raise BundleFormatError("n_docs, n_classes, and dim must be positive integers")

    payload = body[manifest_len:]
    counts = (n * d, n * d, c * d)
    if len(payload) != 4 * sum(counts):
        raise BundleFormatError(
            f"payload holds {len(payload)} bytes, expected {4 * sum(counts)}"
        )
    mats = []
    offset = 0
    for count in counts:
        mats.append(np.frombuffer(payload, dtype="<f4", count=count, offset=offset))
        offset += 4 * count
    textual = mats[0].astype(np.float64).reshape(n, d)
    predictive = mats[1].astype(np.float64).reshape(n, d)
    class_embeds = mats[2].astype(np.float64).reshape(c, d)

    gold = manifest.get("gold_labels")
    bundle = EmbeddingBundle(
        textual=textual,
        predictive=predictive,
        class_embeds=class_embeds,
        class_names=[str(s) for s in manifest["class_names"]],
        doc_ids=[str(s) for s in manifest["doc_ids"]],
        gold_labels=None if gold is None else np.asarray(gold, dtype=np.int64),
    )
    bundle.validate()
    textual, rt = _normalize_rows(textual, "textual")
    predictive, rp = _normalize_rows(predictive, "predictive")
    class_embeds, rc = _normalize_rows(class_embeds, "class_embeds")
    return replace(
        bundle,
        textual=textual,
        predictive=predictive,
        class_embeds=class_embeds,
        renormalized=bool(manifest["renormalized"]) or rt or rp or rc,
    )


@dataclass
class SelectionResult:
    """Ordered seed selection plus provenance.

    ``candidate_scores`` maps each sampling start node to the summed
    propagated uncertainty of its candidate set; empty for baseline
    strategies that do not sample from multiple starts.
    """

    selected_indices: list[int]
    selected_ids: list[str]
    candidate_scores: dict[int, float] = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    rng_seed: int = 0

    def validate(self) -> None:
        n_docs = self.config.get("n_docs")
        if not isinstance(n_docs, int) or n_docs <= 0:
            raise BundleFormatError("selection config must record a positive n_docs")
        if len(self.selected_indices) != len(set(self.selected_indices)):
            raise BundleFormatError("selected indices must be distinct")
        for idx in self.selected_indices:
            if not (0 <= idx < n_docs):
                raise BundleFormatError(f"selected index {idx} outside [0, {n_docs})")
        if len(self.selected_ids) != len(self.selected_indices):
            raise BundleFormatError("selected_ids length does not match selected_indices")


def save_selection(result: SelectionResult, path: str | Path) -> None:
    """Write a selection record as a JSON text document."""
    result.validate()
    record = {
        "selected_indices": [int(i) for i in result.selected_indices],
        "selected_ids": list(result.selected_ids),
        "scores": {str(k): float(v) for k, v in result.candidate_scores.items()},
        "config": result.config,
        "rng_seed": int(result.rng_seed),
    }
    Path(path).write_text(json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_selection(path: str | Path) -> SelectionResult:
    try:
        record = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleFormatError(f"malformed selection file: {exc}") from exc
    for key in ("selected_indices", "selected_ids", "scores", "config", "rng_seed"):
        if key not in record:
            raise BundleFormatError(f"selection file missing field {key!r}")
    result = SelectionResult(
        selected_indices=[int(i) for i in record["selected_indices"]],
        selected_ids=[str(s) for s in record["selected_ids"]],
        candidate_scores={int(k): float(v) for k, v in record["scores"].items()},
        config=record["config"],
        rng_seed=int(record["rng_seed"]),
    )
    result.validate()
    return result
