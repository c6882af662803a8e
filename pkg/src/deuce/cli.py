"""Command-line entry points.

Subcommands: ``select`` (run the pipeline or a baseline on a bundle),
``synth`` (generate a synthetic labeled bundle), ``metrics`` (score an
existing selection), and ``dump-graph`` (write debug edge lists).
``DEUCE_SEED`` and ``DEUCE_THREADS`` override the respective defaults when
the flags are not given.  Exit status is 0 on success, 1 with a
stage-tagged message on stderr otherwise.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import knn, prediction
from .baselines import StrategyKind
from .bundle import BundleFormatError, load_bundle, load_selection, save_bundle, save_selection
from .metrics import selection_report
from .pipeline import PipelineConfig, StageError, build_dual_graph, run_pipeline, _stage
from .synth import SyntheticSpec, generate


def _env_int(name: str, fallback: int) -> int:
    value = os.environ.get(name)
    return fallback if value is None else int(value)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deuce")
    sub = parser.add_subparsers(dest="command", required=True)
    seed_default = _env_int("DEUCE_SEED", 0)
    threads_default = _env_int("DEUCE_THREADS", 1)

    p = sub.add_parser("select", help="acquire a seed set from a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report-out", default=None)
    p.add_argument("--b", type=int, required=True, help="labeling budget")
    p.add_argument("--k", type=int, default=500, help="neighbor count")
    p.add_argument("--k-r", type=int, default=3, help="minimum cluster size")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--n-starts", type=int, default=10)
    p.add_argument("--rng-seed", type=int, default=seed_default)
    p.add_argument(
        "--strategy",
        choices=[s.value for s in StrategyKind],
        default=StrategyKind.DEUCE.value,
    )
    p.add_argument("--randomize-predictions", action="store_true")
    p.add_argument("--threads", type=int, default=threads_default)

    p = sub.add_parser("synth", help="generate a synthetic labeled bundle")
    p.add_argument("--out", required=True)
    p.add_argument("--n-docs", type=int, required=True)
    p.add_argument("--n-classes", type=int, required=True)
    p.add_argument("--dim", type=int, default=32)
    p.add_argument(
        "--proportions",
        default=None,
        help="comma-separated class proportions summing to 1 (default uniform)",
    )
    p.add_argument("--spread", type=float, default=0.3)
    p.add_argument("--rng-seed", type=int, default=seed_default)

    p = sub.add_parser("metrics", help="score a saved selection")
    p.add_argument("--bundle", required=True)
    p.add_argument("--selection", required=True)
    p.add_argument("--out", default=None, help="optional JSON report path")
    p.add_argument(
        "--reference-bundle",
        default=None,
        help="bundle whose textual matrix serves as the diversity reference "
        "(default: the scored bundle itself)",
    )

    p = sub.add_parser("dump-graph", help="write a debug edge list")
    p.add_argument("--bundle", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--space", choices=["textual", "label"], default="textual")
    p.add_argument(
        "--stage",
        choices=["knn", "normalized", "symmetric", "dual"],
        default="dual",
    )
    p.add_argument("--k", type=int, default=500)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--threads", type=int, default=threads_default)
    return parser


def _cmd_select(args: argparse.Namespace) -> int:
    with _stage("io"):
        bundle = load_bundle(args.bundle)
    config = PipelineConfig(
        b=args.b,
        k=args.k,
        k_r=args.k_r,
        gamma=args.gamma,
        n_starts=args.n_starts,
        rng_seed=args.rng_seed,
        strategy=StrategyKind(args.strategy),
        randomize_predictions=args.randomize_predictions,
        threads=args.threads,
    )
    output = run_pipeline(bundle, config)
    with _stage("io"):
        save_selection(output.result, args.out)
    print(f"selected {len(output.result.selected_indices)} documents -> {args.out}")
    if output.report is not None:
        report_path = args.report_out or args.out + ".report.json"
        with _stage("io"):
            import json

            Path(report_path).write_text(
                json.dumps(output.report.as_record(), indent=2, sort_keys=True) + "\n"
            )
        print(output.report.as_table())
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    if args.proportions is None:
        props = [1.0 / args.n_classes] * args.n_classes
    else:
        props = [float(x) for x in args.proportions.split(",")]
    spec = SyntheticSpec(
        n_docs=args.n_docs,
        n_classes=args.n_classes,
        dim=args.dim,
        class_proportions=props,
        cluster_spread=args.spread,
        rng_seed=args.rng_seed,
    )
    with _stage("synth"):
        bundle = generate(spec)
    with _stage("io"):
        save_bundle(bundle, args.out)
    print(f"wrote bundle: {bundle.n_docs} docs, {bundle.n_classes} classes -> {args.out}")
    return 0


def _cmd_metrics(args: argparse.Namespace) -> int:
    with _stage("io"):
        bundle = load_bundle(args.bundle)
        selection = load_selection(args.selection)
        reference = bundle.textual
        if args.reference_bundle is not None:
            ref_bundle = load_bundle(args.reference_bundle)
            if ref_bundle.n_docs != bundle.n_docs:
                raise BundleFormatError(
                    f"reference bundle holds {ref_bundle.n_docs} docs, expected {bundle.n_docs}"
                )
            reference = ref_bundle.textual
    indices = np.asarray(selection.selected_indices, dtype=np.int64)
    if bundle.gold_labels is None:
        print("IMB: n/a (bundle has no gold labels)")
        return 0
    with _stage("metrics"):
        report = selection_report(
            bundle.gold_labels, bundle.n_classes, reference, indices
        )
    print(report.as_table())
    if args.out:
        with _stage("io"):
            import json

            Path(args.out).write_text(
                json.dumps(report.as_record(), indent=2, sort_keys=True) + "\n"
            )
    return 0


def _cmd_dump_graph(args: argparse.Namespace) -> int:
    with _stage("io"):
        bundle = load_bundle(args.bundle)
    config = PipelineConfig(b=1, k=args.k, gamma=args.gamma, threads=args.threads)
    with _stage("config"):
        config.validate()
        k = config.effective_k(bundle.n_docs)
    with _stage("prediction"):
        labels = prediction.label_matrix(bundle)
    if args.stage == "dual":
        graph = build_dual_graph(bundle, labels.scores, k, args.gamma, args.threads)
        with _stage("io"):
            graph.dump(args.out)
        return 0
    points = bundle.textual if args.space == "textual" else labels.scores
    metric = knn.Metric.TEXTUAL if args.space == "textual" else knn.Metric.LABEL
    with _stage(f"knn-{args.space}"):
        g = knn.build_knn(points, metric, k, threads=args.threads)
    if args.stage in ("normalized", "symmetric"):
        with _stage("normalize"):
            g = knn.normalize_graph(g)
    if args.stage == "symmetric":
        with _stage("symmetrize"):
            g = knn.symmetrize(g)
    with _stage("io"):
        g.dump(args.out)
    return 0


_COMMANDS = {
    "select": _cmd_select,
    "synth": _cmd_synth,
    "metrics": _cmd_metrics,
    "dump-graph": _cmd_dump_graph,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except StageError as exc:
        print(f"error[{exc.stage}]: {exc.message}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error[cli]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
