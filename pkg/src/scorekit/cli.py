"""Command-line interface: detect / simulate / bench.

Every command writes a manifest next to its outputs so a run can be
reproduced exactly (command echo, configuration, input checksum, seed,
result summary, duration). Exit status is 0 iff all requested outputs
were produced and, for bench, every tolerance gate passed.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, bench, datasets, dcbm, plots
from .diagnostics import error_rate, gap_statistic, scree_and_rq_report
from .graphs import (
    Graph,
    GraphFormatError,
    format_edge_list,
    format_labels,
    is_connected,
    largest_connected_component,
    load_graph,
)
from .manifest import config_dict, sha256_graph, write_manifest
from .pipeline import run_pipeline
from .spectral import ConvergenceError

logger = logging.getLogger(__name__)


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


# ----------------------------------------------------------------------
# detect
# ----------------------------------------------------------------------

def cmd_detect(args) -> int:
    t0 = time.time()
    try:
        g = load_graph(args.graph, args.labels)
    except (GraphFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if not is_connected(g):
        if args.largest_component:
            before = g.n
            g = largest_connected_component(g)
            logger.info("kept largest component: %d of %d nodes", g.n, before)
        else:
            print("error: the graph is disconnected; rerun with "
                  "--largest-component to analyze its largest component",
                  file=sys.stderr)
            return 2

    variant = {}
    if args.no_pre_pca:
        variant["pre_pca"] = False
    if args.no_post_pca:
        variant["post_pca"] = False
    if args.no_extra_vector:
        variant["extra_vector"] = False
    if args.unweighted:
        variant["weighted"] = False
    if args.log_threshold:
        variant["log_threshold"] = True
    try:
        config = bench.method_config(args.method, args.k, delta=args.delta,
                                     t=args.t, seed=args.seed,
                                     restarts=args.restarts, **variant)
        result = run_pipeline(g, config)
    except (ValueError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    out = Path(args.out) if args.out else Path(args.graph).with_suffix(".communities.tsv")
    out.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{g.name_of(i)}\t{int(result.labels[i])}" for i in range(g.n)]
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({g.n} nodes, {result.m_used} eigenvectors used)")

    summary = {
        "m_used": result.m_used,
        "gap": f"{result.gap:.6f}",
        "weak_signal": result.weak_signal,
        "kmeans_objective": f"{result.kmeans_objective:.6e}",
    }
    if g.labels is not None:
        err = error_rate(result.labels, g.labels)
        summary["error_count"] = err.count
        summary["error_rate"] = f"{err.rate:.6f}"
        print(f"error vs ground truth: {err.count}/{g.n} ({err.rate:.4f})")

    write_manifest(out.with_suffix(out.suffix + ".manifest"), {
        "command": "detect " + " ".join(map(str, [
            args.graph, f"--method {args.method}", f"--k {args.k}",
            f"--delta {args.delta}", f"--t {args.t}", f"--seed {args.seed}",
            f"--restarts {args.restarts}",
        ])),
        "input": {"path": str(args.graph), "checksum": sha256_graph(g)},
        "config": config_dict(config),
        "seed": args.seed,
        "result": summary,
        "duration_s": round(time.time() - t0, 2),
    })

    if args.report:
        report_dir = Path(args.report)
        report_dir.mkdir(parents=True, exist_ok=True)
        ref_labels = g.labels if g.labels is not None else result.labels
        ref_note = "ground-truth" if g.labels is not None else "estimated"
        graph_for_report = Graph(n=g.n, edges=g.edges, node_names=g.node_names,
                                 labels=ref_labels)
        rep = scree_and_rq_report(graph_for_report,
                                  depth=min(args.k + 3, g.n), delta=args.delta)
        fig = plots.scree_rq_figure(
            rep, f"{Path(args.graph).stem} ({ref_note} labels)",
            report_dir / "scree.png")
        rows = [[j + 1, f"{rep.adjacency_values[j]:.6f}",
                 f"{rep.adjacency_rq[j]:.2f}",
                 f"{rep.laplacian_values[j]:.6f}",
                 f"{rep.laplacian_rq[j]:.2f}"] for j in range(rep.depth)]
        tsv = report_dir / "diagnostics.tsv"
        header = ["index", "adjacency_value", "adjacency_rq",
                  "laplacian_value", "laplacian_rq"]
        tsv.write_text("\n".join(["\t".join(header)] +
                                 ["\t".join(map(str, r)) for r in rows]) + "\n",
                       encoding="utf-8")
        print(f"report written to {fig} and {tsv}")
    return 0


# ----------------------------------------------------------------------
# simulate
# ----------------------------------------------------------------------

def _read_p_matrix(path) -> np.ndarray:
    try:
        rows = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([float(tok) for tok in line.replace(",", " ").split()])
        p = np.array(rows, dtype=np.float64)
    except (OSError, ValueError) as exc:
        raise GraphFormatError(f"cannot parse P matrix from {path}: {exc}")
    if p.ndim != 2 or p.shape[0] != p.shape[1] or p.size == 0:
        raise GraphFormatError(f"P matrix in {path} is not square")
    return p


def cmd_simulate(args) -> int:
    t0 = time.time()
    try:
        if args.p_matrix:
            if args.k is None:
                print("error: --k is required with --p-matrix", file=sys.stderr)
                return 2
            p = _read_p_matrix(args.p_matrix)
            if p.shape[0] != args.k:
                print(f"error: P is {p.shape[0]}x{p.shape[0]} but --k is "
                      f"{args.k}", file=sys.stderr)
                return 2
            theta = dcbm.sample_theta(
                args.n, dcbm.experiment_theta_scale(args.n), seed=args.seed)
            model = dcbm.make_dcbm(theta,
                                   dcbm.build_balanced_pi(args.n, args.k), p)
        else:
            if args.k is not None and args.k != 4:
                print("error: the built-in experiments fix K=4; use "
                      "--p-matrix for other K", file=sys.stderr)
                return 2
            model = dcbm.experiment_model(args.experiment, args.n,
                                          seed=args.seed)
    except (GraphFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    g = dcbm.sample_adjacency(model, seed=args.seed + 1)
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    edges_path = prefix.with_suffix(".edges")
    labels_path = prefix.with_suffix(".labels")
    edges_path.write_text(format_edge_list(g), encoding="utf-8")
    labels_path.write_text(format_labels(g), encoding="utf-8")
    print(f"wrote {edges_path} ({g.num_edges} edges) and {labels_path} "
          f"({g.n} nodes, K={g.num_communities})")

    write_manifest(prefix.with_suffix(".manifest"), {
        "command": f"simulate --n {args.n} "
                   + (f"--p-matrix {args.p_matrix} --k {args.k}"
                      if args.p_matrix else f"--experiment {args.experiment}")
                   + f" --seed {args.seed}",
        "model": {
            "n": model.n,
            "k": model.k,
            "theta_scale": f"{dcbm.experiment_theta_scale(args.n):.6f}",
            "clamped_pairs": dcbm.clamped_pair_count(model),
        },
        "seed": args.seed,
        "result": {
            "edges": g.num_edges,
            "checksum": sha256_graph(g),
        },
        "duration_s": round(time.time() - t0, 2),
    })
    return 0


# ----------------------------------------------------------------------
# bench
# ----------------------------------------------------------------------

def cmd_bench(args) -> int:
    names = list(bench.SUITES) if args.suite == "all" else [args.suite]
    overall_ok = True
    for name in names:
        kwargs = {"out_dir": args.out}
        if name == "simulation":
            kwargs.update(n_seeds=args.seeds, base_seed=args.seed,
                          restarts=args.restarts, extended=args.extended)
        elif name == "realdata":
            kwargs.update(data_dir=args.data_dir, seed=args.seed,
                          restarts=args.restarts)
        elif name == "delta-sweep":
            kwargs.update(data_dir=args.data_dir, seed=args.seed,
                          restarts=args.restarts)
        else:
            kwargs.update(data_dir=args.data_dir, seed=args.seed)
        result = bench.SUITES[name](**kwargs)
        for line in result.summary_lines():
            print(line)
        for path in result.tables + result.figures:
            print(f"  wrote {path}")
        overall_ok = overall_ok and result.passed
    return 0 if overall_ok else 1


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="scorekit",
        description="Spectral community detection via eigenvector ratios: "
                    "run detection, simulate block-model graphs, and "
                    "reproduce the reference benchmark.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("detect", help="detect communities in a graph file")
    d.add_argument("graph", help="edge-list or .gml file")
    d.add_argument("--labels", default=None,
                   help="optional ground-truth labels file (node<TAB>label)")
    d.add_argument("--k", type=_positive_int, required=True,
                   help="number of communities (assumed known)")
    d.add_argument("--method", choices=["score", "score+"], default="score+")
    d.add_argument("--delta", type=float, default=0.1,
                   help="Laplacian ridge (default 0.1)")
    d.add_argument("--t", type=float, default=0.1,
                   help="eigen-gap threshold (default 0.1)")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--restarts", type=int, default=100)
    d.add_argument("--largest-component", action="store_true",
                   help="analyze the largest component of a disconnected graph")
    d.add_argument("--no-pre-pca", action="store_true",
                   help="ablation: skip the Laplacian normalization")
    d.add_argument("--no-post-pca", action="store_true",
                   help="ablation: cluster eigenvectors instead of ratios")
    d.add_argument("--no-extra-vector", action="store_true",
                   help="ablation: never add the weak-signal eigenvector")
    d.add_argument("--unweighted", action="store_true",
                   help="ablation: skip eigenvalue weighting of the ratios")
    d.add_argument("--log-threshold", action="store_true",
                   help="clip ratio entries at +/- log(n)")
    d.add_argument("--out", default=None,
                   help="output label file (default: <graph>.communities.tsv)")
    d.add_argument("--report", default=None, metavar="DIR",
                   help="also write a scree/variance figure and table here")
    d.set_defaults(func=cmd_detect)

    s = sub.add_parser("simulate", help="sample a block-model graph")
    s.add_argument("--n", type=_positive_int, required=True,
                   help="number of nodes (> 0)")
    s.add_argument("--experiment", type=int, choices=[1, 2], default=1,
                   help="built-in mixing matrix (default 1)")
    s.add_argument("--p-matrix", default=None, metavar="FILE",
                   help="custom K x K mixing matrix (whitespace-delimited)")
    s.add_argument("--k", type=_positive_int, default=None,
                   help="community count (required with --p-matrix)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="simulated", metavar="PREFIX",
                   help="output prefix (writes PREFIX.edges / .labels)")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bench", help="reproduce the reference benchmark")
    b.add_argument("--suite",
                   choices=["realdata", "simulation", "delta-sweep",
                            "diagnostics", "all"],
                   default="all")
    b.add_argument("--data-dir", default=None,
                   help=f"dataset directory (default: ${datasets.DATA_DIR_ENV} "
                        "or ./data)")
    b.add_argument("--seeds", type=_positive_int, default=10,
                   help="simulation repetitions per cell (default 10)")
    b.add_argument("--seed", type=int, default=0, help="base seed")
    b.add_argument("--restarts", type=int, default=100)
    b.add_argument("--extended", action="store_true",
                   help="simulation sizes up to n=10000")
    b.add_argument("--out", default="bench-out", metavar="DIR")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
