"""Figure rendering for reports and benchmark suites.

All functions write a PNG to a given path and return the path; nothing
is shown interactively (the Agg backend is forced so the CLI works on
headless machines).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _finish(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def scree_rq_figure(report, title, path):
    """Two-panel figure: eigenvalue scree and per-eigenvector variance
    ratio, for the adjacency and regularized-Laplacian matrices."""
    idx = np.arange(1, report.depth + 1)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4))
    ax1.plot(idx, report.adjacency_values, "o-", label="adjacency")
    ax1.plot(idx, report.laplacian_values, "s--",
             label=f"Laplacian ($\\delta$={report.delta:g})")
    ax1.axhline(0.0, color="gray", lw=0.6)
    ax1.set_xlabel("eigenvalue index")
    ax1.set_ylabel("eigenvalue")
    ax1.set_title("scree")
    ax1.legend(fontsize=8)

    width = 0.38
    ax2.bar(idx - width / 2, report.adjacency_rq, width, label="adjacency")
    ax2.bar(idx + width / 2, report.laplacian_rq, width,
            label=f"Laplacian ($\\delta$={report.delta:g})")
    ax2.set_xlabel("eigenvector index")
    ax2.set_ylabel("between-class variance fraction")
    ax2.set_ylim(0, 1)
    ax2.set_title("community signal per eigenvector")
    ax2.legend(fontsize=8)

    fig.suptitle(title)
    return _finish(fig, path)


def delta_sweep_figure(deltas, series, path, published=None):
    """Error counts vs delta, one line per dataset.

    Args:
        deltas: the delta grid.
        series: {dataset: list of error counts} (measured).
        path: output PNG path.
        published: optional {dataset: list} drawn as faint dashed lines.
    """
    fig, ax = plt.subplots(figsize=(6.5, 4))
    for name, counts in series.items():
        line, = ax.plot(deltas, counts, "o-", label=name)
        if published and name in published:
            ax.plot(deltas, published[name], "--", lw=0.9, alpha=0.5,
                    color=line.get_color())
    ax.set_xlabel("$\\delta$")
    ax.set_ylabel("# misclustered nodes")
    ax.set_title("ridge-regularization sweep (dashed: published)")
    ax.legend(fontsize=8, ncol=2)
    return _finish(fig, path)


def simulation_figure(ns, rows, path):
    """Mean error rate vs n for each (experiment, method) series.

    Args:
        ns: node counts (x axis).
        rows: {(experiment, method): [mean error per n]}.
    """
    fig, ax = plt.subplots(figsize=(6.5, 4))
    styles = {"score": "o--", "score+": "s-"}
    for (exp, method), errs in sorted(rows.items()):
        ax.plot(ns[: len(errs)], errs, styles.get(method, "^-"),
                label=f"experiment {exp}, {method}")
    ax.set_xlabel("n")
    ax.set_ylabel("mean error rate")
    ax.set_xscale("log")
    ax.set_title("simulated recovery error")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def ratio_scatter_figure(features, labels, title, path):
    """Scatter of the first two feature columns colored by label (for a
    1-column feature matrix the y axis is the node index)."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    x = features[:, 0]
    y = features[:, 1] if features.shape[1] > 1 else np.arange(features.shape[0])
    fig, ax = plt.subplots(figsize=(5, 4))
    for lab in np.unique(labels):
        mask = labels == lab
        ax.scatter(x[mask], y[mask], s=14, label=f"community {lab}", alpha=0.75)
    ax.set_xlabel("feature 1")
    ax.set_ylabel("feature 2" if features.shape[1] > 1 else "node index")
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _finish(fig, path)
