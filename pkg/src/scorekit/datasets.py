"""Benchmark dataset registry, loaders, and preprocessing.

Each dataset is loaded from a local data directory (``--data-dir`` or the
``SCOREKIT_DATA`` environment variable) and preprocessed the way the
benchmark expects: mixed-membership classes removed where documented,
directed/duplicate edges collapsed, and the largest connected component
extracted. Loaders verify the resulting (nodes, edges, communities)
against the registry and refuse silently different data.

The karate-club network is embedded (34 nodes; public-domain classic),
so the package has one fully offline dataset; everything else is
third-party data obtained with ``scripts/fetch_datasets.py``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graphs import (
    Graph,
    GraphFormatError,
    filter_by_label,
    largest_connected_component,
    load_graph,
)

DATA_DIR_ENV = "SCOREKIT_DATA"


class DatasetError(RuntimeError):
    """A dataset is missing or does not match its registered shape."""


# ----------------------------------------------------------------------
# embedded sample: Zachary's karate club
# ----------------------------------------------------------------------
# Ground truth is the two post-split factions. Note the faction variant
# used here assigns actor 9 (node index 8) to the instructor-opposing
# group, matching the curated labeling the benchmark targets were
# computed against (the actor sided with the instructor only after the
# split; faction membership is the pre-split alignment).

_KARATE_EDGES = (
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 10),
    (0, 11), (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31), (1, 2), (1, 3),
    (1, 7), (1, 13), (1, 17), (1, 19), (1, 21), (1, 30), (2, 3), (2, 7), (2, 8),
    (2, 9), (2, 13), (2, 27), (2, 28), (2, 32), (3, 7), (3, 12), (3, 13), (4, 6),
    (4, 10), (5, 6), (5, 10), (5, 16), (6, 16), (8, 30), (8, 32), (8, 33), (9, 33),
    (13, 33), (14, 32), (14, 33), (15, 32), (15, 33), (18, 32), (18, 33), (19, 33), (20, 32),
    (20, 33), (22, 32), (22, 33), (23, 25), (23, 27), (23, 29), (23, 32), (23, 33), (24, 25),
    (24, 27), (24, 31), (25, 31), (26, 29), (26, 33), (27, 33), (28, 31), (28, 33), (29, 32),
    (29, 33), (30, 32), (30, 33), (31, 32), (31, 33), (32, 33),
)
_KARATE_LABELS = (1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 1, 1, 1, 1, 2, 2, 1, 1,
                  2, 1, 2, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2)


def karate_graph() -> Graph:
    """The embedded karate-club graph (34 nodes, 78 edges, 2 factions)."""
    return Graph(
        n=34,
        edges=np.array(_KARATE_EDGES, dtype=np.int64),
        node_names=tuple(str(i + 1) for i in range(34)),
        labels=np.array(_KARATE_LABELS, dtype=np.int64),
        label_names=("Mr. Hi", "Officer"),
    )


# ----------------------------------------------------------------------
# registry
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DatasetSpec:
    """Registered dataset: expected post-preprocessing shape and sources.

    Attributes:
        name: registry key.
        k: ground-truth community count.
        n: node count after preprocessing.
        m: edge count after preprocessing.
        files: file names expected inside the data directory.
        url: primary download URL ('' when no stable automated source
            exists; the fetch script prints instructions instead).
        sha256: pinned archive checksum, or None when unpinned (the fetch
            script then prints the computed hash for the user to record).
        notes: one-line provenance/preprocessing summary.
    """

    name: str
    k: int
    n: int
    m: int
    files: tuple
    url: str = ""
    sha256: str | None = None
    notes: str = ""


_NETDATA = "https://websites.umich.edu/~mejn/netdata"
_FB100 = "https://archive.org/download/oxford-2005-facebook-matrix/facebook100.zip"

REGISTRY = {
    "karate": DatasetSpec(
        name="karate", k=2, n=34, m=78, files=(),
        notes="embedded; two factions of a split karate club",
    ),
    "dolphins": DatasetSpec(
        name="dolphins", k=2, n=62, m=159,
        files=("dolphins.gml", "dolphins.labels"),
        url=f"{_NETDATA}/dolphins.zip",
        notes="bottlenose dolphin social network; the two-group split is "
              "not in the GML and must be supplied as dolphins.labels",
    ),
    "football": DatasetSpec(
        name="football", k=11, n=110, m=570,
        files=("football.gml",),
        url=f"{_NETDATA}/football.zip",
        notes="college football games; the five independent (conference-"
              "less) teams are removed, leaving 11 conferences",
    ),
    "polbooks": DatasetSpec(
        name="polbooks", k=2, n=92, m=374,
        files=("polbooks.gml",),
        url=f"{_NETDATA}/polbooks.zip",
        notes="political-book co-purchases; 'neutral' books are removed",
    ),
    "ukfaculty": DatasetSpec(
        name="ukfaculty", k=3, n=79, m=552,
        files=("ukfaculty.edges", "ukfaculty.labels"),
        url="",
        notes="UK university faculty friendships; export from the R "
              "'igraphdata' package (UKfaculty); the smallest school "
              "group (2 nodes) is removed",
    ),
    "weblogs": DatasetSpec(
        name="weblogs", k=2, n=1222, m=16714,
        files=("polblogs.gml",),
        url=f"{_NETDATA}/polblogs.zip",
        notes="political weblogs; directed multi-links collapsed to "
              "simple undirected edges, largest connected component",
    ),
    "simmons": DatasetSpec(
        name="simmons", k=4, n=1137, m=24257,
        files=("Simmons81.mat",),
        url=_FB100,
        notes="Facebook friendships at Simmons College; ground truth is "
              "graduation year 2006-2009, others removed, largest "
              "connected component",
    ),
    "caltech": DatasetSpec(
        name="caltech", k=8, n=590, m=12822,
        files=("Caltech36.mat",),
        url=_FB100,
        notes="Facebook friendships at Caltech; ground truth is the dorm "
              "(house), nodes with unknown dorm removed, largest "
              "connected component",
    ),
}

DATASET_ORDER = ("weblogs", "simmons", "caltech", "football",
                 "karate", "dolphins", "polbooks", "ukfaculty")


def data_dir(override=None) -> Path:
    """Resolve the dataset directory: explicit arg, else $SCOREKIT_DATA,
    else ``./data``."""
    if override is not None:
        return Path(override)
    env = os.environ.get(DATA_DIR_ENV)
    return Path(env) if env else Path("data")


def dataset_names() -> tuple:
    return tuple(REGISTRY)


def is_available(name: str, directory=None) -> bool:
    """Whether every file the dataset needs is present (embedded -> True)."""
    spec = _spec(name)
    base = data_dir(directory)
    return all((base / f).exists() for f in spec.files)


def _spec(name: str) -> DatasetSpec:
    if name not in REGISTRY:
        raise DatasetError(
            f"unknown dataset {name!r}; known: {', '.join(sorted(REGISTRY))}"
        )
    return REGISTRY[name]


def _need(base: Path, spec: DatasetSpec):
    missing = [f for f in spec.files if not (base / f).exists()]
    if missing:
        raise DatasetError(
            f"dataset {spec.name!r} is missing {', '.join(missing)} in "
            f"{base} (run scripts/fetch_datasets.py, or point "
            f"{DATA_DIR_ENV} at your data directory)"
        )


# ----------------------------------------------------------------------
# loaders
# ----------------------------------------------------------------------

def _load_dolphins(base: Path) -> Graph:
    return load_graph(base / "dolphins.gml", base / "dolphins.labels")


def _load_football(base: Path) -> Graph:
    g = load_graph(base / "football.gml")
    if g.labels is None:
        raise DatasetError("football.gml carries no 'value' attributes")
    sizes = np.bincount(g.labels)[1:]
    independents = np.flatnonzero(sizes == 5) + 1
    if independents.size != 1:
        raise DatasetError(
            f"expected exactly one size-5 conference (the independents), "
            f"found {independents.size}"
        )
    return filter_by_label(g, [int(independents[0])])


def _load_polbooks(base: Path) -> Graph:
    g = load_graph(base / "polbooks.gml")
    if g.label_names is None or "n" not in g.label_names:
        raise DatasetError("polbooks.gml lacks the 'n' (neutral) label")
    return filter_by_label(g, ["n"])


def _load_ukfaculty(base: Path) -> Graph:
    g = load_graph(base / "ukfaculty.edges", base / "ukfaculty.labels")
    if g.labels is None:
        raise DatasetError("ukfaculty.labels produced no labels")
    sizes = np.bincount(g.labels)[1:]
    smallest = int(np.argmin(sizes)) + 1
    if sizes[smallest - 1] != 2:
        raise DatasetError(
            f"expected the smallest group to have 2 nodes, found "
            f"{int(sizes[smallest - 1])}"
        )
    return largest_connected_component(filter_by_label(g, [smallest]))


def _load_weblogs(base: Path) -> Graph:
    g = load_graph(base / "polblogs.gml")
    if g.labels is None:
        raise DatasetError("polblogs.gml carries no 'value' attributes")
    return largest_connected_component(g)


def _facebook100(base: Path, filename: str, attribute: str,
                 keep_values=None) -> Graph:
    from scipy.io import loadmat
    import scipy.sparse as sp

    # local_info columns, per the collection's README
    columns = {"student_faculty": 0, "gender": 1, "major": 2,
               "second_major": 3, "dorm": 4, "year": 5, "high_school": 6}
    mat = loadmat(str(base / filename))
    if "A" not in mat or "local_info" not in mat:
        raise DatasetError(f"{filename} lacks the expected A/local_info entries")
    a = sp.csr_array(mat["A"])
    attr = np.asarray(mat["local_info"][:, columns[attribute]]).ravel()
    if keep_values is None:
        keep_mask = attr > 0  # 0 encodes missing
    else:
        keep_mask = np.isin(attr, list(keep_values))
    keep = np.flatnonzero(keep_mask)
    if keep.size == 0:
        raise DatasetError(f"{filename}: no node has a usable {attribute}")

    sub = sp.csr_array(a[np.ix_(keep, keep)])
    coo = sp.coo_array(sub)
    upper = coo.row < coo.col
    edges = np.column_stack([coo.row[upper], coo.col[upper]])

    raw = attr[keep]
    codes = {}
    labels = np.empty(keep.size, dtype=np.int64)
    for i, value in enumerate(raw):
        value = int(value)
        if value not in codes:
            codes[value] = len(codes) + 1
        labels[i] = codes[value]
    g = Graph(
        n=keep.size,
        edges=edges.astype(np.int64),
        node_names=tuple(str(i + 1) for i in keep),
        labels=labels,
        label_names=tuple(str(v) for v in sorted(codes, key=codes.get)),
    )
    return largest_connected_component(g)


def _load_simmons(base: Path) -> Graph:
    return _facebook100(base, "Simmons81.mat", "year",
                        keep_values=(2006, 2007, 2008, 2009))


def _load_caltech(base: Path) -> Graph:
    return _facebook100(base, "Caltech36.mat", "dorm")


_LOADERS = {
    "karate": lambda base: karate_graph(),
    "dolphins": _load_dolphins,
    "football": _load_football,
    "polbooks": _load_polbooks,
    "ukfaculty": _load_ukfaculty,
    "weblogs": _load_weblogs,
    "simmons": _load_simmons,
    "caltech": _load_caltech,
}


def load_dataset(name: str, directory=None, strict: bool = True) -> Graph:
    """Load and preprocess a registered dataset.

    Args:
        name: registry key (see ``dataset_names()``).
        directory: data directory (default: $SCOREKIT_DATA or ./data).
        strict: verify the preprocessed (n, m, K) against the registry
            and raise on mismatch — benchmarks compare against published
            numbers, which are meaningless on different data.

    Raises:
        DatasetError: unknown name, missing files, or shape mismatch.
    """
    spec = _spec(name)
    base = data_dir(directory)
    _need(base, spec)
    try:
        g = _LOADERS[name](base)
    except (GraphFormatError, ValueError) as exc:
        raise DatasetError(f"dataset {name!r} failed to load: {exc}") from exc
    if strict:
        got = (g.n, g.num_edges, g.num_communities)
        want = (spec.n, spec.m, spec.k)
        if got != want:
            raise DatasetError(
                f"dataset {name!r} mismatch: expected (n, m, K) = {want}, "
                f"loaded {got} — wrong file version or preprocessing"
            )
    return g
