"""Undirected graph ingestion, validation, and preprocessing.

Graphs are simple (no self-loops, no duplicate edges) and undirected.
Node identity is positional: all downstream arrays index nodes by their
first-appearance order in the source file, with optional external names
and optional ground-truth community labels carried alongside.

Supported inputs:

* edge lists — whitespace- or comma-delimited node pairs, UTF-8,
  ``#`` comment lines;
* node labels — ``node_id<TAB>label`` lines;
* a minimal GML subset — ``graph``/``node``/``edge`` blocks with
  ``id``, ``label``, ``value``, ``source``, ``target`` keys (everything
  else is ignored, including directedness: edges are read as unordered).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Raised when a graph or label file cannot be parsed."""


@dataclass(frozen=True, eq=False)
class Graph:
    """An undirected simple graph with optional names and ground-truth labels.

    Attributes:
        n: number of nodes.
        edges: (m, 2) int array; each row (i, j) with i < j, rows unique and
            sorted lexicographically.
        node_names: external identifier per node (None for anonymous graphs).
        labels: ground-truth community per node, values in {1..K}, or None.
        label_names: original label strings in code order (label_names[c-1]
            is the raw value that was assigned code c), or None.
    """

    n: int
    edges: np.ndarray
    node_names: tuple | None = None
    labels: np.ndarray | None = None
    label_names: tuple | None = None

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.n:
                raise ValueError("edge endpoint out of range")
            if (edges[:, 0] >= edges[:, 1]).any():
                raise ValueError("edges must satisfy i < j per row")
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            edges = edges[order]
            same = (np.diff(edges[:, 0]) == 0) & (np.diff(edges[:, 1]) == 0)
            if same.any():
                raise ValueError("duplicate edges")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        if self.node_names is not None:
            names = tuple(self.node_names)
            if len(names) != self.n:
                raise ValueError("node_names length mismatch")
            object.__setattr__(self, "node_names", names)
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (self.n,):
                raise ValueError("labels length mismatch")
            if self.n and (labels.min() < 1):
                raise ValueError("labels must be in {1..K}")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)
            if self.label_names is not None:
                object.__setattr__(self, "label_names", tuple(self.label_names))

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def num_communities(self) -> int:
        """Number of distinct ground-truth labels (0 when unlabeled)."""
        if self.labels is None or self.n == 0:
            return 0
        return int(self.labels.max())

    def adjacency(self) -> sp.csr_array:
        """Return the symmetric 0/1 adjacency matrix as sparse CSR."""
        if self.num_edges == 0:
            return sp.csr_array((self.n, self.n), dtype=np.float64)
        i, j = self.edges[:, 0], self.edges[:, 1]
        rows = np.concatenate([i, j])
        cols = np.concatenate([j, i])
        data = np.ones(rows.shape[0], dtype=np.float64)
        return sp.csr_array((data, (rows, cols)), shape=(self.n, self.n))

    def name_of(self, index: int) -> str:
        if self.node_names is not None:
            return str(self.node_names[index])
        return str(index + 1)


@dataclass(frozen=True, eq=False)
class DegreeInfo:
    """Degree statistics: per-node degrees and min/max/mean."""

    degrees: np.ndarray
    d_min: int
    d_max: int
    d_bar: float


# ----------------------------------------------------------------------
# parsing
# ----------------------------------------------------------------------

def _parse_label_lines(label_text):
    """Parse ``node_id<TAB>label`` lines -> dict name -> raw label string."""
    raw = {}
    for lineno, line in enumerate(label_text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" in line:
            name, _, value = line.partition("\t")
        else:
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError(
                    f"label line {lineno}: expected 'node<TAB>label', got {line!r}"
                )
            name, value = parts
        name, value = name.strip(), value.strip()
        if not name or not value:
            raise GraphFormatError(f"label line {lineno}: empty field")
        if name in raw:
            raise GraphFormatError(f"label line {lineno}: duplicate node {name!r}")
        raw[name] = value
    return raw


def _encode_labels(node_names, raw_labels):
    """Map raw label strings to codes 1..K by first appearance in node order."""
    codes = {}
    labels = np.empty(len(node_names), dtype=np.int64)
    for i, name in enumerate(node_names):
        value = raw_labels[name]
        if value not in codes:
            codes[value] = len(codes) + 1
        labels[i] = codes[value]
    label_names = tuple(sorted(codes, key=codes.get))
    return labels, label_names


def _assemble(pair_names, name_order, raw_labels=None):
    """Build a Graph from string edge pairs, dropping loops and duplicates."""
    index = {name: k for k, name in enumerate(name_order)}
    seen = set()
    edges = []
    self_loops = 0
    duplicates = 0
    for a, b in pair_names:
        i, j = index[a], index[b]
        if i == j:
            self_loops += 1
            continue
        key = (i, j) if i < j else (j, i)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        edges.append(key)
    if self_loops:
        logger.warning("dropped %d self-loop(s)", self_loops)
    if duplicates:
        logger.warning("dropped %d duplicate edge(s)", duplicates)
    edge_arr = np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)

    labels = label_names = None
    if raw_labels is not None:
        missing = [name for name in name_order if name not in raw_labels]
        if missing:
            raise GraphFormatError(
                f"{len(missing)} node(s) without a label (first: {missing[0]!r})"
            )
        labels, label_names = _encode_labels(name_order, raw_labels)
    return Graph(
        n=len(name_order),
        edges=edge_arr,
        node_names=tuple(name_order),
        labels=labels,
        label_names=label_names,
    )


def parse_edge_list(text: str, label_text: str | None = None) -> Graph:
    """Parse a delimited edge list, optionally with a node-label file.

    Args:
        text: edge lines, two node identifiers per line (whitespace- or
            comma-delimited); ``#`` lines and blank lines are skipped.
        label_text: optional ``node_id<TAB>label`` lines. When given, every
            node must be covered; nodes that appear only in the label file
            are included as isolated nodes (this makes the edge-list +
            label-file pair a lossless export format).

    Returns:
        Graph with first-appearance node order, self-loops and duplicate
        edges dropped (counted in a logged warning).

    Raises:
        GraphFormatError: malformed line (with line number), or a label
            referencing no known node is fine but a node without a label
            is an error.
    """
    pairs = []
    order = []
    index = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")] if "," in line else line.split()
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise GraphFormatError(
                f"edge line {lineno}: expected two node identifiers, got {line!r}"
            )
        for name in parts:
            if name not in index:
                index.add(name)
                order.append(name)
        pairs.append((parts[0], parts[1]))

    raw_labels = None
    if label_text is not None:
        raw_labels = _parse_label_lines(label_text)
        for name in raw_labels:
            if name not in index:
                index.add(name)
                order.append(name)
    return _assemble(pairs, order, raw_labels)


def _tokenize_gml(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise GraphFormatError("unterminated string in GML input")
            tokens.append(("str", text[i + 1 : j]))
            i = j + 1
        elif c in "[]":
            tokens.append((c, c))
            i += 1
        elif c == "#":
            j = text.find("\n", i)
            i = n if j < 0 else j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '[]"':
                j += 1
            tokens.append(("atom", text[i:j]))
            i = j
    return tokens


def _parse_gml_block(tokens, pos):
    """Parse key/value pairs until ']' or end; returns (items, next_pos)."""
    items = []
    while pos < len(tokens):
        kind, value = tokens[pos]
        if kind == "]":
            return items, pos + 1
        if kind != "atom":
            raise GraphFormatError(f"unexpected GML token {value!r}")
        key = value
        pos += 1
        if pos >= len(tokens):
            raise GraphFormatError(f"GML key {key!r} without a value")
        kind, value = tokens[pos]
        if kind == "[":
            sub, pos = _parse_gml_block(tokens, pos + 1)
            items.append((key, sub))
        elif kind in ("atom", "str"):
            items.append((key, value))
            pos += 1
        else:
            raise GraphFormatError(f"unexpected GML token {value!r} after {key!r}")
    return items, pos


def parse_gml(text: str) -> Graph:
    """Parse the minimal GML subset used by public network datasets.

    Reads the first ``graph [...]`` block. Node ``label`` attributes become
    node names; node ``value`` attributes (when present on every node)
    become ground-truth labels. Directedness is ignored — edges are read
    as unordered pairs, with duplicates and self-loops dropped.

    Raises:
        GraphFormatError: unbalanced brackets, missing node ids, or edges
            referencing unknown ids.
    """
    tokens = _tokenize_gml(text)
    items, pos = _parse_gml_block(tokens, 0)
    if pos != len(tokens):
        raise GraphFormatError("unbalanced brackets in GML input")
    graph_block = next((v for k, v in items if k == "graph" and isinstance(v, list)), None)
    if graph_block is None:
        raise GraphFormatError("no graph [...] block found")

    ids = []
    names = {}
    values = {}
    edge_pairs = []
    for key, val in graph_block:
        if key == "node" and isinstance(val, list):
            attrs = dict((k, v) for k, v in val if not isinstance(v, list))
            if "id" not in attrs:
                raise GraphFormatError("GML node without id")
            nid = attrs["id"]
            if nid in names:
                raise GraphFormatError(f"duplicate GML node id {nid!r}")
            ids.append(nid)
            names[nid] = attrs.get("label", str(nid))
            if "value" in attrs:
                values[nid] = attrs["value"]
        elif key == "edge" and isinstance(val, list):
            attrs = dict((k, v) for k, v in val if not isinstance(v, list))
            if "source" not in attrs or "target" not in attrs:
                raise GraphFormatError("GML edge without source/target")
            edge_pairs.append((attrs["source"], attrs["target"]))

    unknown = {s for s, t in edge_pairs for s in (s, t)} - set(ids)
    if unknown:
        raise GraphFormatError(f"GML edge references unknown node id(s): {sorted(unknown)[:3]}")

    raw_labels = None
    if values:
        if len(values) == len(ids):
            raw_labels = {names[i]: str(values[i]) for i in ids}
        else:
            logger.warning(
                "GML 'value' attribute present on %d of %d nodes; ignoring labels",
                len(values), len(ids),
            )
    name_order = [names[i] for i in ids]
    if len(set(name_order)) != len(name_order):
        # fall back to ids as names when labels collide
        name_order = [str(i) for i in ids]
        names = {i: str(i) for i in ids}
        if raw_labels is not None:
            raw_labels = {names[i]: str(values[i]) for i in ids}
    pair_names = [(names[s], names[t]) for s, t in edge_pairs]
    return _assemble(pair_names, name_order, raw_labels)


# ----------------------------------------------------------------------
# preprocessing
# ----------------------------------------------------------------------

def _induce(g: Graph, keep: np.ndarray) -> Graph:
    """Induced subgraph on the (sorted) node indices in ``keep``.

    Surviving ground-truth labels are renumbered to 1..K' by order of
    first appearance in the new node order.
    """
    keep = np.asarray(keep, dtype=np.int64)
    new_index = -np.ones(g.n, dtype=np.int64)
    new_index[keep] = np.arange(keep.size)
    mask = (new_index[g.edges[:, 0]] >= 0) & (new_index[g.edges[:, 1]] >= 0)
    sub = new_index[g.edges[mask]]
    sub.sort(axis=1)

    labels = label_names = None
    if g.labels is not None:
        old = g.labels[keep]
        remap = {}
        labels = np.empty(old.shape, dtype=np.int64)
        for i, c in enumerate(old):
            c = int(c)
            if c not in remap:
                remap[c] = len(remap) + 1
            labels[i] = remap[c]
        if g.label_names is not None:
            label_names = tuple(
                g.label_names[c - 1] for c in sorted(remap, key=remap.get)
            )
    names = None
    if g.node_names is not None:
        names = tuple(g.node_names[i] for i in keep)
    return Graph(n=keep.size, edges=sub, node_names=names,
                 labels=labels, label_names=label_names)


def filter_by_label(g: Graph, excluded) -> Graph:
    """Drop all nodes whose ground-truth label is in ``excluded``.

    Args:
        g: labeled graph.
        excluded: iterable of label identifiers — original label strings
            (matched against ``label_names``) and/or integer codes.

    Returns:
        Induced subgraph with node indices compacted and labels renumbered
        to 1..K by order of first appearance.

    Raises:
        ValueError: g unlabeled, unknown label identifier, or the filter
            would exclude every node.
    """
    if g.labels is None:
        raise ValueError("graph has no ground-truth labels to filter on")
    codes = set()
    for item in excluded:
        if isinstance(item, (int, np.integer)):
            code = int(item)
            if not 1 <= code <= g.num_communities:
                raise ValueError(f"label code {code} out of range")
        else:
            if g.label_names is None or str(item) not in g.label_names:
                raise ValueError(f"unknown label {item!r}")
            code = g.label_names.index(str(item)) + 1
        codes.add(code)
    keep = np.flatnonzero(~np.isin(g.labels, sorted(codes)))
    if keep.size == 0:
        raise ValueError("filter excludes every node")
    return _induce(g, keep)


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component.

    Ties between equal-size components are broken by lowest contained
    node index. Idempotent: applying it to a connected graph returns an
    identical graph.

    Raises:
        ValueError: empty graph.
    """
    if g.n == 0:
        raise ValueError("empty graph has no components")
    n_comp, comp = sp.csgraph.connected_components(g.adjacency(), directed=False)
    if n_comp == 1:
        return g
    sizes = np.bincount(comp, minlength=n_comp)
    best = sizes.max()
    # comp ids are assigned in discovery order from node 0, so among the
    # max-size components the smallest id contains the lowest node index
    winner = int(np.flatnonzero(sizes == best)[0])
    return _induce(g, np.flatnonzero(comp == winner))


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    n_comp, _ = sp.csgraph.connected_components(g.adjacency(), directed=False)
    return n_comp == 1


def degree_info(g: Graph) -> DegreeInfo:
    """Exact integer degrees with min/max/mean summary."""
    degrees = np.bincount(g.edges.ravel(), minlength=g.n).astype(np.int64)
    if g.n == 0:
        return DegreeInfo(degrees=degrees, d_min=0, d_max=0, d_bar=0.0)
    return DegreeInfo(
        degrees=degrees,
        d_min=int(degrees.min()),
        d_max=int(degrees.max()),
        d_bar=float(degrees.mean()),
    )


# ----------------------------------------------------------------------
# output
# ----------------------------------------------------------------------

def format_edge_list(g: Graph) -> str:
    """Render g in the edge-list format (one ``name name`` line per edge)."""
    lines = [f"{g.name_of(i)} {g.name_of(j)}" for i, j in g.edges]
    return "\n".join(lines) + ("\n" if lines else "")


def format_labels(g: Graph) -> str:
    """Render ground-truth labels as ``node_id<TAB>label`` lines."""
    if g.labels is None:
        raise ValueError("graph has no labels to write")
    out = []
    for i in range(g.n):
        code = int(g.labels[i])
        value = g.label_names[code - 1] if g.label_names is not None else str(code)
        out.append(f"{g.name_of(i)}\t{value}")
    return "\n".join(out) + ("\n" if out else "")


def load_graph(path, labels_path=None) -> Graph:
    """Load a graph file, dispatching on extension (.gml vs edge list)."""
    from pathlib import Path

    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".gml":
        g = parse_gml(text)
        if labels_path is not None:
            raw = _parse_label_lines(Path(labels_path).read_text(encoding="utf-8"))
            missing = [nm for nm in g.node_names if nm not in raw]
            if missing:
                raise GraphFormatError(
                    f"{len(missing)} node(s) without a label (first: {missing[0]!r})"
                )
            labels, label_names = _encode_labels(g.node_names, raw)
            g = Graph(n=g.n, edges=g.edges, node_names=g.node_names,
                      labels=labels, label_names=label_names)
        return g
    label_text = None
    if labels_path is not None:
        label_text = Path(labels_path).read_text(encoding="utf-8")
    return parse_edge_list(text, label_text)
