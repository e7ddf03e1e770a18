"""Run manifests: plain key-value records that make runs reproducible.

A manifest captures everything needed to re-run a command and check its
result: the command line, the effective configuration, a checksum of the
input data, the seed, a result summary, and the wall-clock duration.

Format: UTF-8 text, one ``key = value`` pair per line, keys dotted for
grouping (``config.delta = 0.1``), ``#`` comment lines allowed. Values
are written with ``repr``-free plain formatting; readers get strings
and convert as needed.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np


def sha256_file(path) -> str:
    """Hex sha256 of a file's bytes."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def sha256_graph(g) -> str:
    """Checksum of a graph's canonical form (n, sorted edges, labels).

    Stable across load paths: two graphs with identical structure and
    labels hash identically regardless of source file formatting.
    """
    h = hashlib.sha256()
    h.update(f"n={g.n}".encode())
    h.update(np.ascontiguousarray(g.edges, dtype=np.int64).tobytes())
    if g.labels is not None:
        h.update(b"labels")
        h.update(np.ascontiguousarray(g.labels, dtype=np.int64).tobytes())
    return h.hexdigest()


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)  # full precision, round-trips
    if isinstance(value, (list, tuple)):
        return " ".join(_format_value(v) for v in value)
    return str(value)


def flatten(mapping, prefix="") -> dict:
    """Flatten nested dicts into dotted keys."""
    flat = {}
    for key, value in mapping.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, prefix=f"{dotted}."))
        else:
            flat[dotted] = value
    return flat


def write_manifest(path, mapping) -> None:
    """Write a (possibly nested) mapping as sorted ``key = value`` lines."""
    flat = flatten(mapping)
    lines = [f"{key} = {_format_value(flat[key])}" for key in sorted(flat)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(path) -> dict:
    """Read a manifest back as a flat {dotted key: string value} dict."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"manifest line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def config_dict(config) -> dict:
    """A PipelineConfig as a plain dict for manifest embedding."""
    return {
        "k": config.k,
        "pre_pca": config.pre_pca,
        "post_pca": config.post_pca,
        "extra_vector": config.extra_vector,
        "weighted": config.weighted,
        "delta": config.delta,
        "threshold": config.threshold,
        "log_threshold": config.log_threshold,
        "seed": config.seed,
        "restarts": config.restarts,
    }
