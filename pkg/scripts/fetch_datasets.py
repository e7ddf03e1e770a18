#!/usr/bin/env python3
"""Fetch the third-party benchmark datasets into a local data directory.

Downloads the public archives, verifies checksums where pinned, extracts
the files the loaders expect, and prints clear instructions for the two
inputs that have no stable automated source (the dolphin community split
and the UK faculty export). Safe to re-run; existing files are kept
unless --force is given.

Usage:
    python3 scripts/fetch_datasets.py [--data-dir DIR] [--only NAME ...]
                                      [--force] [--skip-facebook]

The data directory defaults to $SCOREKIT_DATA, else ./data.
"""

import argparse
import hashlib
import io
import shutil
import sys
import urllib.request
import zipfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from scorekit.datasets import DATA_DIR_ENV, REGISTRY, data_dir  # noqa: E402

# archive -> files to pull out of it (archive member name -> local name)
ZIP_SOURCES = {
    "dolphins.zip": {"dolphins.gml": "dolphins.gml"},
    "football.zip": {"football.gml": "football.gml"},
    "polbooks.zip": {"polbooks.gml": "polbooks.gml"},
    "polblogs.zip": {"polblogs.gml": "polblogs.gml"},
}

NETDATA = "https://websites.umich.edu/~mejn/netdata"
FACEBOOK100_URL = ("https://archive.org/download/oxford-2005-facebook-matrix/"
                   "facebook100.zip")
FACEBOOK100_MEMBERS = {"Simmons81.mat": "Simmons81.mat",
                       "Caltech36.mat": "Caltech36.mat"}

# sha256 pins; None means "print the computed hash so it can be recorded"
CHECKSUMS = {
    "dolphins.zip": None,
    "football.zip": None,
    "polbooks.zip": None,
    "polblogs.zip": None,
    "facebook100.zip": None,
}

MANUAL_NOTES = {
    "dolphins.labels": (
        "dolphins.labels — the two-community split of the 62 dolphins is\n"
        "    published in the network's original study (supplementary\n"
        "    material), not in dolphins.gml. Create a UTF-8 file with one\n"
        "    'dolphin_name<TAB>group' line per dolphin, using the names\n"
        "    from dolphins.gml and any two group identifiers."
    ),
    "ukfaculty.edges": (
        "ukfaculty.edges / ukfaculty.labels — export the UKfaculty network\n"
        "    from the R 'igraphdata' package:\n"
        "        library(igraph); library(igraphdata); data(UKfaculty)\n"
        "        g <- as.undirected(UKfaculty, mode='collapse')\n"
        "        write.table(as_edgelist(g), 'ukfaculty.edges',\n"
        "                    row.names=FALSE, col.names=FALSE, quote=FALSE)\n"
        "        write.table(cbind(V(g), V(g)$Group), 'ukfaculty.labels',\n"
        "                    row.names=FALSE, col.names=FALSE, quote=FALSE,\n"
        "                    sep='\\t')\n"
        "    (79 nodes remain after the loader drops the 2-node group.)"
    ),
}


def sha256_of(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def download(url: str, label: str) -> bytes:
    print(f"  downloading {label} from {url}")
    with urllib.request.urlopen(url, timeout=120) as resp:
        return resp.read()


def verify(name: str, payload: bytes) -> None:
    digest = sha256_of(payload)
    pinned = CHECKSUMS.get(name)
    if pinned is None:
        print(f"  NOTE: no pinned checksum for {name}; computed sha256:")
        print(f"        {digest}")
        print(f"        record it in scripts/fetch_datasets.py CHECKSUMS to pin.")
    elif digest != pinned:
        raise SystemExit(
            f"checksum mismatch for {name}:\n  expected {pinned}\n  got      {digest}"
        )
    else:
        print(f"  checksum ok ({digest[:12]}…)")


def extract(payload: bytes, members: dict, dest: Path, force: bool) -> None:
    with zipfile.ZipFile(io.BytesIO(payload)) as zf:
        names = {Path(n).name: n for n in zf.namelist()}
        for member, local in members.items():
            target = dest / local
            if target.exists() and not force:
                print(f"  {local} already present, keeping")
                continue
            if member not in names:
                raise SystemExit(f"archive lacks expected member {member}")
            with zf.open(names[member]) as fh:
                target.write_bytes(fh.read())
            print(f"  wrote {target}")


def wanted_files(only):
    files = set()
    for name, spec in REGISTRY.items():
        if only and name not in only:
            continue
        files.update(spec.files)
    return files


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data-dir", default=None,
                    help=f"target directory (default: ${DATA_DIR_ENV} or ./data)")
    ap.add_argument("--only", nargs="*", default=None, metavar="NAME",
                    help="fetch only these datasets")
    ap.add_argument("--force", action="store_true",
                    help="re-download and overwrite existing files")
    ap.add_argument("--skip-facebook", action="store_true",
                    help="skip the large facebook100 archive (simmons/caltech)")
    args = ap.parse_args(argv)

    dest = data_dir(args.data_dir)
    dest.mkdir(parents=True, exist_ok=True)
    print(f"data directory: {dest.resolve()}")
    needed = wanted_files(args.only)

    for archive, members in ZIP_SOURCES.items():
        if not any(local in needed for local in members.values()):
            continue
        if all((dest / local).exists() for local in members.values()) and not args.force:
            print(f"{archive}: all files present, skipping")
            continue
        payload = download(f"{NETDATA}/{archive}", archive)
        verify(archive, payload)
        extract(payload, members, dest, args.force)

    fb_needed = [f for f in FACEBOOK100_MEMBERS.values() if f in needed]
    if fb_needed and not args.skip_facebook:
        if all((dest / f).exists() for f in fb_needed) and not args.force:
            print("facebook100: all files present, skipping")
        else:
            print("facebook100 archive is large (~1 GB); this may take a while")
            payload = download(FACEBOOK100_URL, "facebook100.zip")
            verify("facebook100.zip", payload)
            extract(payload, FACEBOOK100_MEMBERS, dest, args.force)

    missing_manual = [f for f in needed
                      if f in MANUAL_NOTES and not (dest / f).exists()]
    # group the ukfaculty pair under one note
    shown = set()
    if missing_manual:
        print("\nfiles that need manual preparation:")
        for f in missing_manual:
            key = MANUAL_NOTES[f].splitlines()[0]
            if key in shown:
                continue
            shown.add(key)
            print("  * " + MANUAL_NOTES[f] + "\n")

    present = sorted(f.name for f in dest.iterdir() if f.is_file())
    print("data directory now contains:", ", ".join(present) if present else "(nothing)")
    still = [f for f in needed if not (dest / f).exists()]
    if still:
        print("still missing:", ", ".join(sorted(still)))
        return 1
    print("all requested dataset files are present")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
