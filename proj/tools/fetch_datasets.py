#!/usr/bin/env python3
"""Populate the dataset directory named in data/manifest.json.

Les Miserables is exported from the copy bundled with networkx. The other
benchmark graphs are downloaded from their published locations when the
network allows it. Every file is checked against the manifest's pinned
checksum; files without a pinned checksum are reported with their digest so
they can be reviewed and pinned by hand.
"""

import argparse
import hashlib
import io
import json
import os
import sys
import urllib.request
import zipfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DEFAULT_MANIFEST = ROOT / "data" / "manifest.json"


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def export_lesmis(dest):
    import networkx as nx

    g = nx.les_miserables_graph()
    with open(dest, "w", encoding="ascii", newline="\n") as f:
        f.write("# Les Miserables character co-appearances (networkx copy of Knuth's data)\n")
        for u, v, w in g.edges(data="weight"):
            f.write(f"{u} {v} {w}\n")


def download_zip_member(url, member, dest, timeout):
    with urllib.request.urlopen(url, timeout=timeout) as r:
        blob = r.read()
    with zipfile.ZipFile(io.BytesIO(blob)) as z:
        dest.write_bytes(z.read(member))


SOURCES = {
    "lesmis": lambda entry, dest, timeout: export_lesmis(dest),
    "dolphins": lambda entry, dest, timeout: download_zip_member(entry["url"], "dolphins.gml", dest, timeout),
    "football": lambda entry, dest, timeout: download_zip_member(entry["url"], "football.gml", dest, timeout),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--manifest", type=Path, default=DEFAULT_MANIFEST)
    ap.add_argument("--data-dir", type=Path, default=None,
                    help="target directory (default: $SHIFTCD_DATA_DIR, else the manifest's directory)")
    ap.add_argument("--timeout", type=float, default=60.0)
    ap.add_argument("--force", action="store_true", help="refetch files that already verify")
    ap.add_argument("names", nargs="*", help="datasets to fetch (default: all desk-scale entries)")
    args = ap.parse_args()

    data_dir = args.data_dir or Path(os.environ.get("SHIFTCD_DATA_DIR") or args.manifest.parent)
    data_dir.mkdir(parents=True, exist_ok=True)
    entries = json.loads(args.manifest.read_text())["datasets"]

    failures = 0
    for entry in entries:
        name = entry["name"]
        if args.names and name not in args.names:
            continue
        if not args.names and entry.get("scale", "desk") != "desk":
            continue
        dest = data_dir / entry["edges"]
        pinned = entry.get("sha256")
        if dest.exists() and pinned and sha256(dest) == pinned and not args.force:
            print(f"{name}: ok")
            continue
        fetch = SOURCES.get(name)
        if fetch is None:
            print(f"{name}: no fetcher; place {entry['edges']} in {data_dir} by hand", file=sys.stderr)
            failures += 1
            continue
        try:
            fetch(entry, dest, args.timeout)
        except Exception as e:  # network errors, missing archive members
            print(f"{name}: fetch failed: {e}", file=sys.stderr)
            failures += 1
            continue
        got = sha256(dest)
        if not pinned:
            print(f"{name}: fetched, sha256 {got} (not pinned in the manifest)")
        elif got != pinned:
            print(f"{name}: checksum mismatch, expected {pinned}, got {got}", file=sys.stderr)
            failures += 1
        else:
            print(f"{name}: fetched and verified")
        if entry.get("ground_truth") and not (data_dir / entry["ground_truth"]).exists():
            print(f"{name}: ground truth {entry['ground_truth']} missing", file=sys.stderr)
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
