#!/usr/bin/env python3
"""Download the UCI wine quality CSVs used by the wine presets.

The wine experiments need the red and white `winequality-*.csv` files from
the UCI Machine Learning Repository.  They are small (~100 KB and ~260 KB),
semicolon-delimited, and this package reads them exactly as published — no
conversion step.

Usage:
    python scripts/fetch_wine.py [--dest DIR]

By default the files land in ./data/, which is where the wine presets look
when FAIRBAND_WINE_RED / FAIRBAND_WINE_WHITE are not set.  If this machine
has no network access, fetch the two URLs below elsewhere and copy the
files into place; any mirror of the UCI archive works as long as the CSV
headers are unchanged.
"""

from __future__ import annotations

import argparse
import sys
import urllib.error
import urllib.request
from pathlib import Path

BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases/wine-quality"
FILES = {
    "winequality-red.csv": f"{BASE}/winequality-red.csv",
    "winequality-white.csv": f"{BASE}/winequality-white.csv",
}
EXPECTED_HEADER = (
    '"fixed acidity";"volatile acidity";"citric acid";"residual sugar";'
    '"chlorides";"free sulfur dioxide";"total sulfur dioxide";"density";'
    '"pH";"sulphates";"alcohol";"quality"'
)


def fetch(dest: Path) -> int:
    dest.mkdir(parents=True, exist_ok=True)
    status = 0
    for name, url in FILES.items():
        target = dest / name
        if target.exists():
            print(f"{target} already present, skipping")
            continue
        print(f"fetching {url}")
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                data = resp.read()
        except (urllib.error.URLError, OSError) as e:
            print(f"error: could not fetch {name}: {e}", file=sys.stderr)
            print(f"  download it manually from {url}", file=sys.stderr)
            status = 1
            continue
        first_line = data.split(b"\n", 1)[0].decode("utf-8", "replace").strip()
        if first_line != EXPECTED_HEADER:
            print(
                f"error: {name} does not look like the published file "
                f"(unexpected header {first_line!r})",
                file=sys.stderr,
            )
            status = 1
            continue
        target.write_bytes(data)
        print(f"wrote {target} ({len(data)} bytes)")
    return status


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--dest",
        default="data",
        help="directory to place the CSVs in (default: ./data)",
    )
    args = parser.parse_args(argv)
    return fetch(Path(args.dest))


if __name__ == "__main__":
    sys.exit(main())
