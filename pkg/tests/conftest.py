"""Shared fixtures: synthetic wine CSV files in the published format."""

import numpy as np
import pytest

from fairband.environments import WINE_COLUMNS


def _write_wine_csv(path, n_rows: int, rng: np.random.Generator) -> None:
    scales = rng.uniform(0.5, 20.0, len(WINE_COLUMNS) - 1)
    offsets = rng.uniform(0.0, 10.0, len(WINE_COLUMNS) - 1)
    with open(path, "w") as fh:
        fh.write(";".join(f'"{c}"' for c in WINE_COLUMNS) + "\n")
        for _ in range(n_rows):
            feats = offsets + scales * rng.random(len(WINE_COLUMNS) - 1)
            quality = int(rng.integers(3, 10))
            fh.write(";".join(f"{v:.4f}" for v in feats) + f";{quality}\n")


@pytest.fixture(scope="session")
def wine_paths(tmp_path_factory):
    """A small red/white pair shaped like the published quality files."""
    rng = np.random.default_rng(99)
    d = tmp_path_factory.mktemp("wine")
    red = d / "winequality-red.csv"
    white = d / "winequality-white.csv"
    _write_wine_csv(red, 60, rng)
    _write_wine_csv(white, 80, rng)
    return str(red), str(white)
