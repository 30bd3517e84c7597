"""CSV data files and the JSON run manifest.

Floats are written with 17 significant digits, which round-trips every
double exactly, so re-parsing a file reproduces the in-memory arrays bit for
bit.  The manifest is written last and atomically (temp file + rename).
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .functional import chemical_potential_density, compute_profiles, energy_density
from .grid import RingGrid
from .model import ModelParams

FORMAT_VERSION = 1
ORBITAL_COLUMNS = ("phi", "re", "im", "density")
PROFILE_COLUMNS = ("r0", "S_re", "S_im", "K_re", "K_im", "W_re", "W_im",
                   "eps_density_re", "mu_re")


def fmt(x: float) -> str:
    return "%.17g" % x


def write_table(path, columns, data) -> Path:
    """Write equal-length float columns with a header row."""
    path = Path(path)
    rows = np.column_stack([np.asarray(c, dtype=float) for c in data])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def read_table(path) -> dict:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols = list(zip(*[[float(v) for v in row] for row in reader]))
    return {name: np.array(col) for name, col in zip(header, cols)}


def write_orbital(path, grid: RingGrid, phi) -> Path:
    phi = np.asarray(grid.check(phi), dtype=complex)
    return write_table(path, ORBITAL_COLUMNS,
                       [grid.nodes, phi.real, phi.imag, np.abs(phi) ** 2])


def read_orbital(path) -> dict:
    return read_table(path)


def write_profiles(path, grid: RingGrid, phi, params: ModelParams, eps: float) -> Path:
    """Shift profiles of a unit-norm orbital, one row per shift index ``k``.

    ``r0`` is ``k delta`` wrapped into ``[-pi, pi)``.
    """
    pr = compute_profiles(grid, phi, params)
    dens = energy_density(pr, params)
    mu = chemical_potential_density(pr, params, eps)
    r0 = grid.shifts
    return write_table(path, PROFILE_COLUMNS, [
        r0, pr.S.real, pr.S.imag, pr.K.real, pr.K.imag, pr.W.real, pr.W.imag,
        dens.real, mu.real])


def write_manifest(path, manifest: dict) -> Path:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".manifest-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(manifest, fh, indent=1, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_manifest(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
