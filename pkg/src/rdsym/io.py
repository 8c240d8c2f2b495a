"""CSV writers shared by the command-line tools.

Snapshot files have the header ``t,x,U,V``, rows time-major then x
ascending, floats at 17 significant digits. Optional metadata lines precede
the header and start with ``#``.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

SNAPSHOT_HEADER = ("t", "x", "U", "V")


def fmt(v):
    return format(float(v), ".17g")


def _write(path, header, rows, comments=()):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def write_snapshots(path, snapshots, x, comments=()):
    """``snapshots`` are FieldState-like objects with ``t``, ``U``, ``V``."""
    x = np.asarray(x, dtype=float)

    def rows():
        for s in snapshots:
            t = fmt(s.t)
            for xi, u, v in zip(x, s.U, s.V):
                yield (t, fmt(xi), fmt(u), fmt(v))

    return _write(path, SNAPSHOT_HEADER, rows(), comments)


def write_table(path, header, rows, comments=()):
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, (float, np.floating)):
            return fmt(v)
        return str(v)

    return _write(path, header, ([cell(v) for v in r] for r in rows), comments)


def read_snapshots(path):
    """Return an (n, 4) array of the numeric rows of a snapshot CSV."""
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return np.loadtxt(lines[1:], delimiter=",", ndmin=2)
