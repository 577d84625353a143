"""Deterministic report serialization.

JSON reports are emitted by a small writer of our own so that every float is
rendered with exactly 17 significant digits — identical configuration must
yield byte-identical files, which rules out locale- or version-dependent
float repr.  Non-finite floats become ``null`` (JSON has no NaN).  Trajectory
CSVs use the same float rendering.
"""

from __future__ import annotations

import json as _json
import math
from typing import Iterable

import numpy as np

from .dynamics import INVARIANT_NAMES, Trajectory

__all__ = ["format_float", "dumps", "dump_report",
           "TRAJECTORY_COLUMNS", "trajectory_rows", "write_trajectory_csv"]

_INDENT = "  "

#: Column layout of a trajectory CSV: time, the five coordinates, the five
#: conjugate momenta, the seven conserved quantities (the three momentum
#: charges repeat their coordinate columns by design — the layout lists every
#: conserved quantity explicitly), then one drift column per quantity.
TRAJECTORY_COLUMNS = (
    ("t", "theta", "phi", "y", "alpha", "psi",
     "P_theta", "P_phi", "P_y", "P_alpha", "P_psi")
    + INVARIANT_NAMES
    + tuple("drift_" + name for name in INVARIANT_NAMES))


def format_float(value: float) -> str:
    """A float as exactly 17 significant digits; non-finite becomes null."""
    value = float(value)
    if not math.isfinite(value):
        return "null"
    return "%.17g" % value


def _emit(obj, out: list, depth: int) -> None:
    pad = _INDENT * depth
    inner = _INDENT * (depth + 1)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, str):
        out.append(_json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[\n")
        for k, item in enumerate(items):
            out.append(inner)
            _emit(item, out, depth + 1)
            out.append(",\n" if k + 1 < len(items) else "\n")
        out.append(pad + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        keys = list(obj)
        for k, key in enumerate(keys):
            if not isinstance(key, str):
                raise TypeError(f"report keys must be strings, got {key!r}")
            out.append(inner + _json.dumps(key) + ": ")
            _emit(obj[key], out, depth + 1)
            out.append(",\n" if k + 1 < len(keys) else "\n")
        out.append(pad + "}")
    else:
        raise TypeError(f"unsupported report value: {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON text (insertion-ordered keys, 17-digit floats)."""
    out: list[str] = []
    _emit(obj, out, 0)
    out.append("\n")
    return "".join(out)


def dump_report(obj, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def trajectory_rows(traj: Trajectory) -> Iterable[list[str]]:
    """Formatted CSV rows (without header) of a sampled trajectory."""
    for k in range(traj.states.shape[0]):
        row = [traj.times[k], *traj.states[k],
               *traj.invariant_values[k], *traj.drifts[k]]
        yield ["%.17g" % v if math.isfinite(v) else "nan"
               for v in map(float, row)]


def write_trajectory_csv(traj: Trajectory, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(TRAJECTORY_COLUMNS) + "\n")
        for row in trajectory_rows(traj):
            fh.write(",".join(row) + "\n")
