"""Reading and writing profiles, trajectories and reports.

Floats are written with ``repr``-exact ``.17g`` formatting so a round trip
reproduces every bit.  All writers go through a temporary file in the
target directory followed by ``os.replace``.
"""

from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .analytic import Profile
from .params import ModelKind, params_from_dict, params_to_dict
from .pde import FieldState, Grid1D

FLOAT_FMT = ".17g"


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _fmt(x) -> str:
    return format(float(x), FLOAT_FMT)


def _csv_text(header, columns, comments=()) -> str:
    buf = _io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in zip(*columns):
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- profiles -----------------------------------------------------------------


def profile_to_dict(profile: Profile, extra_columns: dict | None = None) -> dict:
    out = {
        "kind": profile.kind.value,
        "params": params_to_dict(profile.params, profile.kind),
        "zeta": profile.zeta.tolist(),
        "u": profile.u.tolist(),
        "v": profile.v.tolist(),
    }
    for name, col in (extra_columns or {}).items():
        out[name] = np.asarray(col, dtype=float).tolist()
    return out


def write_profile(profile: Profile, path, fmt: str = "csv", extra_columns: dict | None = None) -> Path:
    """Write ``zeta,u,v`` (plus any ``extra_columns``) as CSV or JSON.

    The CSV carries the kind and parameters as ``#`` comment lines.
    """
    if fmt == "json":
        return atomic_write_text(path, dump_json(profile_to_dict(profile, extra_columns)))
    if fmt != "csv":
        raise ValueError("format must be 'csv' or 'json'")
    extra = extra_columns or {}
    header = ["zeta", "u", "v", *extra]
    columns = [profile.zeta, profile.u, profile.v, *extra.values()]
    comments = [f"kind={profile.kind.value}",
                "params=" + json.dumps(params_to_dict(profile.params, profile.kind), sort_keys=True)]
    return atomic_write_text(path, _csv_text(header, columns, comments))


def _read_commented_csv(path):
    meta, rows, header = {}, [], None
    with open(path, newline="") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta.setdefault(key, []).append((len(rows), value))
                continue
            if header is None:
                header = next(csv.reader([line]))
                continue
            rows.append([float(x) for x in next(csv.reader([line]))])
    return header, rows, meta


def read_profile(path) -> Profile:
    path = Path(path)
    if path.suffix == ".json":
        data = json.loads(path.read_text())
        params, _ = params_from_dict(data["params"])
        return Profile(np.array(data["zeta"]), np.array(data["u"]), np.array(data["v"]),
                       params, ModelKind(data["kind"]))
    header, rows, meta = _read_commented_csv(path)
    table = np.array(rows, dtype=float).reshape(-1, len(header))
    col = {name: table[:, i] for i, name in enumerate(header)}
    params, _ = params_from_dict(json.loads(meta["params"][0][1]))
    return Profile(col["zeta"], col["u"], col["v"], params, ModelKind(meta["kind"][0][1]))


# -- trajectories --------------------------------------------------------------


def write_trajectory(snapshots: list[FieldState], path, fmt: str = "csv", engine: str = "pde",
                     metadata: dict | None = None) -> Path:
    """Write snapshots as CSV blocks (``# t=<hours>`` then ``x,u,v``) or JSON."""
    if not snapshots:
        raise ValueError("no snapshots to write")
    grid = snapshots[0].grid
    if fmt == "json":
        doc = {
            "engine": engine,
            "grid": {"x_min": grid.x_min, "x_max": grid.x_max, "n": grid.n},
            "metadata": metadata or {},
            "snapshots": [{"t": s.t, "u": s.u.tolist(), "v": s.v.tolist()} for s in snapshots],
        }
        return atomic_write_text(path, dump_json(doc))
    if fmt != "csv":
        raise ValueError("format must be 'csv' or 'json'")
    parts = [f"# engine={engine}\n",
             f"# grid={json.dumps({'x_min': grid.x_min, 'x_max': grid.x_max, 'n': grid.n})}\n"]
    x = grid.x
    for s in snapshots:
        parts.append(f"# t={_fmt(s.t)}\n")
        parts.append(_csv_text(["x", "u", "v"], [x, s.u, s.v]))
    return atomic_write_text(path, "".join(parts))


def read_trajectory(path) -> tuple[list[FieldState], str]:
    """Inverse of :func:`write_trajectory`; returns ``(snapshots, engine)``."""
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text())
        grid = Grid1D(**doc["grid"])
        snaps = [FieldState(grid, s["t"], np.array(s["u"]), np.array(s["v"])) for s in doc["snapshots"]]
        return snaps, doc["engine"]
    engine, grid, snaps = "pde", None, []
    t, block = None, []

    def flush():
        if t is not None:
            arr = np.array(block, dtype=float)
            snaps.append(FieldState(grid, t, arr[:, 1], arr[:, 2]))

    with open(path, newline="") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                if key == "engine":
                    engine = value
                elif key == "grid":
                    grid = Grid1D(**json.loads(value))
                elif key == "t":
                    flush()
                    t, block = float(value), []
                continue
            if line.startswith("x,"):
                continue
            block.append([float(v) for v in line.split(",")])
    flush()
    return snaps, engine
