"""Trajectory CSV and report JSON files.

Trajectory layout (one file per trajectory, numbers in '.17g')::

    # hmcf-trajectory n_nodes=256 n_steps=433
    # forcing times=0 values=-0.1
    tau,theta_index,S,W,k
    # snapshot tau=0,L=...,min_k=...,max_k=...,min_S=...
    0,0,1,0,1
    ...
    # stop tag=Collapsed,tau_stop=1.2532...
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .forcing import ForcingSchedule
from .geometry import AngularGrid, SupportState, radius_of_curvature
from .ma_solver import FlowTrajectory, StopReason, StopTag

HEADER = ("tau", "theta_index", "S", "W", "k")


def _g(x) -> str:
    return format(float(x), ".17g")


def _floats(text: str) -> np.ndarray:
    return np.array([float(v) for v in text.split(";")]) if text else np.empty(0)


def write_trajectory(traj: FlowTrajectory, path) -> Path:
    path = Path(path)
    grid = traj.grid
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# hmcf-trajectory n_nodes={grid.n_nodes} n_steps={traj.n_steps}\n")
        if traj.forcing is not None:
            fc = traj.forcing
            fh.write(f"# forcing kind={fc.kind} times={';'.join(map(_g, fc.times))}"
                     f" values={';'.join(map(_g, fc.values))}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for i, st in enumerate(traj.snapshots):
            fh.write(f"# snapshot tau={_g(st.tau)},L={_g(traj.length[i])},min_k={_g(traj.min_k[i])},"
                     f"max_k={_g(traj.max_k[i])},min_S={_g(traj.min_s[i])}\n")
            k = 1.0 / radius_of_curvature(st)
            t = _g(st.tau)
            for j in range(grid.n_nodes):
                w.writerow((t, j, _g(st.s[j]), _g(st.w[j]), _g(k[j])))
        fh.write(f"# stop tag={traj.stop.tag.value},tau_stop={_g(traj.stop.tau_stop)}\n")
    return path


def _kv(text: str) -> dict:
    out = {}
    for part in text.replace(",", " ").split():
        key, _, val = part.partition("=")
        out[key] = val
    return out


def read_trajectory(path) -> FlowTrajectory:
    """Inverse of :func:`write_trajectory`; floats round-trip exactly."""
    path = Path(path)
    n_nodes = n_steps = None
    forcing = None
    stop = None
    diags, s_rows, w_rows, taus = [], [], [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# hmcf-trajectory"):
                kv = _kv(line[len("# hmcf-trajectory"):])
                n_nodes, n_steps = int(kv["n_nodes"]), int(kv["n_steps"])
            elif line.startswith("# forcing"):
                kv = _kv(line[len("# forcing"):])
                forcing = ForcingSchedule(_floats(kv["times"]), _floats(kv["values"]), kind=kv["kind"])
            elif line.startswith("# snapshot"):
                kv = _kv(line[len("# snapshot"):])
                taus.append(float(kv["tau"]))
                diags.append([float(kv[k]) for k in ("L", "min_k", "max_k", "min_S")])
                s_rows.append([])
                w_rows.append([])
            elif line.startswith("# stop"):
                kv = _kv(line[len("# stop"):])
                stop = StopReason(StopTag(kv["tag"]), float(kv["tau_stop"]))
            elif line.startswith("tau,") or not line:
                continue
            else:
                if not s_rows:
                    raise InvalidInputError(f"{path}: data row before any snapshot header")
                parts = line.split(",")
                s_rows[-1].append(float(parts[2]))
                w_rows[-1].append(float(parts[3]))
    if n_nodes is None or stop is None or not taus:
        raise InvalidInputError(f"{path} is not a complete trajectory file")
    grid = AngularGrid(n_nodes)
    snaps = [SupportState(grid, np.array(s), np.array(w), t) for s, w, t in zip(s_rows, w_rows, taus)]
    d = np.array(diags)
    return FlowTrajectory(snapshots=snaps, stop=stop, forcing=forcing, length=d[:, 0],
                          min_k=d[:, 1], max_k=d[:, 2], min_s=d[:, 3], n_steps=n_steps)


def write_json(obj, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path
