"""Command-line front end.

Subcommands: ``evolve-curve``, ``radial``, ``sphere``, ``verify``, ``sweep``
and ``run`` (which reads the same options from a JSON file).  Exit status is
0 on success, 2 when a check fails, 1 on a usage or configuration error and
3 on a numerical failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .errors import ConfigError, HMCFError, IntegrationFailure, InvalidInputError, NotApplicableError
from .forcing import ForcingSchedule
from .geometry import AngularGrid, harmonic_radius_of_curvature, harmonic_support, support_of_circle
from .ma_solver import EvolveOptions, evolve
from .radial import (RadialProblem, collapse_lower_bound, collapse_upper_bound, energy_envelope_check,
                     integrate_radial)
from . import spheres
from . import verification as ver

EXIT_OK, EXIT_CONFIG, EXIT_CHECK, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("evolve-curve", "radial", "sphere", "verify", "sweep")
SUITES = ("containment", "convexity", "length", "sigma", "all")

# ---------------------------------------------------------------- spec strings


def _float(text, fld):
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise ConfigError(fld, "must be a number", text) from None
    if not math.isfinite(v):
        raise ConfigError(fld, "must be finite", text)
    return v


def _float_list(text, fld):
    text = text.strip()
    return [_float(x, fld) for x in text.split(",")] if text else []


def _parse_harmonic(body, fld):
    coeffs = {"a": [], "b": []}
    for part in body.split(";"):
        if not part.strip():
            continue
        key, sep, vals = part.partition("=")
        key = key.strip()
        if not sep or key not in coeffs:
            raise ConfigError(fld, "harmonic spec must look like 'a=a0,a1,...;b=b1,b2,...'", body)
        coeffs[key] = _float_list(vals, fld)
    if not coeffs["a"]:
        raise ConfigError(fld, "harmonic spec needs at least a0", body)
    return coeffs["a"], coeffs["b"]


def parse_h_spec(text: str, n_nodes: int, fld: str = "h") -> np.ndarray:
    """Support function from ``circle:R[,cx,cy]`` or ``harmonic:a=...;b=...``.

    Harmonic data must satisfy h_thth + h > 0 on a grid four times finer
    than the run grid.
    """
    if not isinstance(text, str) or ":" not in text:
        raise ConfigError(fld, "expected 'circle:R[,cx,cy]' or 'harmonic:a=...;b=...'", text)
    kind, _, body = text.partition(":")
    grid = AngularGrid(n_nodes)
    if kind == "circle":
        vals = _float_list(body, fld)
        if len(vals) not in (1, 3):
            raise ConfigError(fld, "circle spec takes R or R,cx,cy", text)
        center = vals[1:] if len(vals) == 3 else (0.0, 0.0)
        if not vals[0] > math.hypot(*center):
            raise ConfigError(fld, "circle must contain the origin in its interior", text)
        return support_of_circle(vals[0], center, grid)
    if kind == "harmonic":
        a, b = _parse_harmonic(body, fld)
        fine = AngularGrid(4 * n_nodes).theta
        q = harmonic_radius_of_curvature(a, b, fine)
        if not np.min(q) > 0:
            i = int(np.argmin(q))
            raise ConfigError(fld, f"h_thth + h must be positive; min {q[i]:.6g} at theta = {fine[i]:.6g}",
                              text)
        h = harmonic_support(a, b, grid)
        if not np.min(harmonic_support(a, b, AngularGrid(4 * n_nodes))) > 0:
            raise ConfigError(fld, "the origin must lie inside the curve (h > 0)", text)
        return h
    raise ConfigError(fld, "unknown initial-data kind (use circle or harmonic)", text)


def parse_f_spec(text: str, n_nodes: int, fld: str = "f") -> np.ndarray:
    """Initial speed from ``const:v`` or ``harmonic:a=...;b=...``."""
    if not isinstance(text, str) or ":" not in text:
        raise ConfigError(fld, "expected 'const:v' or 'harmonic:a=...;b=...'", text)
    kind, _, body = text.partition(":")
    if kind == "const":
        return np.full(n_nodes, _float(body, fld))
    if kind == "harmonic":
        a, b = _parse_harmonic(body, fld)
        return harmonic_support(a, b, AngularGrid(n_nodes))
    raise ConfigError(fld, "unknown speed kind (use const or harmonic)", text)


def parse_forcing(text, fld: str = "c") -> ForcingSchedule:
    """``const:v`` or ``table:path`` (two-column CSV t,c)."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return ForcingSchedule.constant(_float(text, fld))
    if not isinstance(text, str) or ":" not in text:
        raise ConfigError(fld, "expected 'const:v' or 'table:path'", text)
    kind, _, body = text.partition(":")
    if kind == "const":
        return ForcingSchedule.constant(_float(body, fld))
    if kind == "table":
        try:
            return ForcingSchedule.from_csv(body)
        except OSError as exc:
            raise ConfigError(fld, f"cannot read forcing table: {exc.strerror}", body) from None
        except InvalidInputError as exc:
            raise ConfigError(fld, str(exc), body) from None
    raise ConfigError(fld, "unknown forcing kind (use const or table)", text)


# ---------------------------------------------------------------- config


_DEFAULTS = {
    "evolve-curve": dict(h=None, f="const:0", c="const:0", n_nodes=256, cfl=0.4, horizon=5.0,
                         stride=1, output_dt=None, eps_collapse=None, k_max=None, out=None, report=None),
    "radial": dict(c0=None, r0=None, r1=0.0, cbar="const:0", dt_max=1e-2, out=None, report=None),
    "sphere": dict(n=None, r0=None, r1=0.0, c1="const:0", samples=100, fd_step=1e-3, report=None),
    "verify": dict(suite="all", h=None, f="const:0", outer=None, inner=None, f_outer="const:0",
                   f_inner="const:0", c="const:0", n_nodes=256, cfl=0.4, horizon=5.0, stride=1,
                   output_dt=None, slack=None, out=None, report=None),
    "sweep": dict(c0=None, r0=None, r1=None, cbar=None, cells=None, dt_max=1e-2, jobs=1,
                  out=None, report=None),
}


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config", "must be a JSON object", type(data).__name__)
        cmd = data.get("command")
        if cmd not in COMMANDS:
            raise ConfigError("command", f"must be one of {', '.join(COMMANDS)}", cmd)
        known = _DEFAULTS[cmd]
        unknown = sorted(set(data) - set(known) - {"command"})
        if unknown:
            raise ConfigError(unknown[0], f"is not an option of '{cmd}'")
        opts = {k: data.get(k, v) for k, v in known.items()}
        cfg = cls(cmd, opts)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError("config", f"cannot read file: {exc.strerror}", str(path)) from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON at line {exc.lineno}", str(path)) from None
        return cls.from_dict(data)

    def validate(self):
        o = self.options
        for name, rule in (("n_nodes", "even integer >= 16"),):
            if name in o:
                v = o[name]
                if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v or v < 16 or v % 2:
                    raise ConfigError(name, f"must be an {rule}", v)
                o[name] = int(v)
        if "cfl" in o and not (isinstance(o["cfl"], (int, float)) and 0 < o["cfl"] <= 1):
            raise ConfigError("cfl", "must lie in (0, 1]", o["cfl"])
        for name in ("horizon", "output_dt", "eps_collapse", "k_max", "dt_max", "fd_step", "slack"):
            if o.get(name) is not None:
                v = _float(o[name], name)
                if not v > 0:
                    raise ConfigError(name, "must be positive", o[name])
                o[name] = v
        for name in ("stride", "samples", "jobs"):
            if name in o:
                v = o[name]
                if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v or v < 1:
                    raise ConfigError(name, "must be a positive integer", v)
                o[name] = int(v)
        if self.command in ("radial", "sphere"):
            for name in ("r0",) + (("c0",) if self.command == "radial" else ()):
                if o.get(name) is None:
                    raise ConfigError(name, "is required")
                v = _float(o[name], name)
                if not v > 0:
                    raise ConfigError(name, "must be positive", o[name])
                o[name] = v
            o["r1"] = _float(o["r1"], "r1")
        if self.command == "sphere":
            n = o.get("n")
            if n is None or isinstance(n, bool) or _float(n, "n") != int(float(n)) or int(float(n)) < 1:
                raise ConfigError("n", "must be a positive integer", n)
            o["n"] = int(float(n))
        if self.command == "evolve-curve" and o.get("h") is None:
            raise ConfigError("h", "is required")
        if self.command == "verify":
            if o["suite"] not in SUITES:
                raise ConfigError("suite", f"must be one of {', '.join(SUITES)}", o["suite"])
            if o["suite"] == "containment":
                for name in ("outer", "inner"):
                    if o.get(name) is None:
                        raise ConfigError(name, "is required for the containment suite")
            elif o.get("h") is None:
                raise ConfigError("h", f"is required for the {o['suite']} suite")
        if self.command == "sweep" and o.get("cells") is None:
            for name in ("c0", "r0"):
                if o.get(name) is None:
                    raise ConfigError(name, "is required unless explicit cells are given")

    def evolve_options(self, **override) -> EvolveOptions:
        o = self.options
        kw = {k: o[k] for k in ("horizon", "cfl", "stride", "output_dt", "eps_collapse", "k_max") if k in o}
        kw.update(override)
        return EvolveOptions(**kw)


# ---------------------------------------------------------------- commands


def _traj_summary(traj) -> dict:
    return {"stop": traj.stop.tag.value, "tau_stop": traj.stop.tau_stop, "snapshots": len(traj),
            "steps": traj.n_steps, "final_length": float(traj.length[-1]),
            "min_k": float(np.min(traj.min_k)), "max_k": float(np.max(traj.max_k))}


def cmd_evolve(cfg: RunConfig):
    o = cfg.options
    h = parse_h_spec(o["h"], o["n_nodes"], "h")
    f = parse_f_spec(o["f"], o["n_nodes"], "f")
    forcing = parse_forcing(o["c"], "c")
    traj = evolve(h, f, forcing, cfg.evolve_options())
    if o.get("out"):
        io.write_trajectory(traj, o["out"])
    out = _traj_summary(traj)
    if o.get("report"):
        io.write_json(out, o["report"])
    return EXIT_OK, out


def radial_cell(cell: dict, dt_max: float = 1e-2) -> dict:
    """One radial run with its bound checks, as a flat summary row.

    Failures are recorded in the row (``status = "error"``) rather than
    raised, so a sweep can continue past a bad cell.
    """
    row = {"c0": cell.get("c0"), "r0": cell.get("r0"), "r1": cell.get("r1", 0.0),
           "cbar": cell.get("cbar", "const:0")}
    try:
        c0 = _float(row["c0"], "c0")
        r0 = _float(row["r0"], "r0")
        r1 = _float(row["r1"], "r1")
        forcing = parse_forcing(row["cbar"], "cbar")
        if not forcing.is_nonpositive:
            raise ConfigError("cbar", "must be <= 0 everywhere for the bound suite", row["cbar"])
        problem = RadialProblem(c0, forcing, r0, r1)
        traj = integrate_radial(problem, dt_max=dt_max)
    except HMCFError as exc:
        row.update(status="error", error=str(exc), passed=False)
        return row
    row.update(status="ok", t0=traj.collapse_time, peak_radius=traj.peak_radius,
               peak_bound=math.exp(r1 * r1 / (2.0 * c0)) * r0, samples=int(traj.t.size))
    checks = {"peak": traj.peak_radius <= row["peak_bound"] * (1 + 1e-9)}
    if r1 == 0:
        bound = collapse_upper_bound(problem)
        row.update(bound=bound, ratio=traj.collapse_time / bound,
                   bound_margin=bound - traj.collapse_time,
                   lower_bound=collapse_lower_bound(traj))
        env = energy_envelope_check(traj)
        checks["upper_bound"] = traj.collapse_time <= bound + 1e-6
        checks["envelope"] = env.passed
        if forcing.is_zero:
            checks["equality"] = abs(row["ratio"] - 1.0) <= 1e-4
    row["checks"] = checks
    row["passed"] = all(checks.values())
    return row


def cmd_radial(cfg: RunConfig):
    o = cfg.options
    forcing = parse_forcing(o["cbar"], "cbar")
    if not forcing.is_nonpositive:
        raise ConfigError("cbar", "must be <= 0 everywhere for the bound suite", o["cbar"])
    row = radial_cell({"c0": o["c0"], "r0": o["r0"], "r1": o["r1"], "cbar": o["cbar"]}, o["dt_max"])
    if row["status"] == "error":
        raise IntegrationFailure(row["error"])
    if o.get("out"):
        traj = integrate_radial(RadialProblem(o["c0"], forcing, o["r0"], o["r1"]), dt_max=o["dt_max"])
        with open(o["out"], "w", encoding="utf-8") as fh:
            fh.write("t,r,r_t\n")
            for t, r, v in zip(traj.t, traj.r, traj.rt):
                fh.write(f"{t:.17g},{r:.17g},{v:.17g}\n")
    if o.get("report"):
        io.write_json(row, o["report"])
    return (EXIT_OK if row["passed"] else EXIT_CHECK), row


def cmd_sphere(cfg: RunConfig):
    o = cfg.options
    forcing = parse_forcing(o["c1"], "c1")
    if not forcing.is_nonpositive:
        raise ConfigError("c1", "must be <= 0 everywhere", o["c1"])
    fam = spheres.sphere_flow(o["n"], o["r0"], o["r1"], forcing)
    t_end = fam.radial.t[-1]
    step = o["fd_step"]
    ts = np.linspace(step, 0.9 * t_end, o["samples"])
    metric = np.array([spheres.verify_metric_evolution(fam, t, fd_step=None).analytic for t in ts])
    second = np.array([spheres.verify_second_form_evolution(fam, t) for t in ts])
    normal = np.array([spheres.verify_normal_evolution(fam, t)["max"] for t in ts])
    scal = np.array([spheres.verify_scalar_evolutions(fam, t) for t in ts])
    fd = spheres.verify_metric_evolution(fam, 0.5 * t_end, fd_step=step).finite_difference
    # terms grow like r^-4 towards collapse; the tolerance scales with them
    radii = np.array([fam.state_at(t)[0] for t in ts])
    tol = 1e-12 * np.maximum(1.0, radii ** -4)
    reports = []
    for name, res in (("metric_evolution", metric), ("second_form_evolution", second),
                      ("normal_evolution", normal), ("mean_curvature_evolution", np.abs(scal[:, 0]))):
        j = int(np.argmax(res - tol))
        reports.append(ver.CheckReport(name, bool(np.all(res <= tol)), float(res[j]), None,
                                       float(ts[j]), (tol - res).tolist()).to_dict())
    out = {"collapse_time": fam.radial.collapse_time, "peak_radius": fam.radial.peak_radius,
           "reports": reports,
           "diagnostics": {"metric_fd_residual": fd, "fd_step": step,
                           "normSqA_residual_max": float(np.max(np.abs(scal[:, 1])))}}
    if o.get("report"):
        io.write_json(out, o["report"])
    return (EXIT_OK if all(r["passed"] for r in reports) else EXIT_CHECK), out


def cmd_verify(cfg: RunConfig):
    o = cfg.options
    n = o["n_nodes"]
    forcing = parse_forcing(o["c"], "c")
    slack = o.get("slack")
    reports, trajs = [], {}
    if o["suite"] == "containment":
        opts = cfg.evolve_options(output_dt=o.get("output_dt") or 0.01)
        outer = evolve(parse_h_spec(o["outer"], n, "outer"), parse_f_spec(o["f_outer"], n, "f_outer"),
                       forcing, opts)
        inner = evolve(parse_h_spec(o["inner"], n, "inner"), parse_f_spec(o["f_inner"], n, "f_inner"),
                       forcing, opts)
        trajs = {"outer": outer, "inner": inner}
        kw = {} if slack is None else {"slack": slack}
        reports.append(ver.check_containment(outer, inner, **kw))
    else:
        traj = evolve(parse_h_spec(o["h"], n, "h"), parse_f_spec(o["f"], n, "f"), forcing,
                      cfg.evolve_options())
        trajs = {"flow": traj}
        names = ("convexity", "length", "sigma") if o["suite"] == "all" else (o["suite"],)
        for name in names:
            fn = ver.SUITES[name]
            kw = {}
            if slack is not None:
                kw = {"rel": slack} if name == "length" else {"slack": slack}
            try:
                reports.append(fn(traj, **kw))
            except NotApplicableError as exc:
                raise ConfigError(o["suite"] if o["suite"] != "all" else name,
                                  f"hypotheses not met: {exc}") from None
    if o.get("out"):
        stem = Path(o["out"])
        for key, tr in trajs.items():
            path = stem if len(trajs) == 1 else stem.with_name(f"{stem.stem}_{key}{stem.suffix or '.csv'}")
            io.write_trajectory(tr, path)
    dicts = [r.to_dict() for r in reports]
    if o.get("report"):
        io.write_json(dicts if len(dicts) > 1 else dicts[0], o["report"])
    out = {"reports": dicts, "trajectories": {k: _traj_summary(t) for k, t in trajs.items()}}
    return (EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK), out


def _axis(v, fld):
    if v is None:
        return None
    if isinstance(v, str):
        return _float_list(v, fld)
    if isinstance(v, (int, float)):
        return [float(v)]
    return [_float(x, fld) for x in v]


def sweep_cells(options: dict) -> list:
    """Explicit cells, or the cartesian product of the c0, r0, r1, cbar axes."""
    if options.get("cells") is not None:
        cells = options["cells"]
        if isinstance(cells, str):
            try:
                cells = json.loads(Path(cells).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError("cells", f"cannot load cell list: {exc}", options["cells"]) from None
        if not isinstance(cells, list) or not all(isinstance(c, dict) for c in cells):
            raise ConfigError("cells", "must be a list of objects")
        return [dict(c) for c in cells]
    c0 = _axis(options["c0"], "c0")
    r0 = _axis(options["r0"], "r0")
    r1 = _axis(options.get("r1"), "r1") or [0.0]
    cbar = _axis(options.get("cbar"), "cbar") or [0.0]
    return [{"c0": a, "r0": b, "r1": c, "cbar": f"const:{d!r}"}
            for a, b, c, d in itertools.product(c0, r0, r1, cbar)]


def run_sweep(cells, dt_max=1e-2, jobs=1) -> list:
    """Rows in cell order; cells run independently, optionally in processes."""
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(radial_cell, cells, [dt_max] * len(cells)))
    return [radial_cell(c, dt_max) for c in cells]


SWEEP_COLUMNS = ("c0", "r0", "r1", "cbar", "status", "t0", "bound", "ratio", "bound_margin",
                 "lower_bound", "peak_radius", "peak_bound", "passed", "error")


def cmd_sweep(cfg: RunConfig):
    o = cfg.options
    rows = run_sweep(sweep_cells(o), o["dt_max"], o["jobs"])
    if o.get("out"):
        with open(o["out"], "w", encoding="utf-8") as fh:
            fh.write(",".join(SWEEP_COLUMNS) + "\n")
            for row in rows:
                cells = []
                for col in SWEEP_COLUMNS:
                    v = row.get(col, "")
                    if isinstance(v, float):
                        v = format(v, ".17g")
                    cells.append(json.dumps(v) if col == "error" and v else str(v))
                fh.write(",".join(cells) + "\n")
    out = {"rows": rows, "n_cells": len(rows),
           "n_errors": sum(r["status"] == "error" for r in rows),
           "n_failed": sum(not r["passed"] for r in rows)}
    if o.get("report"):
        io.write_json(out, o["report"])
    return (EXIT_OK if out["n_failed"] == 0 else EXIT_CHECK), out


DISPATCH = {"evolve-curve": cmd_evolve, "radial": cmd_radial, "sphere": cmd_sphere,
            "verify": cmd_verify, "sweep": cmd_sweep}


def run(cfg: RunConfig):
    """Execute a validated config; returns (exit status, JSON-able payload)."""
    try:
        return DISPATCH[cfg.command](cfg)
    except (ConfigError, NotApplicableError) as exc:
        return EXIT_CONFIG, {"error": str(exc)}
    except InvalidInputError as exc:
        return EXIT_CONFIG, {"error": str(exc)}
    except (IntegrationFailure, HMCFError, FloatingPointError) as exc:
        return EXIT_NUMERIC, {"error": str(exc)}


# ---------------------------------------------------------------- argparse


def _common_flow(p):
    p.add_argument("--c", default="const:0", help="forcing c(t): const:v or table:path")
    p.add_argument("--n-nodes", dest="n_nodes", type=int, default=256)
    p.add_argument("--cfl", type=float, default=0.4)
    p.add_argument("--horizon", type=float, default=5.0)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--output-dt", dest="output_dt", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hmcf", description="Forced hyperbolic curvature flow tools")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve-curve", help="evolve a convex curve by its support function")
    p.add_argument("--h", required=True, help="circle:R[,cx,cy] or harmonic:a=...;b=...")
    p.add_argument("--f", default="const:0", help="initial speed: const:v or harmonic:...")
    _common_flow(p)
    p.add_argument("--eps-collapse", dest="eps_collapse", type=float)
    p.add_argument("--k-max", dest="k_max", type=float)
    p.add_argument("--out", help="trajectory CSV")
    p.add_argument("--report", help="summary JSON")

    p = sub.add_parser("radial", help="radial ODE collapse time and bounds")
    p.add_argument("--c0", type=float, required=True)
    p.add_argument("--r0", type=float, required=True)
    p.add_argument("--r1", type=float, default=0.0)
    p.add_argument("--cbar", default="const:0")
    p.add_argument("--dt-max", dest="dt_max", type=float, default=1e-2)
    p.add_argument("--out", help="t,r,r_t CSV")
    p.add_argument("--report")

    p = sub.add_parser("sphere", help="evolution identities on a sphere family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r0", type=float, required=True)
    p.add_argument("--r1", type=float, default=0.0)
    p.add_argument("--c1", default="const:0")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--fd-step", dest="fd_step", type=float, default=1e-3)
    p.add_argument("--report")

    p = sub.add_parser("verify", help="run a check suite")
    p.add_argument("--suite", default="all", choices=SUITES)
    p.add_argument("--h")
    p.add_argument("--f", default="const:0")
    p.add_argument("--outer")
    p.add_argument("--inner")
    p.add_argument("--f-outer", dest="f_outer", default="const:0")
    p.add_argument("--f-inner", dest="f_inner", default="const:0")
    _common_flow(p)
    p.add_argument("--slack", type=float)
    p.add_argument("--out", help="trajectory CSV (suffixed _outer/_inner for containment)")
    p.add_argument("--report")

    p = sub.add_parser("sweep", help="radial sweep over a parameter grid")
    p.add_argument("--c0", help="comma-separated values")
    p.add_argument("--r0")
    p.add_argument("--r1")
    p.add_argument("--cbar", help="comma-separated constant values")
    p.add_argument("--cells", help="JSON file with an explicit list of cells")
    p.add_argument("--dt-max", dest="dt_max", type=float, default=1e-2)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="summary CSV")
    p.add_argument("--report")

    p = sub.add_parser("run", help="run a JSON RunConfig")
    p.add_argument("config")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "run":
            cfg = RunConfig.from_json(args.config)
        else:
            data = {k: v for k, v in vars(args).items() if v is not None}
            cfg = RunConfig.from_dict(data)
    except ConfigError as exc:
        print(f"hmcf: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status, payload = run(cfg)
    if "error" in payload and len(payload) == 1:
        print(f"hmcf: {payload['error']}", file=sys.stderr)
    else:
        print(json.dumps(_brief(payload), indent=2, default=_json_default))
    return status


def _brief(obj):
    # per-sample margins go to --report files only
    if isinstance(obj, dict):
        return {k: _brief(v) for k, v in obj.items() if k != "margins"}
    if isinstance(obj, list):
        return [_brief(v) for v in obj]
    return obj


def _json_default(o):
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o).__name__)


if __name__ == "__main__":
    sys.exit(main())
