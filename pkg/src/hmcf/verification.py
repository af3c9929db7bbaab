"""Executable comparison and monotonicity checks on flow trajectories."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidComparisonError, NotApplicableError
from .geometry import radius_of_curvature, differentiate_periodic
from .ma_solver import FlowTrajectory

#: absolute slack for ordering checks
ORDER_SLACK = 1e-6
#: relative slack for derivative matching
DERIV_REL = 1e-3


@dataclass
class CheckReport:
    name: str
    passed: bool
    worst_violation: float
    theta: float | None = None
    tau: float | None = None
    margins: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.passed)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "passed": bool(self.passed),
            "worst_violation": _num(self.worst_violation),
            "location": {"theta": _num(self.theta), "tau": _num(self.tau)},
            "margins": [_num(m) for m in self.margins],
        }
        if self.details:
            out["details"] = {k: _plain(v) for k, v in self.details.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else repr(x)


def _plain(v):
    if isinstance(v, (np.floating, float)):
        return _num(v)
    if isinstance(v, (np.integer, np.bool_)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    return v


def _worst(values, times, theta):
    """Largest entry of a (time, node) violation array and its location."""
    idx = np.unravel_index(int(np.argmax(values)), values.shape)
    return float(values[idx]), float(theta[idx[1]]), float(times[idx[0]])


# ---------------------------------------------------------------- containment


def _shared_indices(ta, tb, tol=1e-12):
    ia, ib = [], []
    j = 0
    for i, t in enumerate(ta):
        while j < len(tb) and tb[j] < t - tol:
            j += 1
        if j < len(tb) and abs(tb[j] - t) <= tol:
            ia.append(i)
            ib.append(j)
    return np.array(ia, dtype=int), np.array(ib, dtype=int)


def check_containment(outer: FlowTrajectory, inner: FlowTrajectory,
                      slack: float = ORDER_SLACK) -> CheckReport:
    """S_inner <= S_outer + slack at every shared snapshot.

    Support-function ordering about a common interior origin is equivalent
    to containment of the convex bodies.  Initial data that break the
    hypothesis (S ordering or f_inner >= f_outer) fail at tau = 0.
    """
    if outer.grid != inner.grid:
        raise InvalidComparisonError(
            f"grids differ: {outer.grid.n_nodes} vs {inner.grid.n_nodes} nodes")
    if outer.forcing is None or inner.forcing is None or outer.forcing != inner.forcing:
        raise InvalidComparisonError("trajectories were computed with different forcing")
    theta = outer.grid.theta
    ia, ib = _shared_indices(outer.times, inner.times)
    if ia.size == 0 or ia[0] != 0 or ib[0] != 0:
        raise InvalidComparisonError("trajectories share no snapshot at tau = 0")

    # speed hypothesis: f_inner >= f_outer with f = -W(0)
    speed_gap = inner.W[0] - outer.W[0]
    speed_bad = float(np.max(speed_gap))

    gap = inner.S[ia] - outer.S[ib]
    times = outer.times[ia]
    worst, th, tau = _worst(gap, times, theta)
    margins = (-np.max(gap, axis=1)).tolist()
    passed = worst <= slack and speed_bad <= slack
    # a broken hypothesis is reported at tau = 0
    initial_bad = float(np.max(gap[0]))
    if initial_bad > slack:
        worst, th, tau = initial_bad, float(theta[int(np.argmax(gap[0]))]), 0.0
    elif speed_bad > slack and worst <= slack:
        worst, th, tau = speed_bad, float(theta[int(np.argmax(speed_gap))]), 0.0
    return CheckReport("containment", passed, worst, th, tau, margins,
                       {"shared_samples": int(ia.size), "speed_hypothesis_violation": speed_bad,
                        "initial_order_violation": initial_bad})


# ---------------------------------------------------------------- convexity


def check_convexity_preservation(traj: FlowTrajectory, slack: float = ORDER_SLACK) -> CheckReport:
    """min k(theta, t) >= min k(theta, 0) - slack over every snapshot."""
    k = traj.curvature()
    eta = float(np.min(k[0]))
    deficit = eta - k
    worst, th, tau = _worst(deficit, traj.times, traj.grid.theta)
    margins = (np.min(k, axis=1) - eta).tolist()
    return CheckReport("convexity", worst <= slack, worst, th, tau, margins,
                       {"eta": eta, "min_k": float(np.min(k))})


# ---------------------------------------------------------------- length


def _require_section4(traj: FlowTrajectory):
    f0 = -traj.W[0]
    if np.min(f0) < 0:
        raise NotApplicableError("length monotonicity needs f >= 0 (initial speed)")
    if traj.forcing is None or not traj.forcing.is_nonpositive:
        raise NotApplicableError("length monotonicity needs c <= 0")
    if not np.min(traj.S[0]) > 0:
        raise NotApplicableError("length monotonicity needs the origin inside the initial curve")


def centered_derivative(t, y):
    """Three-point derivative on a non-uniform grid at interior samples."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    h0 = t[1:-1] - t[:-2]
    h1 = t[2:] - t[1:-1]
    return (-h1 / (h0 * (h0 + h1)) * y[:-2]
            + (h1 - h0) / (h0 * h1) * y[1:-1]
            + h0 / (h1 * (h0 + h1)) * y[2:])


def length_second_derivative(traj: FlowTrajectory) -> np.ndarray:
    """Quadrature of int [(sigma_theta)^2 k - k + c S] dtheta at each snapshot."""
    out = np.empty(len(traj))
    for i, st in enumerate(traj.snapshots):
        k = 1.0 / radius_of_curvature(st)
        wt = differentiate_periodic(st.w, st.grid, 1)
        out[i] = np.sum((wt * wt - 1.0) * k + traj.forcing(st.tau) * st.s) * st.grid.dtheta
    return out


def check_length_monotonicity(traj: FlowTrajectory, rel: float = DERIV_REL) -> CheckReport:
    """Length law sub-checks: derivative match, dL/dt < 0, d2L/dt2 < 0.

    Endpoints are excluded from the derivative match, and t = 0 from the
    sign checks.
    """
    _require_section4(traj)
    t = traj.times
    if len(t) < 3:
        raise NotApplicableError("length checks need at least three snapshots")
    dtheta = traj.grid.dtheta
    L = np.sum(traj.S, axis=1) * dtheta
    dL_int = np.sum(traj.W, axis=1) * dtheta
    dL_fd = centered_derivative(t, L)
    mismatch = np.abs(dL_fd - dL_int[1:-1]) / np.maximum(np.abs(dL_int[1:-1]), 1e-300)
    j = int(np.argmax(mismatch))
    a_ok = bool(mismatch[j] <= rel)

    later = t > 0
    b_ok = bool(np.all(dL_int[later] < 0))
    d2 = length_second_derivative(traj)
    c_ok = bool(np.all(d2[later] < 0))

    # reported on the relative-mismatch scale; a sign failure is pushed past rel
    worst, tau = float(mismatch[j]), float(t[j + 1])
    if not b_ok:
        i = int(np.argmax(np.where(later, dL_int, -np.inf)))
        worst, tau = max(worst, rel + float(dL_int[i])), float(t[i])
    if not c_ok:
        i = int(np.argmax(np.where(later, d2, -np.inf)))
        worst, tau = max(worst, rel + float(d2[i])), float(t[i])
    return CheckReport("length", a_ok and b_ok and c_ok, worst, None, tau,
                       (rel - mismatch).tolist(),
                       {"derivative_match": a_ok, "first_derivative_negative": b_ok,
                        "second_derivative_negative": c_ok,
                        "max_relative_mismatch": float(mismatch[j]),
                        "max_dL_dt": float(np.max(dL_int[later])) if later.any() else None,
                        "max_d2L_dt2": float(np.max(d2[later])) if later.any() else None})


# ---------------------------------------------------------------- sigma


def check_sigma_positivity(traj: FlowTrajectory, slack: float = ORDER_SLACK) -> CheckReport:
    """k - c S > 0 and -W >= 0 at every sample, both up to ``slack``."""
    k = traj.curvature()
    c = np.array([traj.forcing(t) for t in traj.times])[:, None]
    accel = k - c * traj.S
    sigma = -traj.W
    viol = np.maximum(-accel, -sigma)
    worst, th, tau = _worst(viol, traj.times, traj.grid.theta)
    accel_ok = bool(np.all(accel > -slack))
    sigma_ok = bool(np.all(sigma >= -slack))
    margins = np.minimum(np.min(accel, axis=1), np.min(sigma, axis=1)).tolist()
    return CheckReport("sigma", worst <= slack, worst, th, tau, margins,
                       {"acceleration_positive": accel_ok, "speed_nonnegative": sigma_ok,
                        "min_acceleration": float(np.min(accel)), "min_speed": float(np.min(sigma))})


SUITES = {
    "convexity": check_convexity_preservation,
    "length": check_length_monotonicity,
    "sigma": check_sigma_positivity,
}
