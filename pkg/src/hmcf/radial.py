"""Radial reduction r_tt = -c0/r + cbar(t) r and its collapse time.

Round circles (c0 = 1) and round n-spheres (c0 = n) evolving under the
forced flows reduce to this scalar problem.  With r_t(0) = 0 and cbar <= 0
the radius reaches zero no later than sqrt(pi / (2 c0)) r0, with equality
exactly when cbar vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import IntegrationFailure, InvalidInputError, NotApplicableError
from .forcing import ForcingSchedule

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


@dataclass(frozen=True)
class RadialProblem:
    c0: float
    forcing: ForcingSchedule
    r0: float
    r1: float = 0.0

    def __post_init__(self):
        if not (self.c0 > 0 and math.isfinite(self.c0)):
            raise InvalidInputError(f"c0 must be positive, got {self.c0!r}")
        if not (self.r0 > 0 and math.isfinite(self.r0)):
            raise InvalidInputError(f"r0 must be positive, got {self.r0!r}")
        if not math.isfinite(self.r1):
            raise InvalidInputError(f"r1 must be finite, got {self.r1!r}")
        if not isinstance(self.forcing, ForcingSchedule):
            object.__setattr__(self, "forcing", ForcingSchedule.constant(float(self.forcing)))


@dataclass(eq=False)
class RadialTrajectory:
    problem: RadialProblem
    t: np.ndarray
    r: np.ndarray
    rt: np.ndarray
    collapse_time: float | None
    peak_radius: float
    t_peak: float | None = None

    def accel(self, t, r):
        p = self.problem
        return -p.c0 / r + p.forcing(t) * r

    def state_at(self, t: float):
        """(r, r_t) at time t by cubic Hermite interpolation of the samples."""
        if not (self.t[0] <= t <= self.t[-1]):
            raise InvalidInputError(f"t = {t} outside trajectory range [{self.t[0]}, {self.t[-1]}]")
        j = int(np.searchsorted(self.t, t, side="right")) - 1
        j = min(max(j, 0), len(self.t) - 2)
        ta, tb = self.t[j], self.t[j + 1]
        h = tb - ta
        s = (t - ta) / h
        ra, rb, va, vb = self.r[j], self.r[j + 1], self.rt[j], self.rt[j + 1]
        aa, ab = self.accel(ta, ra), self.accel(tb, rb)
        return _hermite(s, h, ra, va, rb, vb), _hermite(s, h, va, aa, vb, ab)


def _hermite(s, h, ya, da, yb, db):
    s2, s3 = s * s, s * s * s
    return ((2 * s3 - 3 * s2 + 1) * ya + (s3 - 2 * s2 + s) * h * da
            + (-2 * s3 + 3 * s2) * yb + (s3 - s2) * h * db)


def _hermite_stationary_point(h, ra, va, rb, vb):
    """Root in [0, 1] of the derivative of the cubic Hermite interpolant."""
    # p'(s) = a s^2 + b s + c
    a = 6 * ra + 3 * h * va - 6 * rb + 3 * h * vb
    b = -6 * ra - 4 * h * va + 6 * rb - 2 * h * vb
    c = h * va
    if abs(a) < 1e-300:
        roots = [-c / b] if b != 0 else []
    else:
        disc = max(b * b - 4 * a * c, 0.0)
        sq = math.sqrt(disc)
        q = -0.5 * (b + math.copysign(sq, b))
        roots = [q / a] + ([c / q] if q != 0 else [])
    inside = [x for x in roots if -1e-12 <= x <= 1 + 1e-12]
    if not inside:
        return None
    return min(max(min(inside), 0.0), 1.0)


def radial_rhs(r: float, t: float, problem: RadialProblem) -> float:
    """-c0 / r + cbar(t) r."""
    if not r > 0:
        raise InvalidInputError(f"radial_rhs needs r > 0, got {r!r}")
    return -problem.c0 / r + problem.forcing(t) * r


def tail_time(r_stop: float, problem: RadialProblem) -> float:
    """Time to fall from r_stop to 0 along the unforced energy envelope.

    int_0^r_stop dr / sqrt(2 c0 ln(r0 / r) + r1^2), 64-point Gauss-Legendre.
    """
    if r_stop <= 0:
        return 0.0
    x = 0.5 * r_stop * (_GL_NODES + 1.0)
    f = 1.0 / np.sqrt(2.0 * problem.c0 * np.log(problem.r0 / x) + problem.r1 ** 2)
    return float(0.5 * r_stop * np.dot(_GL_WEIGHTS, f))


def integrate_radial(problem: RadialProblem, dt_max: float = 1e-2, eps_rel: float = 1e-6,
                     max_steps: int = 10_000_000) -> RadialTrajectory:
    """Integrate until r < eps_rel * r0 and add the envelope tail to get t0."""
    if not dt_max > 0:
        raise InvalidInputError(f"dt_max must be positive, got {dt_max!r}")
    p = problem
    t, r, rt, status = _kernels.radial_integrate(
        float(p.r0), float(p.r1), float(p.c0), p.forcing.times, p.forcing.values,
        float(dt_max), float(eps_rel * p.r0), int(max_steps))
    if status == 1:
        raise IntegrationFailure(f"radial integration produced a non-finite state near t = {t[-1]}")
    if status == 2:
        raise IntegrationFailure(f"radial integration exhausted {max_steps} steps at t = {t[-1]}")

    collapse = float(t[-1] + tail_time(float(r[-1]), p))

    peak, t_peak = float(p.r0), None
    if p.r1 > 0:
        sign_change = np.nonzero((rt[:-1] > 0) & (rt[1:] <= 0))[0]
        if sign_change.size:
            j = int(sign_change[0])
            h = t[j + 1] - t[j]
            s = _hermite_stationary_point(h, r[j], rt[j], r[j + 1], rt[j + 1])
            if s is not None:
                t_peak = float(t[j] + s * h)
                peak = float(_hermite(s, h, r[j], rt[j], r[j + 1], rt[j + 1]))
        peak = max(peak, float(np.max(r)))
    return RadialTrajectory(problem=p, t=t, r=r, rt=rt, collapse_time=collapse,
                            peak_radius=peak, t_peak=t_peak)


def _require_bound_hypotheses(problem: RadialProblem):
    if problem.r1 != 0:
        raise NotApplicableError(f"collapse bounds assume r1 = 0, got r1 = {problem.r1!r}")
    if not problem.forcing.is_nonpositive:
        raise NotApplicableError("collapse bounds assume a non-positive forcing coefficient")


def collapse_upper_bound(problem: RadialProblem) -> float:
    """sqrt(pi / (2 c0)) r0, valid for r1 = 0 and cbar <= 0."""
    _require_bound_hypotheses(problem)
    return math.sqrt(math.pi / (2.0 * problem.c0)) * problem.r0


def _gap_integrand(r, r0):
    # sqrt((r0^2 - r^2) / ln(r0/r)) / r0, with its limit sqrt(2) at r = r0
    x = r / r0
    lg = -np.log1p(x - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sqrt((1.0 - x * x) / lg)
    return np.where(lg > 1e-12, val, math.sqrt(2.0))


def collapse_lower_bound(traj: RadialTrajectory) -> float:
    """sqrt(pi/(2 c0)) r0 - A r0 / sqrt(2 c0), A evaluated along the trajectory.

    A = sqrt(c+) int_0^t0 sqrt((r0^2 - r^2) / ln(r0/r)) / r0 dt uses the
    trapezoid rule on the samples plus the tail segment to t0, where the
    integrand tends to 1 / sqrt(ln(r0/r)) -> 0.
    """
    p = traj.problem
    _require_bound_hypotheses(p)
    g = _gap_integrand(traj.r, p.r0)
    integral = float(np.sum(0.5 * (g[1:] + g[:-1]) * np.diff(traj.t)))
    integral += 0.5 * float(g[-1]) * (traj.collapse_time - traj.t[-1])
    A = math.sqrt(p.forcing.bound) * integral
    return collapse_upper_bound(p) - A * p.r0 / math.sqrt(2.0 * p.c0)


@dataclass(frozen=True)
class EnvelopeReport:
    passed: bool
    first_violation: int | None
    lower_margin: np.ndarray
    upper_margin: np.ndarray

    def __bool__(self):
        return self.passed


def energy_envelope_check(traj: RadialTrajectory, problem: RadialProblem | None = None,
                          abs_slack: float = 1e-8, rel_slack: float = 1e-6) -> EnvelopeReport:
    """c0 ln(r0/r) <= r_t^2/2 <= c0 ln(r0/r) + (c+/2)(r0^2 - r^2) at every sample.

    Margins are positive when satisfied; a sample fails when a margin drops
    below -(abs_slack + rel_slack |bound|).
    """
    p = problem or traj.problem
    _require_bound_hypotheses(p)
    r, rt = traj.r, traj.rt
    lower = p.c0 * np.log(p.r0 / r)
    upper = lower + 0.5 * p.forcing.bound * (p.r0 ** 2 - r ** 2)
    kinetic = 0.5 * rt * rt
    lo_m = kinetic - lower
    up_m = upper - kinetic
    ok = (lo_m >= -(abs_slack + rel_slack * np.abs(lower))) & \
         (up_m >= -(abs_slack + rel_slack * np.abs(upper)))
    bad = np.nonzero(~ok)[0]
    return EnvelopeReport(passed=bool(ok.all()), first_violation=int(bad[0]) if bad.size else None,
                          lower_margin=lo_m, upper_margin=up_m)


def fixed_step_samples(problem: RadialProblem, t_start: float, r_start: float, v_start: float,
                       dt: float, n_steps: int):
    """Uniformly spaced (t, r, r_t) from a fixed-step RK4 run."""
    R, V = _kernels.radial_fixed_steps(float(r_start), float(v_start), float(t_start),
                                       float(problem.c0), problem.forcing.times,
                                       problem.forcing.values, float(dt), int(n_steps))
    return t_start + dt * np.arange(n_steps + 1), R, V
