"""Method-of-lines solver for the support-function Monge-Ampere problem.

The support function S(theta, tau) of a curve moving under the forced
hyperbolic flow satisfies::

    S S_tt - c S S_thth + (S_tt S_thth - S_tht^2) + 1 - c S^2 = 0

which, divided by S_thth + S, is the explicit second-order system::

    S_t = W,    W_t = (W_th^2 - 1) / (S_thth + S) + c(tau) S

with S(., 0) = h and W(., 0) = -f.  It is integrated with classical RK4 on
a uniform periodic grid, the step limited by the characteristic speed
k (1 + |W_th|).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConvexityLossError, IntegrationFailure, InvalidInputError
from .forcing import ForcingSchedule
from .geometry import (
    EPS_CONVEX_REL,
    AngularGrid,
    SupportState,
    check_convex,
    convexity_floor,
    radius_of_curvature,
    total_variation,
)

__all__ = [
    "MaCoefficients", "ma_coefficients", "pde_rhs", "discriminant",
    "HyperbolicityReport", "check_tau_hyperbolic", "cfl_dt", "step",
    "StopTag", "StopReason", "FlowTrajectory", "EvolveOptions", "evolve",
]


@dataclass(frozen=True, eq=False)
class MaCoefficients:
    """Coefficient fields of A + B z_tt + C z_tth + D z_thth + E (z_tt z_thth - z_tth^2) = 0."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray


def ma_coefficients(state: SupportState, forcing: ForcingSchedule) -> MaCoefficients:
    c = forcing(state.tau)
    s = state.s
    return MaCoefficients(A=1.0 - c * s * s, B=s.copy(), C=np.zeros_like(s),
                          D=-c * s, E=np.ones_like(s))


def pde_rhs(state: SupportState, forcing: ForcingSchedule) -> np.ndarray:
    """W_tau = (W_th^2 - 1) / (S_thth + S) + c(tau) S."""
    wt, q = _kernels.support_rhs(state.s, state.w, forcing(state.tau), state.grid.dtheta)
    check_convex(state, q)
    return wt


def ma_residual(state: SupportState, w_tau, forcing: ForcingSchedule) -> np.ndarray:
    """Residual of the undivided Monge-Ampere form for a given S_tt."""
    co = ma_coefficients(state, forcing)
    h = state.grid.dtheta
    s_thth = _kernels.deriv2(state.s, h)
    s_tth = _kernels.deriv1(state.w, h)
    return (co.A + co.B * w_tau + co.C * s_tth + co.D * s_thth
            + co.E * (w_tau * s_thth - s_tth ** 2))


def discriminant(state: SupportState, forcing: ForcingSchedule) -> np.ndarray:
    """C^2 - 4 B D + 4 A E evaluated node by node from the coefficients."""
    co = ma_coefficients(state, forcing)
    return co.C * co.C - 4.0 * co.B * co.D + 4.0 * co.A * co.E


class HyperbolicityReport(tuple):
    """``(ok, min_discriminant, min_abs_radius, theta_worst)``; truthy iff ok."""

    __slots__ = ()

    def __new__(cls, ok, min_discriminant, min_abs_radius, theta_worst):
        return super().__new__(cls, (bool(ok), float(min_discriminant),
                                     float(min_abs_radius), theta_worst))

    ok = property(lambda self: self[0])
    min_discriminant = property(lambda self: self[1])
    min_abs_radius = property(lambda self: self[2])
    theta_worst = property(lambda self: self[3])

    def __bool__(self):
        return self[0]


def check_tau_hyperbolic(state: SupportState, forcing: ForcingSchedule) -> HyperbolicityReport:
    """Discriminant positive and z_thth + B = S_thth + S bounded away from zero."""
    disc = discriminant(state, forcing)
    q = np.abs(radius_of_curvature(state))
    floor = convexity_floor(state.s)
    ok_disc = bool(np.all(disc > 0.0))
    ok_q = bool(np.all(q > floor))
    th = state.grid.theta
    if not ok_disc:
        worst = float(th[int(np.argmin(disc))])
    elif not ok_q:
        worst = float(th[int(np.argmin(q))])
    else:
        worst = None
    return HyperbolicityReport(ok_disc and ok_q, np.min(disc), np.min(q), worst)


def cfl_dt(state: SupportState, cfl: float, dt_max: float = np.inf, q=None) -> float:
    """cfl * dtheta / max(k (1 + |W_th|)), clamped to ``dt_max``."""
    if not (0.0 < cfl <= 1.0):
        raise InvalidInputError(f"cfl must lie in (0, 1], got {cfl!r}")
    if q is None:
        q = check_convex(state)
    h = state.grid.dtheta
    speed = np.max((1.0 + np.abs(_kernels.deriv1(state.w, h))) / q)
    return float(min(dt_max, cfl * h / speed))


def step(state: SupportState, dt: float, forcing: ForcingSchedule) -> SupportState:
    """One RK4 step; every stage state is checked for strict convexity.

    Raises :class:`ConvexityLossError` carrying the stage time on failure.
    """
    if not dt > 0.0:
        raise InvalidInputError(f"dt must be positive, got {dt!r}")
    tau = state.tau
    s_new, w_new, status, bad, stage = _kernels.rk4_support_step(
        state.s, state.w, dt, forcing(tau), forcing(tau + 0.5 * dt), forcing(tau + dt),
        state.grid.dtheta, EPS_CONVEX_REL)
    if status:
        t_stage = tau + (0.0, 0.5, 0.5, 1.0)[stage] * dt
        th = float(state.grid.theta[bad])
        raise ConvexityLossError(
            f"convexity lost in RK4 stage {stage} at tau = {t_stage:.6g}, theta = {th:.6f}",
            theta=th, tau=t_stage, index=int(bad))
    return SupportState(state.grid, s_new, w_new, tau + dt)


class StopTag(str, enum.Enum):
    HORIZON_REACHED = "HorizonReached"
    COLLAPSED = "Collapsed"
    CURVATURE_BLOWUP = "CurvatureBlowup"
    SHOCK_SUSPECTED = "ShockSuspected"
    HYPERBOLICITY_LOST = "HyperbolicityLost"


@dataclass(frozen=True)
class StopReason:
    tag: StopTag
    tau_stop: float
    detail: dict = field(default_factory=dict)


@dataclass
class EvolveOptions:
    """Stepping and stop-detection settings for :func:`evolve`.

    ``eps_collapse`` and ``k_max`` default to 1e-4 max(h) and
    1e3 max(k0).  A curvature exceedance counts as blow-up only while part
    of the curve still has curvature below ``uniform_fraction * k_max``;
    when the whole curve is that curved it is shrinking to a point and
    stepping continues until the collapse test fires.  The shock monitor
    compares TV(k)/mean(k) with ``tv_factor * max(initial, tv_floor)``.
    """

    horizon: float = 5.0
    cfl: float = 0.4
    stride: int = 1
    output_dt: float | None = None
    dt_max: float = np.inf
    eps_collapse: float | None = None
    k_max: float | None = None
    tv_factor: float = 50.0
    tv_floor: float = 0.1
    uniform_fraction: float = 0.1
    max_steps: int = 2_000_000

    def validate(self):
        if not (self.horizon > 0 and np.isfinite(self.horizon)):
            raise InvalidInputError(f"horizon must be positive and finite, got {self.horizon!r}")
        if not (0.0 < self.cfl <= 1.0):
            raise InvalidInputError(f"cfl must lie in (0, 1], got {self.cfl!r}")
        if int(self.stride) != self.stride or self.stride < 1:
            raise InvalidInputError(f"stride must be a positive integer, got {self.stride!r}")
        if self.output_dt is not None and not self.output_dt > 0:
            raise InvalidInputError(f"output_dt must be positive, got {self.output_dt!r}")
        if not self.dt_max > 0:
            raise InvalidInputError(f"dt_max must be positive, got {self.dt_max!r}")
        for name in ("eps_collapse", "k_max"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise InvalidInputError(f"{name} must be positive, got {v!r}")
        if not self.tv_factor > 1:
            raise InvalidInputError(f"tv_factor must exceed 1, got {self.tv_factor!r}")


@dataclass(eq=False)
class FlowTrajectory:
    snapshots: list
    stop: StopReason
    forcing: ForcingSchedule | None
    length: np.ndarray
    min_k: np.ndarray
    max_k: np.ndarray
    min_s: np.ndarray
    n_steps: int = 0

    @property
    def grid(self) -> AngularGrid:
        return self.snapshots[0].grid

    @property
    def times(self) -> np.ndarray:
        return np.array([st.tau for st in self.snapshots])

    @property
    def S(self) -> np.ndarray:
        return np.array([st.s for st in self.snapshots])

    @property
    def W(self) -> np.ndarray:
        return np.array([st.w for st in self.snapshots])

    def curvature(self) -> np.ndarray:
        return np.array([1.0 / radius_of_curvature(st) for st in self.snapshots])

    def __len__(self):
        return len(self.snapshots)


def snapshot_diagnostics(state: SupportState, q=None):
    """(L, min k, max k, min S) for one state."""
    if q is None:
        q = radius_of_curvature(state)
    return (float(np.sum(state.s) * state.grid.dtheta), float(1.0 / np.max(q)),
            float(1.0 / np.min(q)), float(np.min(state.s)))


def _tv_norm(k):
    return total_variation(k) / float(np.mean(k))


def evolve(h, f, forcing: ForcingSchedule, opts: EvolveOptions | None = None) -> FlowTrajectory:
    """Integrate from S = h, S_tau = -f until a stop condition fires.

    ``f`` is the initial inward normal speed (scalar or array); positive f
    makes S decrease.
    """
    opts = opts or EvolveOptions()
    opts.validate()
    h = np.asarray(h, dtype=float)
    grid = AngularGrid(h.size)
    f = np.asarray(f, dtype=float)
    if f.ndim and f.shape != h.shape:
        raise InvalidInputError(f"f has shape {f.shape}, h has {h.shape}")
    state = SupportState(grid, h, -f * np.ones_like(h), 0.0)
    if not (np.all(np.isfinite(state.s)) and np.all(np.isfinite(state.w))):
        raise InvalidInputError("initial data contains non-finite values")
    try:
        q = check_convex(state)
    except ConvexityLossError as exc:
        raise InvalidInputError(f"initial support function is not strictly convex: {exc}") from exc

    eps_collapse = opts.eps_collapse if opts.eps_collapse is not None else 1e-4 * float(np.max(h))
    k0 = 1.0 / q
    k_max = opts.k_max if opts.k_max is not None else 1e3 * float(np.max(k0))
    k_uniform = opts.uniform_fraction * k_max
    tv_limit = opts.tv_factor * max(_tv_norm(k0), opts.tv_floor)

    snaps = [state]
    diags = [snapshot_diagnostics(state, q)]
    next_out = opts.output_dt
    n_out = 1
    n = 0
    stop = None
    last_recorded = True

    def detail(st, qq):
        out = {"min_S": float(np.min(st.s))}
        if qq is not None and np.all(np.isfinite(qq)):
            kk = 1.0 / qq
            out.update(max_k=float(np.max(kk)), tv_k=total_variation(kk))
        return out

    while stop is None:
        tau = state.tau
        if tau >= opts.horizon:
            stop = StopReason(StopTag.HORIZON_REACHED, tau, detail(state, q))
            break
        if n >= opts.max_steps:
            raise IntegrationFailure(f"step budget of {opts.max_steps} exhausted at tau = {tau}")
        dt = cfl_dt(state, opts.cfl, opts.dt_max, q)
        # land exactly on the horizon / output times
        target = None
        if tau + dt >= opts.horizon:
            dt = opts.horizon - tau
            target = opts.horizon
        hit_out = False
        if next_out is not None and tau + dt >= next_out:
            dt = next_out - tau
            target = next_out
            hit_out = True
        try:
            new = step(state, dt, forcing)
        except ConvexityLossError as exc:
            stop = StopReason(StopTag.CURVATURE_BLOWUP, float(exc.tau),
                              {**detail(state, q), "theta": exc.theta, "stage_failure": True})
            break
        n += 1
        if target is not None:
            new = new.replace(tau=target)
        if hit_out:
            n_out += 1
            next_out = n_out * opts.output_dt
        t_new = new.tau

        if not (np.all(np.isfinite(new.s)) and np.all(np.isfinite(new.w))):
            stop = StopReason(StopTag.SHOCK_SUSPECTED, t_new, {**detail(state, q), "non_finite": True})
            break
        q_new = radius_of_curvature(new)
        if not np.all(np.isfinite(q_new)):
            stop = StopReason(StopTag.SHOCK_SUSPECTED, t_new, {**detail(state, q), "non_finite": True})
            break
        if not np.min(q_new) > convexity_floor(new.s):
            i = int(np.argmin(q_new))
            stop = StopReason(StopTag.CURVATURE_BLOWUP, t_new,
                              {**detail(state, q), "theta": float(grid.theta[i])})
            break
        state, q = new, q_new
        k = 1.0 / q

        record = hit_out if opts.output_dt is not None else (n % opts.stride == 0)
        if record:
            snaps.append(state)
            diags.append(snapshot_diagnostics(state, q))
        last_recorded = record

        disc = discriminant(state, forcing)
        if not np.all(disc > 0.0):
            stop = StopReason(StopTag.HYPERBOLICITY_LOST, t_new,
                              {**detail(state, q), "min_discriminant": float(np.min(disc))})
        elif np.min(state.s) < eps_collapse:
            stop = StopReason(StopTag.COLLAPSED, t_new, detail(state, q))
        elif np.max(k) > k_max and np.min(k) < k_uniform:
            stop = StopReason(StopTag.CURVATURE_BLOWUP, t_new, detail(state, q))
        elif _tv_norm(k) > tv_limit:
            stop = StopReason(StopTag.SHOCK_SUSPECTED, t_new, detail(state, q))

    if not last_recorded:
        snaps.append(state)
        diags.append(snapshot_diagnostics(state, q))
    d = np.array(diags)
    return FlowTrajectory(snapshots=snaps, stop=stop, forcing=forcing, length=d[:, 0],
                          min_k=d[:, 1], max_k=d[:, 2], min_s=d[:, 3], n_steps=n)
