"""Round-sphere solutions of X_tt = H n + c1(t) X and their evolution identities.

A family X(x, t) = r(t) u(x), with u the unit embedding of S^n, solves the
flow iff r_tt = -n/r + c1(t) r.  Every tensor on such a family is a scalar
multiple of the round metric ghat, so tensors are stored as that scalar
coefficient and index contractions reduce to powers of the coefficients
times a trace of the identity (= n).

Coefficients at (r, r_t, r_tt)::

    g = r^2          h = r            H = n / r       |A|^2 = n / r^2
    g_t = 2 r r_t    h_t = r_t        (X_t,i , X_t,j) = r_t^2
    g_tt = 2 (r r_tt + r_t^2)         h_tt = r_tt
    (n, X_t,i) = 0   d Gamma / dt = 0  grad H = 0
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .forcing import ForcingSchedule
from .radial import RadialProblem, RadialTrajectory, fixed_step_samples, integrate_radial


@dataclass(eq=False)
class SphereFamily:
    dim_n: int
    radial: RadialTrajectory
    forcing: ForcingSchedule

    def __post_init__(self):
        if self.radial.problem.c0 != self.dim_n:
            raise InvalidInputError("radial problem must have c0 equal to the sphere dimension")

    def state_at(self, t: float):
        """(r, r_t, r_tt) with r_tt taken from the ODE right-hand side."""
        r, rt = self.radial.state_at(t)
        return r, rt, -self.dim_n / r + self.forcing(t) * r


@dataclass(frozen=True)
class SphereTensors:
    """Scalar coefficients (times ghat) of the geometric tensors of an n-sphere."""

    n: int
    r: float
    r_t: float
    r_tt: float

    @property
    def g(self): return self.r ** 2

    @property
    def g_inv(self): return self.r ** -2

    @property
    def h(self): return self.r

    @property
    def H(self): return self.n / self.r

    @property
    def norm_sq_A(self): return self.n / self.r ** 2

    @property
    def g_t(self): return 2.0 * self.r * self.r_t

    @property
    def h_t(self): return self.r_t

    @property
    def g_tt(self): return 2.0 * (self.r * self.r_tt + self.r_t ** 2)

    @property
    def h_tt(self): return self.r_tt

    @property
    def mixed(self):
        """(d2X/dt dx^i, d2X/dt dx^j) coefficient."""
        return self.r_t ** 2

    # vanishing quantities on concentric spheres
    n_dot_mixed = 0.0
    dGamma_dt = 0.0
    grad_H = 0.0
    hess_H = 0.0
    n_t = 0.0


def sphere_flow(n: int, r0: float, r1: float = 0.0, c1=0.0, **integrate_kw) -> SphereFamily:
    """Radial reduction of the hypersurface flow for a round n-sphere."""
    if int(n) != n or n < 1:
        raise InvalidInputError(f"sphere dimension must be a positive integer, got {n!r}")
    forcing = c1 if isinstance(c1, ForcingSchedule) else ForcingSchedule.constant(c1)
    if not forcing.is_nonpositive:
        raise InvalidInputError("sphere families are defined here for c1 <= 0")
    traj = integrate_radial(RadialProblem(float(n), forcing, r0, r1), **integrate_kw)
    return SphereFamily(int(n), traj, forcing)


def cylinder_residual(rho, c1_value):
    """Axial component c1 rho of the flow equation on the cylinder ansatz.

    The cylinder (r(t) cos a, r(t) sin a, rho) has no axial acceleration
    and no axial normal component, so the axial equation reads 0 = c1 rho.
    """
    return c1_value * np.asarray(rho, dtype=float) if np.ndim(rho) else c1_value * rho


def _check_t(family: SphereFamily, t: float):
    if not (family.radial.t[0] <= t <= family.radial.t[-1]):
        raise InvalidInputError(
            f"t = {t} outside trajectory range [{family.radial.t[0]}, {family.radial.t[-1]}]")


# ---------------------------------------------------------------- metric


def metric_evolution_terms(n, r, r_t, r_tt, c1):
    """LHS and RHS coefficients of g_tt = -2 H h + 2 c1 g + 2 (X_ti, X_tj)."""
    T = SphereTensors(n, r, r_t, r_tt)
    rhs = -2.0 * T.H * T.h + 2.0 * c1 * T.g + 2.0 * T.mixed
    return T.g_tt, rhs


@dataclass(frozen=True)
class MetricResidual:
    analytic: float
    finite_difference: float | None
    fd_step: float | None


def verify_metric_evolution(family: SphereFamily, t: float, fd_step: float | None = 1e-3,
                            substeps: int = 8) -> MetricResidual:
    """|LHS - RHS| for the metric identity, analytic and by finite differences.

    The finite-difference LHS is the centred second difference of r^2 on a
    fixed-step RK4 run through t - fd_step, t, t + fd_step started from the
    interpolated trajectory state; RHS is taken on the same run at t.
    """
    _check_t(family, t)
    c1 = family.forcing(t)
    r, rt, rtt = family.state_at(t)
    lhs, rhs = metric_evolution_terms(family.dim_n, r, rt, rtt, c1)
    analytic = abs(lhs - rhs)
    fd = None
    if fd_step is not None:
        t_a = t - fd_step
        if t_a < family.radial.t[0] or t + fd_step > family.radial.t[-1]:
            raise InvalidInputError(f"t = {t} too close to the trajectory ends for step {fd_step}")
        ra, va = family.radial.state_at(t_a)
        ts, R, V = fixed_step_samples(family.radial.problem, t_a, ra, va,
                                      fd_step / substeps, 2 * substeps)
        r_m, r_c, r_p = R[0], R[substeps], R[2 * substeps]
        lhs_fd = (r_p ** 2 - 2.0 * r_c ** 2 + r_m ** 2) / fd_step ** 2
        rtt_c = -family.dim_n / r_c + c1 * r_c
        _, rhs_c = metric_evolution_terms(family.dim_n, r_c, V[substeps], rtt_c, c1)
        fd = abs(lhs_fd - rhs_c)
    return MetricResidual(analytic, fd, fd_step)


# ---------------------------------------------------------------- normal


def unit_sphere_frame(n: int, angles):
    """Unit embedding u of S^n in R^{n+1} and its coordinate derivatives.

    Hyperspherical coordinates; derivatives by complex-step differentiation,
    which is exact to rounding.
    """
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (n,):
        raise InvalidInputError(f"need {n} angles, got shape {angles.shape}")

    def embed(phi):
        out = np.empty(n + 1, dtype=phi.dtype)
        prod = np.ones((), dtype=phi.dtype)
        for i in range(n):
            out[i] = prod * np.cos(phi[i])
            prod = prod * np.sin(phi[i])
        out[n] = prod
        return out

    u = embed(angles.astype(complex)).real
    step = 1e-30
    du = np.empty((n, n + 1))
    for i in range(n):
        phi = angles.astype(complex)
        phi[i] += 1j * step
        du[i] = embed(phi).imag / step
    return u, du


def verify_normal_evolution(family: SphereFamily, t: float, angles=None) -> dict:
    """Magnitudes of every term of the unit-normal evolution identity.

    On concentric spheres n = -u is time independent, H is spatially
    constant and d2X/dt dx^i = r_t du_i is tangential, so each term is
    evaluated with explicit vectors at a sample point and must vanish.
    Returns the per-term magnitudes and their maximum under ``"max"``.
    """
    _check_t(family, t)
    n = family.dim_n
    r, rt, _ = family.state_at(t)
    if angles is None:
        angles = np.linspace(0.3, 1.1, n) if n > 1 else np.array([0.7])
    u, du = unit_sphere_frame(n, angles)
    X_i = r * du
    X_ti = rt * du
    nvec = -u
    g = X_i @ X_i.T
    g_inv = np.linalg.inv(g)
    grad_H = np.zeros(n)  # H = n / r is constant on the sphere
    n_tt = np.zeros(n + 1)  # the normal does not depend on t

    term_gradH = -(g_inv @ grad_H) @ X_i
    n_dot = X_ti @ nvec
    bracket = np.empty((n, n + 1))
    for j in range(n):
        a = 2.0 * (g_inv @ (X_i[j] @ X_ti.T)) @ X_i   # 2 g^{kl} (X_j, X_tl) X_k
        b = (g_inv @ (X_i @ X_ti[j])) @ X_i           # g^{kl} (X_l, X_tj) X_k
        bracket[j] = a + b - X_ti[j]
    term_mixed = (g_inv @ n_dot) @ bracket
    rhs = term_gradH + term_mixed
    out = {
        "lhs": float(np.max(np.abs(n_tt))),
        "grad_H": float(np.max(np.abs(term_gradH))),
        "normal_mixed_product": float(np.max(np.abs(n_dot))),
        "mixed_term": float(np.max(np.abs(term_mixed))),
        "residual": float(np.max(np.abs(n_tt - rhs))),
    }
    out["max"] = max(out.values())
    return out


# ---------------------------------------------------------------- second form


def laplacian_h_coefficient(n, r):
    """Delta h from Simons' identity: hess H + H h g^-1 h - |A|^2 h."""
    T = SphereTensors(n, r, 0.0, 0.0)
    return T.hess_H + T.H * T.h * T.g_inv * T.h - T.norm_sq_A * T.h


def second_form_terms(n, r, r_t, r_tt, c1) -> dict:
    """Per-term coefficients of the second fundamental form identity."""
    T = SphereTensors(n, r, r_t, r_tt)
    terms = {
        "laplacian_h": laplacian_h_coefficient(n, r),
        "-2H h g^-1 h": -2.0 * T.H * T.h * T.g_inv * T.h,
        "|A|^2 h": T.norm_sq_A * T.h,
        "g^kl h (n,X_tk)(n,X_tl)": n * T.g_inv * T.h * T.n_dot_mixed ** 2,
        "-2 dGamma/dt (n,X_tk)": -2.0 * T.dGamma_dt * T.n_dot_mixed,
        "c1 h": c1 * T.h,
    }
    return {"lhs": T.h_tt, "terms": terms, "rhs": sum(terms.values())}


def verify_second_form_evolution(family: SphereFamily, t: float) -> float:
    _check_t(family, t)
    r, rt, rtt = family.state_at(t)
    d = second_form_terms(family.dim_n, r, rt, rtt, family.forcing(t))
    return abs(d["lhs"] - d["rhs"])


# ---------------------------------------------------------------- scalars


def mean_curvature_terms(n, r, r_t, c1) -> dict:
    """Both sides of the H identity on a sphere, term by term.

    Contractions used (coefficient form, trace of identity = n):

    * ``-2 g^ik g^jl h_ij (X_tk, X_tl)``: the printed term has free i, j;
      h_ij is the only insertion that contracts it to a scalar;
    * ``d_{g_pq}/dt`` is read as the time derivative of g_pq.
    """
    T = SphereTensors(n, r, r_t, -n / r + c1 * r)
    gi, h, gt, ht = T.g_inv, T.h, T.g_t, T.h_t
    terms = {
        "laplacian_H": 0.0,
        "H|A|^2": T.H * T.norm_sq_A,
        "-2 g g h (X_t,X_t)": -2.0 * n * gi * gi * h * T.mixed,
        "H g (n,X_t)(n,X_t)": T.H * n * gi * T.n_dot_mixed ** 2,
        "-2 g dGamma/dt (n,X_t)": -2.0 * n * gi * T.dGamma_dt * T.n_dot_mixed,
        "2 g g g h g_t g_t": 2.0 * n * gi ** 3 * h * gt * gt,
        "-2 g g g_t h_t": -2.0 * n * gi ** 2 * gt * ht,
        "-c1 H": -c1 * T.H,
    }
    # H = n r^-1:  H_tt = n (2 r_t^2 / r^3 - r_tt / r^2)
    lhs = n * (2.0 * r_t ** 2 / r ** 3 - T.r_tt / r ** 2)
    rhs = sum(terms.values())
    return {"lhs": lhs, "terms": terms, "rhs": rhs, "residual": rhs - lhs}


def norm_sq_A_terms(n, r, r_t, c1) -> dict:
    """Both sides of the |A|^2 identity on a sphere, term by term.

    ``|A|^4`` is taken as (|A|^2)^2 and ``g_mn/dt``, ``h_ik/dt`` as time
    derivatives.  Every index chain below closes into a single trace.
    """
    T = SphereTensors(n, r, r_t, -n / r + c1 * r)
    gi, h, gt, ht = T.g_inv, T.h, T.g_t, T.h_t
    A2 = T.norm_sq_A
    terms = {
        "laplacian_|A|^2": 0.0,
        "-2|grad A|^2": 0.0,
        "2|A|^4": 2.0 * A2 * A2,
        "2|A|^2 g (n,X_t)(n,X_t)": 2.0 * A2 * n * gi * T.n_dot_mixed ** 2,
        "2 g g h_t h_t": 2.0 * n * gi ** 2 * ht * ht,
        "-8 g g g h g_t h_t": -8.0 * n * gi ** 3 * h * gt * ht,
        "-4 g g g h h (n,X_t)(n,X_t)": -4.0 * n * gi ** 3 * h * h * T.n_dot_mixed ** 2,
        "4 g g g g g_t g_t h h": 4.0 * n * gi ** 4 * gt * gt * h * h,
        "2 g g g g g_t g_t h h": 2.0 * n * gi ** 4 * gt * gt * h * h,
        "-4 g g h dGamma/dt (n,X_t)": -4.0 * n * gi ** 2 * h * T.dGamma_dt * T.n_dot_mixed,
        "-2 c1 |A|^2": -2.0 * c1 * A2,
    }
    # |A|^2 = n r^-2:  d2/dt2 = n (6 r_t^2 / r^4 - 2 r_tt / r^3)
    lhs = n * (6.0 * r_t ** 2 / r ** 4 - 2.0 * T.r_tt / r ** 3)
    rhs = sum(terms.values())
    return {"lhs": lhs, "terms": terms, "rhs": rhs, "residual": rhs - lhs}


def verify_scalar_evolutions(family: SphereFamily, t: float, log=None):
    """Residuals (RHS - LHS) of the H and |A|^2 identities at time t.

    With the contractions documented on :func:`mean_curvature_terms` the H
    identity closes exactly.  The |A|^2 identity as printed leaves
    4 n r_t^2 / r^4 on spheres (zero only at r_t = 0); it is reported, not
    corrected.  ``log`` (a callable) receives every term value.
    """
    _check_t(family, t)
    r, rt, _ = family.state_at(t)
    c1 = family.forcing(t)
    H = mean_curvature_terms(family.dim_n, r, rt, c1)
    A = norm_sq_A_terms(family.dim_n, r, rt, c1)
    if log is not None:
        for label, d in (("H", H), ("|A|^2", A)):
            log(f"{label} at t={t:.6g}: lhs={d['lhs']:.17g}")
            for name, v in d["terms"].items():
                log(f"  {name} = {v:.17g}")
            log(f"  residual = {d['residual']:.17g}")
    return H["residual"], A["residual"]


def static_sphere_metric_residual(n: int, r: float, c1: float = 0.0) -> float:
    """Metric residual for a sphere held at fixed radius (not a solution)."""
    lhs, rhs = metric_evolution_terms(n, r, 0.0, 0.0, c1)
    return abs(lhs - rhs)


def fd_convergence_exponent(family: SphereFamily, t: float, steps=(2e-3, 1e-3, 5e-4)) -> float:
    """Least-squares slope of log residual against log step."""
    res = [verify_metric_evolution(family, t, fd_step=s).finite_difference for s in steps]
    slope = np.polyfit(np.log(steps), np.log(res), 1)[0]
    return float(slope)


__all__ = [
    "SphereFamily", "SphereTensors", "sphere_flow", "cylinder_residual",
    "verify_metric_evolution", "verify_normal_evolution", "verify_second_form_evolution",
    "verify_scalar_evolutions", "metric_evolution_terms", "second_form_terms",
    "mean_curvature_terms", "norm_sq_A_terms", "laplacian_h_coefficient",
    "unit_sphere_frame", "static_sphere_metric_residual", "fd_convergence_exponent",
    "MetricResidual",
]

