"""Support-function representation of strictly convex plane curves.

A convex curve is encoded by its support function S(theta) about the fixed
origin, sampled on a uniform periodic grid of outward normal angles.  The
curve, its curvature and its length are recovered from S and its periodic
derivatives::

    x = S cos(theta) - S_theta sin(theta)
    y = S sin(theta) + S_theta cos(theta)
    1/k = S_thth + S
    L = int (S_thth + S) dtheta = int S dtheta
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvexityLossError, InvalidFixtureError, InvalidInputError

#: convexity floor, relative to max(S)
EPS_CONVEX_REL = 1e-8


@dataclass(frozen=True)
class AngularGrid:
    """Uniform periodic grid of normal angles theta_i = 2 pi i / n on [0, 2 pi)."""

    n_nodes: int

    def __post_init__(self):
        n = self.n_nodes
        if isinstance(n, bool) or int(n) != n or n < 16 or n % 2:
            raise InvalidInputError(f"n_nodes must be an even integer >= 16, got {n!r}")
        object.__setattr__(self, "n_nodes", int(n))

    @property
    def dtheta(self) -> float:
        return 2.0 * np.pi / self.n_nodes

    @property
    def theta(self) -> np.ndarray:
        th = np.arange(self.n_nodes) * self.dtheta
        th.setflags(write=False)
        return th

    def evaluate(self, func) -> np.ndarray:
        """Sample ``func(theta)`` on the grid nodes."""
        return np.asarray(func(self.theta), dtype=float) * np.ones(self.n_nodes)


@dataclass(frozen=True, eq=False)
class SupportState:
    """Support values ``s`` and velocities ``w = S_tau`` at time ``tau``.

    Construction checks shapes only. Strict convexity is checked by the
    operations that need it (see :func:`check_convex`).
    """

    grid: AngularGrid
    s: np.ndarray
    w: np.ndarray
    tau: float = 0.0

    def __post_init__(self):
        s = np.array(self.s, dtype=float).ravel()
        w = np.array(self.w, dtype=float)
        w = np.full(s.shape, float(w)) if w.ndim == 0 else w.ravel()
        if s.shape != (self.grid.n_nodes,) or w.shape != s.shape:
            raise InvalidInputError(
                f"support arrays must have length {self.grid.n_nodes}, got {s.shape} and {w.shape}")
        s.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "tau", float(self.tau))

    @classmethod
    def from_arrays(cls, s, w=0.0, tau=0.0) -> "SupportState":
        s = np.asarray(s, dtype=float)
        return cls(AngularGrid(s.size), s, w, tau)

    def replace(self, s=None, w=None, tau=None) -> "SupportState":
        return SupportState(self.grid,
                            self.s if s is None else s,
                            self.w if w is None else w,
                            self.tau if tau is None else tau)


@dataclass(frozen=True, eq=False)
class CurveGeometry:
    points: np.ndarray
    curvature: np.ndarray
    length: float
    sigma_tilde: np.ndarray


def differentiate_periodic(values, grid: AngularGrid, order: int = 1) -> np.ndarray:
    """Fourth-order central difference on the periodic grid.

    Exact on constants. ``order`` is 1 or 2.
    """
    v = np.asarray(values, dtype=float)
    if v.shape != (grid.n_nodes,):
        raise InvalidInputError(f"values have shape {v.shape}, grid has {grid.n_nodes} nodes")
    if order == 1:
        return _kernels.deriv1(v, grid.dtheta)
    if order == 2:
        return _kernels.deriv2(v, grid.dtheta)
    raise InvalidInputError(f"order must be 1 or 2, got {order!r}")


def radius_of_curvature(state: SupportState) -> np.ndarray:
    """S_thth + S at each node (no validity check)."""
    return _kernels.radius_of_curvature(state.s, state.grid.dtheta)


def convexity_floor(s) -> float:
    return EPS_CONVEX_REL * float(np.max(s))


def check_convex(state: SupportState, q=None) -> np.ndarray:
    """Return S_thth + S, raising :class:`ConvexityLossError` below the floor."""
    if q is None:
        q = radius_of_curvature(state)
    i = int(np.argmin(q))
    if not q[i] > convexity_floor(state.s):
        th = float(state.grid.theta[i])
        raise ConvexityLossError(
            f"S_thth + S = {q[i]:.3e} at theta = {th:.6f} is not above the convexity floor",
            theta=th, tau=state.tau, index=i)
    return q


def curvature_from_support(state: SupportState) -> np.ndarray:
    """k = 1 / (S_thth + S); raises on loss of strict convexity."""
    return 1.0 / check_convex(state)


def reconstruct_curve(state: SupportState) -> np.ndarray:
    """Curve points (n, 2) at the normal angles of the grid."""
    check_convex(state)
    th = state.grid.theta
    s = state.s
    st = _kernels.deriv1(s, state.grid.dtheta)
    c, sn = np.cos(th), np.sin(th)
    return np.column_stack((s * c - st * sn, s * sn + st * c))


def curve_length(state: SupportState) -> float:
    # trapezoid on the periodic grid; S_thth integrates to zero
    check_convex(state)
    return float(np.sum(state.s) * state.grid.dtheta)


def curve_geometry(state: SupportState) -> CurveGeometry:
    k = curvature_from_support(state)
    return CurveGeometry(points=reconstruct_curve(state), curvature=k,
                         length=curve_length(state), sigma_tilde=-state.w)


def support_of_circle(radius: float, center=(0.0, 0.0), grid: AngularGrid | int = 256) -> np.ndarray:
    """Support values of a circle about the origin (origin must be interior)."""
    if not isinstance(grid, AngularGrid):
        grid = AngularGrid(grid)
    cx, cy = float(center[0]), float(center[1])
    if not radius > np.hypot(cx, cy):
        raise InvalidFixtureError(
            f"circle of radius {radius} centred at ({cx}, {cy}) does not contain the origin")
    th = grid.theta
    return radius + cx * np.cos(th) + cy * np.sin(th)


def harmonic_support(a, b=(), grid: AngularGrid | int = 256) -> np.ndarray:
    """a[0] + sum_m a[m] cos(m theta) + b[m-1] sin(m theta)."""
    if not isinstance(grid, AngularGrid):
        grid = AngularGrid(grid)
    th = grid.theta
    out = np.full(grid.n_nodes, float(a[0]) if len(a) else 0.0)
    for m, am in enumerate(a[1:], start=1):
        out += am * np.cos(m * th)
    for m, bm in enumerate(b, start=1):
        out += bm * np.sin(m * th)
    return out


def harmonic_radius_of_curvature(a, b, theta) -> np.ndarray:
    """Exact h_thth + h for a harmonic support function, at arbitrary angles."""
    theta = np.asarray(theta, dtype=float)
    out = np.full(theta.shape, float(a[0]) if len(a) else 0.0)
    for m, am in enumerate(a[1:], start=1):
        out += (1 - m * m) * am * np.cos(m * theta)
    for m, bm in enumerate(b, start=1):
        out += (1 - m * m) * bm * np.sin(m * theta)
    return out


def menger_curvature(points: np.ndarray) -> np.ndarray:
    """Curvature of the circle through each vertex and its two neighbours."""
    p0 = np.roll(points, 1, axis=0)
    p2 = np.roll(points, -1, axis=0)
    a = np.linalg.norm(points - p0, axis=1)
    b = np.linalg.norm(p2 - points, axis=1)
    c = np.linalg.norm(p2 - p0, axis=1)
    u = points - p0
    v = p2 - points
    cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    return 2.0 * cross / (a * b * c)


def total_variation(values) -> float:
    v = np.asarray(values, dtype=float)
    return float(np.sum(np.abs(np.roll(v, -1) - v)))
