"""Vectorized numpy implementations of the hot kernels.

These are the reference path; ``_kernels_numba`` mirrors them loop-for-loop.
"""

import math

import numpy as np


def deriv1(f, h):
    # grouped so that constant input gives exactly zero
    fp1 = np.roll(f, -1)
    fm1 = np.roll(f, 1)
    fp2 = np.roll(f, -2)
    fm2 = np.roll(f, 2)
    return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h)


def deriv2(f, h):
    fp1 = np.roll(f, -1)
    fm1 = np.roll(f, 1)
    fp2 = np.roll(f, -2)
    fm2 = np.roll(f, 2)
    return (16.0 * (fp1 + fm1 - 2.0 * f) - (fp2 + fm2 - 2.0 * f)) / (12.0 * h * h)


def radius_of_curvature(s, h):
    """S_thth + S on the periodic grid."""
    return deriv2(s, h) + s


def support_rhs(s, w, c, h):
    q = radius_of_curvature(s, h)
    wt = deriv1(w, h)
    return (wt * wt - 1.0) / q + c * s, q


def _stage_ok(s, q, eps_rel):
    eps = eps_rel * np.max(s)
    i = int(np.argmin(q))
    return q[i] > eps, i


def rk4_support_step(s, w, dt, c_start, c_mid, c_end, h, eps_rel):
    """One classical RK4 step of S_tau = W, W_tau = rhs(S, W).

    Returns ``(s_new, w_new, status, bad_index, bad_stage)``; status 1 means
    a stage state lost strict convexity (min(S_thth + S) <= eps_rel*max S).
    """
    a1, q = support_rhs(s, w, c_start, h)
    ok, i = _stage_ok(s, q, eps_rel)
    if not ok:
        return s, w, 1, i, 0
    v1 = w

    s2 = s + 0.5 * dt * v1
    w2 = w + 0.5 * dt * a1
    a2, q = support_rhs(s2, w2, c_mid, h)
    ok, i = _stage_ok(s2, q, eps_rel)
    if not ok:
        return s, w, 1, i, 1
    v2 = w2

    s3 = s + 0.5 * dt * v2
    w3 = w + 0.5 * dt * a2
    a3, q = support_rhs(s3, w3, c_mid, h)
    ok, i = _stage_ok(s3, q, eps_rel)
    if not ok:
        return s, w, 1, i, 2
    v3 = w3

    s4 = s + dt * v3
    w4 = w + dt * a3
    a4, q = support_rhs(s4, w4, c_end, h)
    ok, i = _stage_ok(s4, q, eps_rel)
    if not ok:
        return s, w, 1, i, 3
    v4 = w4

    s_new = s + (dt / 6.0) * (v1 + 2.0 * v2 + 2.0 * v3 + v4)
    w_new = w + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    return s_new, w_new, 0, -1, -1


def interp_forcing(t, ts, cs):
    """Piecewise-linear table lookup with constant extrapolation."""
    n = ts.shape[0]
    if n == 1 or t <= ts[0]:
        return cs[0]
    if t >= ts[n - 1]:
        return cs[n - 1]
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ts[mid] <= t:
            lo = mid
        else:
            hi = mid
    frac = (t - ts[lo]) / (ts[hi] - ts[lo])
    return cs[lo] + frac * (cs[hi] - cs[lo])


def radial_accel(r, t, c0, ts, cs):
    return -c0 / r + interp_forcing(t, ts, cs) * r


def radial_integrate(r0, r1, c0, ts, cs, dt_max, eps_r, max_steps):
    """RK4 for r_tt = -c0/r + cbar(t) r, stepping until r < eps_r.

    Step size is min(dt_max, 0.05 r / (|r_t| + sqrt(c0))), halved while a
    stage would leave r <= 0.  Status: 0 reached eps_r, 1 non-finite state,
    2 step budget exhausted.
    """
    cap = 1024
    T = np.empty(cap)
    R = np.empty(cap)
    V = np.empty(cap)
    t = 0.0
    r = r0
    v = r1
    T[0] = t
    R[0] = r
    V[0] = v
    n = 1
    status = 0
    sc = math.sqrt(c0)
    while r >= eps_r:
        if n >= max_steps:
            status = 2
            break
        dt = min(dt_max, 0.05 * r / (abs(v) + sc))
        accepted = False
        for _ in range(60):
            k1r = v
            k1v = radial_accel(r, t, c0, ts, cs)
            r2 = r + 0.5 * dt * k1r
            if not r2 > 0.0:
                dt *= 0.5
                continue
            v2 = v + 0.5 * dt * k1v
            k2r = v2
            k2v = radial_accel(r2, t + 0.5 * dt, c0, ts, cs)
            r3 = r + 0.5 * dt * k2r
            if not r3 > 0.0:
                dt *= 0.5
                continue
            v3 = v + 0.5 * dt * k2v
            k3r = v3
            k3v = radial_accel(r3, t + 0.5 * dt, c0, ts, cs)
            r4 = r + dt * k3r
            if not r4 > 0.0:
                dt *= 0.5
                continue
            v4 = v + dt * k3v
            k4r = v4
            k4v = radial_accel(r4, t + dt, c0, ts, cs)
            rn = r + (dt / 6.0) * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
            if not rn > 0.0:
                dt *= 0.5
                continue
            vn = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            accepted = True
            break
        if not accepted or not (math.isfinite(rn) and math.isfinite(vn)):
            status = 1
            break
        t = t + dt
        r = rn
        v = vn
        if n == cap:
            cap *= 2
            T2 = np.empty(cap)
            R2 = np.empty(cap)
            V2 = np.empty(cap)
            T2[:n] = T[:n]
            R2[:n] = R[:n]
            V2[:n] = V[:n]
            T = T2
            R = R2
            V = V2
        T[n] = t
        R[n] = r
        V[n] = v
        n += 1
    return T[:n].copy(), R[:n].copy(), V[:n].copy(), status


def radial_fixed_steps(r, v, t, c0, ts, cs, dt, n_steps):
    """Fixed-step RK4 from (t, r, v); returns arrays of length n_steps + 1."""
    R = np.empty(n_steps + 1)
    V = np.empty(n_steps + 1)
    R[0] = r
    V[0] = v
    for j in range(n_steps):
        tj = t + j * dt
        k1r = v
        k1v = radial_accel(r, tj, c0, ts, cs)
        k2r = v + 0.5 * dt * k1v
        k2v = radial_accel(r + 0.5 * dt * k1r, tj + 0.5 * dt, c0, ts, cs)
        k3r = v + 0.5 * dt * k2v
        k3v = radial_accel(r + 0.5 * dt * k2r, tj + 0.5 * dt, c0, ts, cs)
        k4r = v + dt * k3v
        k4v = radial_accel(r + dt * k3r, tj + dt, c0, ts, cs)
        r = r + (dt / 6.0) * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
        v = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        R[j + 1] = r
        V[j + 1] = v
    return R, V
