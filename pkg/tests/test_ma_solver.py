import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hmcf import (AngularGrid, ConvexityLossError, EvolveOptions, ForcingSchedule, InvalidInputError,
                  StopTag, SupportState, check_tau_hyperbolic, discriminant, evolve, harmonic_support,
                  ma_coefficients, pde_rhs, step, support_of_circle)
from hmcf.geometry import radius_of_curvature
from hmcf.ma_solver import cfl_dt, ma_residual
from hmcf.radial import RadialProblem, integrate_radial


def _state(n=128, a2=0.2, w=0.0, tau=0.0):
    g = AngularGrid(n)
    return SupportState(g, harmonic_support([1.0, 0.0, a2], grid=g), w, tau)


def test_coefficients_of_undivided_form():
    s = _state()
    co = ma_coefficients(s, ForcingSchedule.constant(-0.3))
    assert np.allclose(co.A, 1 + 0.3 * s.s ** 2)
    assert np.all(co.B == s.s) and np.all(co.C == 0) and np.all(co.E == 1)
    assert np.allclose(co.D, 0.3 * s.s)


def test_rhs_solves_monge_ampere_form():
    g = AngularGrid(128)
    s = SupportState(g, harmonic_support([1.0, 0.1, 0.15], [0.05], g),
                     -0.5 + 0.1 * np.sin(3 * g.theta), 0.2)
    forcing = ForcingSchedule.table([0.0, 1.0], [0.0, -0.8])
    wt = pde_rhs(s, forcing)
    q = radius_of_curvature(s)
    # undivided residual equals q * (W_tau - rhs) = 0
    assert np.max(np.abs(ma_residual(s, wt, forcing))) < 1e-12
    assert np.max(np.abs(ma_residual(s, wt + 1.0, forcing) - q)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(a=st.lists(st.floats(-0.05, 0.05), min_size=3, max_size=3),
       a0=st.floats(0.1, 5.0), c=st.floats(-2.0, 0.0), w=st.floats(-3, 3))
def test_discriminant_is_four(a, a0, c, w):
    g = AngularGrid(64)
    s = SupportState(g, harmonic_support([a0, a[0], a[1] * a0, a[2] * a0], grid=g), w)
    d = discriminant(s, ForcingSchedule.constant(c))
    assert np.all(np.abs(d - 4.0) <= 1e-12)


def test_hyperbolicity_check_detects_degenerate_node():
    s = _state(a2=0.2)
    f = ForcingSchedule.constant(0.0)
    assert check_tau_hyperbolic(s, f)
    # adjust one node so the discrete S_thth + S vanishes there
    q = radius_of_curvature(s)
    h = s.grid.dtheta
    i = 10
    bumped = s.s.copy()
    bumped[i] -= q[i] / (1.0 - 2.5 / h ** 2)
    bad = s.replace(s=bumped)
    assert abs(radius_of_curvature(bad)[i]) < 1e-9
    rep = check_tau_hyperbolic(bad, f)
    assert not rep
    assert rep.min_discriminant == pytest.approx(4.0)
    assert rep.theta_worst == pytest.approx(s.grid.theta[i])


def test_cfl_validation():
    s = _state()
    for bad in (0.0, -0.1, 1.5):
        with pytest.raises(InvalidInputError):
            cfl_dt(s, bad)
    dt = cfl_dt(s, 0.4)
    assert 0 < dt < 0.4 * s.grid.dtheta * 1.6
    assert cfl_dt(s, 0.4, dt_max=1e-6) == 1e-6


def test_step_reports_stage_time_on_convexity_loss():
    g = AngularGrid(128)
    # strongly inward speed concentrated near theta = 0 pinches the curve
    s = SupportState(g, harmonic_support([1.0, 0.0, 0.3], grid=g), -40 * np.cos(g.theta) ** 40, 0.7)
    with pytest.raises(ConvexityLossError) as info:
        for _ in range(200):
            s = step(s, 0.01, ForcingSchedule.constant(0.0))
    exc = info.value
    assert exc.theta is not None and exc.tau >= 0.7
    assert exc.tau <= s.tau + 0.01


def test_step_rejects_bad_dt():
    with pytest.raises(InvalidInputError):
        step(_state(), 0.0, ForcingSchedule.constant(0.0))


def test_evolve_rejects_nonconvex_data():
    g = AngularGrid(128)
    with pytest.raises(InvalidInputError):
        evolve(harmonic_support([1.0, 0.0, 0.45], grid=g), 0.0, ForcingSchedule.constant(0.0))
    with pytest.raises(InvalidInputError):
        evolve(np.ones(128), np.ones(64), ForcingSchedule.constant(0.0))


def test_evolve_options_validated():
    for kw in ({"horizon": 0}, {"cfl": 2}, {"stride": 0}, {"output_dt": -1}, {"k_max": 0}):
        with pytest.raises(InvalidInputError):
            EvolveOptions(**kw).validate()


def test_horizon_and_output_times_are_hit_exactly():
    g = AngularGrid(64)
    tr = evolve(support_of_circle(1.0, grid=g), 0.0, ForcingSchedule.constant(0.0),
                EvolveOptions(horizon=0.5, output_dt=0.1))
    assert tr.stop.tag is StopTag.HORIZON_REACHED
    assert tr.stop.tau_stop == 0.5
    assert np.allclose(tr.times, np.arange(6) * 0.1, atol=1e-14)


def test_stride_thins_snapshots(circle_run, grid256):
    tr = evolve(support_of_circle(1.0, grid=grid256), 0.0, ForcingSchedule.constant(0.0),
                EvolveOptions(stride=10))
    assert tr.n_steps == circle_run.n_steps
    assert len(tr) == tr.n_steps // 10 + 1 + (tr.n_steps % 10 != 0)
    assert tr.stop.tau_stop == circle_run.stop.tau_stop


def test_circle_collapses_like_radial_solution(circle_run):
    assert circle_run.stop.tag is StopTag.COLLAPSED
    assert circle_run.stop.tau_stop == pytest.approx(np.sqrt(np.pi / 2), rel=1e-4)
    spread = np.ptp(circle_run.S, axis=1)
    assert np.max(spread) < 1e-8
    rad = integrate_radial(RadialProblem(1.0, ForcingSchedule.constant(0.0), 1.0))
    for t, s in zip(circle_run.times, circle_run.S[:, 0]):
        if t <= 0.9 * rad.collapse_time:
            assert s == pytest.approx(rad.state_at(t)[0], rel=1e-4)


def test_forced_circle_collapses_earlier(grid256):
    tr = evolve(support_of_circle(1.0, grid=grid256), 0.0, ForcingSchedule.constant(-1.0))
    rad = integrate_radial(RadialProblem(1.0, ForcingSchedule.constant(-1.0), 1.0))
    assert tr.stop.tag is StopTag.COLLAPSED
    assert tr.stop.tau_stop < np.sqrt(np.pi / 2)
    assert tr.stop.tau_stop == pytest.approx(rad.collapse_time, abs=5e-3)


def test_oval_run_stops_by_curvature_blowup(oval_run):
    assert oval_run.stop.tag is StopTag.CURVATURE_BLOWUP
    assert np.min(oval_run.min_k) >= 1 / 1.9 - 1e-3
    assert np.all(np.diff(oval_run.times) > 0)


def test_discriminant_along_trajectory(oval_run):
    f = oval_run.forcing
    for snap in oval_run.snapshots:
        d = discriminant(snap, f)
        assert np.all(np.abs(d - 4.0) <= 1e-12)


def test_diagnostics_match_snapshots(oval_run):
    S = oval_run.S
    L = np.sum(S, axis=1) * oval_run.grid.dtheta
    assert np.allclose(oval_run.length, L, rtol=1e-14)
    assert np.allclose(oval_run.min_s, np.min(S, axis=1))


def test_stop_plumbing_on_near_degenerate_convex_data():
    # convex stand-in for the degenerate oval: h_thth + h = 1 - 0.96 cos 2 theta > 0
    taus = {}
    for n in (256, 512):
        g = AngularGrid(n)
        tr = evolve(harmonic_support([1.0, 0.0, 0.32], grid=g), 0.0, ForcingSchedule.constant(0.0),
                    EvolveOptions(horizon=5.0))
        assert tr.stop.tag in {StopTag.COLLAPSED, StopTag.CURVATURE_BLOWUP, StopTag.SHOCK_SUSPECTED}
        taus[n] = tr.stop.tau_stop
    assert abs(taus[256] - taus[512]) <= 1e-2


def test_total_variation_monitor_fires():
    g = AngularGrid(128)
    tr = evolve(harmonic_support([1.0, 0.0, 0.3], grid=g), 1.0, ForcingSchedule.constant(-0.1),
                EvolveOptions(tv_factor=1.5))
    assert tr.stop.tag is StopTag.SHOCK_SUSPECTED
    assert tr.stop.detail["tv_k"] > 0
