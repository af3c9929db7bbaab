"""Acceptance criteria, one test per criterion.

Each test records a ``CRITERION nn PASS|FAIL`` line; the lines are printed
in the terminal summary (see conftest.py).  Tolerances are the ones fixed
by the build contract.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from hmcf import (AngularGrid, EvolveOptions, ForcingSchedule, InvalidInputError, RadialProblem,
                  StopTag, SupportState, collapse_upper_bound, cylinder_residual, discriminant,
                  energy_envelope_check, evolve, harmonic_support, integrate_radial, sphere_flow,
                  support_of_circle, verify_metric_evolution, verify_second_form_evolution)
from hmcf.cli import main
from hmcf.io import read_trajectory
from hmcf.spheres import fd_convergence_exponent
from hmcf.verification import (check_containment, check_convexity_preservation,
                               check_length_monotonicity)

RESULTS: dict[int, str] = {}

SWEEP_C0 = (0.5, 1.0, 2.0)
SWEEP_R0 = (0.5, 1.0, 2.0)
SWEEP_CBAR = (0.0, -0.5)


def record(num: int, ok: bool, detail: str):
    RESULTS[num] = f"CRITERION {num:02d} {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[num]


@pytest.fixture(scope="module")
def sweep():
    out = {}
    for c0 in SWEEP_C0:
        for r0 in SWEEP_R0:
            for cb in SWEEP_CBAR:
                p = RadialProblem(c0, ForcingSchedule.constant(cb), r0)
                out[(c0, r0, cb)] = (p, integrate_radial(p))
    return out


@pytest.fixture(scope="module")
def criterion5_run():
    g = AngularGrid(256)
    h = harmonic_support([1.0, 0.0, 0.3], grid=g)
    return evolve(h, np.ones(256), ForcingSchedule.constant(-0.1), EvolveOptions(cfl=0.4))


def test_criterion_01_collapse_time_equality():
    p = RadialProblem(1.0, ForcingSchedule.constant(0.0), 1.0, 0.0)
    integrate_radial(p)  # compile / warm caches
    t = time.perf_counter()
    tr = integrate_radial(p)
    elapsed = time.perf_counter() - t
    rel = abs(tr.collapse_time / math.sqrt(math.pi / 2) - 1)
    record(1, rel <= 1e-4 and elapsed < 1.0,
           f"t0={tr.collapse_time:.8f} rel.err={rel:.2e} runtime={elapsed:.3f}s")


def test_criterion_02_upper_bound(sweep):
    worst_excess, eq_err, min_gap = -np.inf, 0.0, np.inf
    for (c0, r0, cb), (p, tr) in sweep.items():
        ub = math.sqrt(math.pi / (2 * c0)) * r0
        assert collapse_upper_bound(p) == pytest.approx(ub, rel=1e-15)
        worst_excess = max(worst_excess, tr.collapse_time - ub)
        rel = abs(tr.collapse_time / ub - 1)
        if cb == 0.0:
            eq_err = max(eq_err, rel)
        else:
            min_gap = min(min_gap, rel)
    ok = worst_excess <= 1e-6 and eq_err <= 1e-4 and min_gap > 1e-4
    record(2, ok, f"max(t0-bound)={worst_excess:.2e} equality err={eq_err:.2e} "
                  f"min strict gap={min_gap:.3f}")


def test_criterion_03_pde_ode_consistency(tmp_path, capsys):
    argv = ["evolve-curve", "--h", "circle:1", "--f", "const:0", "--c", "const:0",
            "--n-nodes", "256", "--cfl", "0.4", "--out", str(tmp_path / "c.csv")]
    main(argv)  # warm-up
    t = time.perf_counter()
    status = main(argv)
    elapsed = time.perf_counter() - t
    capsys.readouterr()
    tr = read_trajectory(tmp_path / "c.csv")
    rad = integrate_radial(RadialProblem(1.0, ForcingSchedule.constant(0.0), 1.0))
    spread = float(np.max(np.ptp(tr.S, axis=1)))
    mask = tr.times <= 0.9 * rad.collapse_time
    r_pde = tr.S[mask].mean(axis=1)
    r_ode = np.array([rad.state_at(x)[0] for x in tr.times[mask]])
    rel = float(np.max(np.abs(r_pde / r_ode - 1)))
    ok = status == 0 and spread < 1e-8 and rel <= 1e-4 and elapsed < 10.0
    record(3, ok, f"spread={spread:.1e} max rel.err={rel:.2e} runtime={elapsed:.2f}s")


def test_criterion_04_discriminant_identity(criterion5_run):
    rng = np.random.default_rng(20240501)
    g = AngularGrid(64)
    worst = 0.0
    n_states = 0
    while n_states < 1000:
        a0 = rng.uniform(0.2, 5.0)
        coeff = rng.uniform(-0.06, 0.06, size=4) * a0
        b = rng.uniform(-0.06, 0.06, size=3) * a0
        s = harmonic_support([a0, *coeff], b, g)
        st = SupportState(g, s, rng.uniform(-3, 3, size=64), rng.uniform(0, 5))
        if np.min(s) <= 0:
            continue
        c = ForcingSchedule.constant(rng.uniform(-2.0, 0.0))
        worst = max(worst, float(np.max(np.abs(discriminant(st, c) - 4.0))))
        n_states += 1
    grid = AngularGrid(256)
    circle = evolve(support_of_circle(1.0, grid=grid), 0.0, ForcingSchedule.constant(-1.0))
    n_snap = 0
    for tr in (criterion5_run, circle):
        for snap in tr.snapshots:
            worst = max(worst, float(np.max(np.abs(discriminant(snap, tr.forcing) - 4.0))))
            n_snap += 1
    record(4, worst <= 1e-12, f"max|disc-4|={worst:.1e} over {n_states} states + {n_snap} snapshots")


def test_criterion_05_convexity_preservation(criterion5_run):
    k = criterion5_run.curvature()
    min_k = float(np.min(k))
    rep = check_convexity_preservation(criterion5_run, slack=1e-3)
    ok = min_k >= 1 / 1.9 - 1e-3 and rep.passed
    record(5, ok, f"min k={min_k:.8f} floor={1 / 1.9 - 1e-3:.8f} "
                  f"stop={criterion5_run.stop.tag.value}@{criterion5_run.stop.tau_stop:.4f}")


def test_criterion_06_containment():
    g = AngularGrid(256)
    fc = ForcingSchedule.constant(-0.1)
    opts = EvolveOptions(output_dt=0.01)
    outer = evolve(support_of_circle(2.0, grid=g), 0.0, fc, opts)
    inner = evolve(support_of_circle(1.0, grid=g), 0.0, fc, opts)
    rep = check_containment(outer, inner, slack=1e-6)
    record(6, rep.passed, f"max(S_in-S_out)={rep.worst_violation:.3e} "
                          f"over {rep.details['shared_samples']} shared samples")


def test_criterion_07_length_law(criterion5_run):
    rep = check_length_monotonicity(criterion5_run, rel=1e-3)
    d = rep.details
    record(7, rep.passed, f"max rel mismatch={d['max_relative_mismatch']:.2e} "
                          f"max dL/dt={d['max_dL_dt']:.3f} max d2L/dt2={d['max_d2L_dt2']:.3f}")


def test_criterion_08_energy_envelope(sweep):
    worst = np.inf
    n = 0
    ok = True
    for (p, tr) in sweep.values():
        rep = energy_envelope_check(tr, p, abs_slack=1e-8, rel_slack=1e-6)
        ok &= rep.passed
        worst = min(worst, float(np.min(rep.lower_margin)), float(np.min(rep.upper_margin)))
        n += tr.t.size
    record(8, ok, f"{len(sweep)} runs, {n} samples, most negative margin={worst:.2e}")


def test_criterion_09_sphere_identities():
    worst = 0.0
    exps = []
    for n in (1, 2, 3):
        for r1, c1 in ((0.0, 0.0), (0.3, -0.2)):
            fam = sphere_flow(n, 1.0, r1, c1)
            for t in np.linspace(0.0, 0.9 * fam.radial.t[-1], 100):
                worst = max(worst, verify_metric_evolution(fam, t, fd_step=None).analytic,
                            verify_second_form_evolution(fam, t))
            exps.append(fd_convergence_exponent(fam, 0.5 * fam.radial.collapse_time,
                                                steps=(2e-3, 1e-3, 5e-4)))
    ok = worst <= 1e-12 and all(abs(e - 2.0) <= 0.2 for e in exps)
    record(9, ok, f"max analytic residual={worst:.1e} fd exponents={min(exps):.3f}..{max(exps):.3f}")


def test_criterion_10_cylinder_obstruction():
    rho = np.linspace(0.0, 1.0, 101)
    zero_ok = np.all(cylinder_residual(rho, 0.0) == 0.0)
    nonzero_ok = all(np.any(cylinder_residual(rho, c) != 0.0) for c in (-1.0, -1e-3, -1e-12))
    exact = np.array_equal(cylinder_residual(rho, -1.0), -rho)
    record(10, bool(zero_ok and nonzero_ok and exact),
           f"zero iff c1=0: {bool(zero_ok and nonzero_ok)}; c1=-1 gives -rho exactly: {exact}")


@pytest.mark.xfail(strict=True, raises=(AssertionError, InvalidInputError),
                   reason="h = 1 + 0.45 cos 2theta has h_thth + h = 1 - 1.35 cos 2theta < 0 "
                          "near theta = 0, pi: the initial curve is not convex")
def test_criterion_11_stop_plumbing():
    taus = {}
    allowed = {StopTag.COLLAPSED, StopTag.CURVATURE_BLOWUP, StopTag.SHOCK_SUSPECTED}
    try:
        for n in (256, 512):
            g = AngularGrid(n)
            tr = evolve(harmonic_support([1.0, 0.0, 0.45], grid=g), 0.0, ForcingSchedule.constant(0.0),
                        EvolveOptions(horizon=5.0))
            assert tr.stop.tag in allowed
            taus[n] = tr.stop.tau_stop
    except InvalidInputError as exc:
        RESULTS[11] = f"CRITERION 11 FAIL  initial data rejected: {str(exc)[:90]}"
        raise
    record(11, abs(taus[256] - taus[512]) <= 1e-2, f"tau_stop 256/512 = {taus[256]:.4f}/{taus[512]:.4f}")
