import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from hmcf import (AngularGrid, ConvexityLossError, InvalidFixtureError, InvalidInputError, SupportState,
                  curvature_from_support, curve_length, differentiate_periodic, harmonic_support,
                  reconstruct_curve, support_of_circle)
from hmcf.geometry import harmonic_radius_of_curvature, menger_curvature, total_variation


def test_grid_validation():
    for bad in (15, 17, 8, 2.5, True):
        with pytest.raises(InvalidInputError):
            AngularGrid(bad)
    g = AngularGrid(64)
    assert g.theta.shape == (64,)
    assert g.dtheta == pytest.approx(2 * np.pi / 64)
    with pytest.raises(ValueError):
        g.theta[0] = 1.0


def test_derivatives_of_constants_are_exact():
    g = AngularGrid(128)
    c = np.full(128, 3.7)
    assert np.all(differentiate_periodic(c, g, 1) == 0.0)
    assert np.all(differentiate_periodic(c, g, 2) == 0.0)


@pytest.mark.parametrize("n", [32, 64, 128, 256])
def test_cosine_derivatives_within_truncation_bound(n):
    g = AngularGrid(n)
    h = g.dtheta
    f = np.cos(g.theta)
    d1 = differentiate_periodic(f, g, 1)
    d2 = differentiate_periodic(f, g, 2)
    # leading truncation terms of the five-point stencils on cos
    assert np.max(np.abs(d1 + np.sin(g.theta))) <= h ** 4 / 30 * 1.001
    assert np.max(np.abs(d2 + np.cos(g.theta))) <= h ** 4 / 90 * 1.001


def test_fourth_order_convergence():
    errs = []
    for n in (32, 64, 128):
        g = AngularGrid(n)
        f = np.exp(np.sin(g.theta))
        exact = np.exp(np.sin(g.theta)) * (np.cos(g.theta) ** 2 - np.sin(g.theta))
        errs.append(np.max(np.abs(differentiate_periodic(f, g, 2) - exact)))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(rates > 3.8)


def test_differentiate_rejects_bad_input():
    g = AngularGrid(32)
    with pytest.raises(InvalidInputError):
        differentiate_periodic(np.zeros(31), g)
    with pytest.raises(InvalidInputError):
        differentiate_periodic(np.zeros(32), g, order=3)


def test_circle_reconstruction_and_length():
    g = AngularGrid(256)
    s = SupportState(g, support_of_circle(2.0, (0.3, -0.4), g), 0.0)
    pts = reconstruct_curve(s)
    r = np.hypot(pts[:, 0] - 0.3, pts[:, 1] + 0.4)
    assert np.max(np.abs(r - 2.0)) < 1e-12
    assert curve_length(s) == pytest.approx(4 * np.pi, rel=1e-14)
    assert np.allclose(curvature_from_support(s), 0.5, atol=1e-12)


def test_circle_fixture_requires_interior_origin():
    with pytest.raises(InvalidFixtureError):
        support_of_circle(1.0, (1.0, 0.0), 64)


def test_convexity_loss_reports_angle():
    g = AngularGrid(256)
    s = SupportState(g, harmonic_support([1, 0, 0.45], grid=g), 0.0)
    with pytest.raises(ConvexityLossError) as info:
        curvature_from_support(s)
    assert info.value.theta is not None
    assert np.cos(2 * info.value.theta) > 0.9


def test_state_shape_checked_and_immutable():
    g = AngularGrid(32)
    with pytest.raises(InvalidInputError):
        SupportState(g, np.ones(30), 0.0)
    st_ = SupportState(g, np.ones(32), 0.5)
    assert np.all(st_.w == 0.5)
    with pytest.raises(ValueError):
        st_.s[0] = 2.0


def test_curvature_agrees_with_menger_estimate():
    g = AngularGrid(512)
    s = SupportState(g, harmonic_support([1, 0, 0.2, 0.02], [0.0, 0.03], g), 0.0)
    k = curvature_from_support(s)
    km = menger_curvature(reconstruct_curve(s))
    assert np.max(np.abs(k - km) / k) < 1e-3


def test_total_variation_periodic():
    assert total_variation(np.array([0.0, 1.0, 0.0, 1.0])) == 4.0
    assert total_variation(np.ones(10)) == 0.0


coeff = st.floats(-0.06, 0.06)


@settings(max_examples=60, deadline=None)
@given(a0=st.floats(0.5, 3.0), a=st.lists(coeff, min_size=1, max_size=4), b=st.lists(coeff, max_size=4))
def test_harmonic_curves_properties(a0, a, b):
    g = AngularGrid(256)
    exact = harmonic_radius_of_curvature([a0] + a, b, g.theta)
    assume(np.min(exact) > 0.1)
    s = SupportState(g, harmonic_support([a0] + a, b, g), 0.0)
    # every harmonic is an exact eigenfunction up to fourth-order truncation
    k = curvature_from_support(s)
    assert np.max(np.abs(1.0 / k - exact)) < 1e-5
    # length depends only on the mean of S (Cauchy formula)
    assert curve_length(s) == pytest.approx(2 * np.pi * a0, rel=1e-12)
    # translating the origin adds a first harmonic; k changes only by stencil truncation
    shifted = SupportState(g, s.s + 0.1 * np.cos(g.theta) - 0.05 * np.sin(g.theta), 0.0)
    assert np.allclose(curvature_from_support(shifted), k, rtol=1e-6)
