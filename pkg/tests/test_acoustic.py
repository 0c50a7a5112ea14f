import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sonicport import (
    FlowProfile,
    HorizonData,
    NATURAL,
    SI,
    acoustic_metric_at,
    alpha_for_temperature,
    find_horizon,
    find_horizons,
    hawking_temperature,
    load_profile,
    madelung_decompose,
    near_horizon_metric,
    validate_stationary_flow,
)
from sonicport.errors import (
    AtHorizon,
    GridTooSmall,
    NoHorizon,
    NonPositiveAlpha,
    NonTransonic,
    OutOfDomain,
    ZeroAmplitude,
)
from sonicport.units import UnitSystem


# -- madelung_decompose -------------------------------------------------------

def test_plane_wave_has_uniform_velocity():
    x = np.linspace(0.0, 3.0, 151)
    density, velocity = madelung_decompose(np.exp(2j * x), x)
    np.testing.assert_allclose(density, 1.0, atol=1e-14)
    np.testing.assert_allclose(velocity, 2.0, atol=1e-11)


def test_phase_wraps_are_unwrapped():
    # 2*pi*5 of total phase: several wraps of np.angle
    x = np.linspace(0.0, 1.0, 401)
    _, velocity = madelung_decompose(np.exp(10j * np.pi * x), x)
    np.testing.assert_allclose(velocity, 10 * np.pi, rtol=1e-10)


def test_real_wavefunction_is_at_rest():
    x = np.linspace(1.0, 2.0, 11)
    density, velocity = madelung_decompose(np.full(11, 0.3 + 0j), x)
    np.testing.assert_allclose(density, 0.09)
    np.testing.assert_array_equal(velocity, 0.0)


def test_hbar_over_mass_scales_velocity():
    x = np.linspace(0.0, 1.0, 51)
    units = UnitSystem("custom", hbar=2.0, boltzmann=1.0, mass=4.0)
    _, velocity = madelung_decompose(np.exp(3j * x), x, units)
    np.testing.assert_allclose(velocity, 1.5, atol=1e-12)


def _infall_wavefunction(r):
    # density 1/r^2 and phase S = m c R^2 / r with hbar = m = c = R = 1
    return np.exp(1j / r) / r


def test_infall_velocity_converges_at_second_order():
    errors = []
    for n in (201, 401, 801):
        r = np.linspace(1.0, 2.0, n)
        density, velocity = madelung_decompose(_infall_wavefunction(r), r)
        np.testing.assert_allclose(density, 1 / r**2, rtol=1e-13)
        errors.append(np.max(np.abs(velocity - (-1 / r**2))))
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(np.abs(orders - 2) < 0.15), orders
    assert errors[-1] < 1e-5


def test_vanishing_amplitude_is_rejected():
    x = np.linspace(-1, 1, 5)
    with pytest.raises(ZeroAmplitude):
        madelung_decompose(x.astype(complex), x)


def test_two_samples_are_not_enough():
    with pytest.raises(GridTooSmall):
        madelung_decompose(np.ones(2, complex), np.array([0.0, 1.0]))


def test_coarse_phase_sampling_warns():
    x = np.linspace(0, 1, 6)
    with pytest.warns(RuntimeWarning, match="unwrapping"):
        madelung_decompose(np.exp(12j * x), x)


# -- validate_stationary_flow -------------------------------------------------

def test_inverse_square_inflow_is_steady():
    report = validate_stationary_flow(FlowProfile.powerlaw(1.0, 1.0, 2.0))
    assert report.residual < 1e-12
    assert report.passed and not report.advisory


def test_linear_expansion_is_advisory_with_known_residual():
    c, R, alpha = 1.0, 2.0, 0.5
    p = FlowProfile.linear(c, R, alpha)
    report = validate_stationary_flow(p)
    r = p.grid
    v = -c + alpha * (r - R)
    exact = np.abs(2 * r * v + alpha * r**2) / np.max(np.abs(r**2 * v))
    assert report.advisory and not report.passed
    np.testing.assert_allclose(report.residual, exact.max(), rtol=1e-5)


def test_perturbation_residual_is_local():
    r = np.linspace(1.0, 3.0, 201)
    v = -1.0 / r**2
    v[120] *= 1.01
    report = validate_stationary_flow(FlowProfile.tabulated(r, np.ones_like(r), v, 1.0))
    assert abs(int(np.argmax(report.pointwise)) - 120) <= 1
    far = np.r_[report.pointwise[:115], report.pointwise[126:]]
    assert far.max() < 1e-10


def test_madelung_then_continuity_residual_is_second_order():
    # rho = 1, v = -A/r^2 from phase S = A/r.  Stacked one-sided differences
    # lose an order at the two end nodes, so look at the interior.
    residuals = []
    for n in (101, 201, 401):
        r = np.linspace(1.0, 2.0, n)
        rho, v = madelung_decompose(np.exp(0.7j / r), r)
        report = validate_stationary_flow(FlowProfile.tabulated(r, rho, v, 1.0))
        residuals.append(report.pointwise[2:-2].max())
    assert residuals[0] / residuals[1] > 3.5
    assert residuals[1] / residuals[2] > 3.5


# -- metric -------------------------------------------------------------------

def test_static_fluid_is_flat():
    r = np.linspace(1, 2, 11)
    m = acoustic_metric_at(FlowProfile.tabulated(r, np.ones(11), np.zeros(11), 1.0), 1.5)
    assert m.g_tt == pytest.approx(1.0)
    assert m.g_rr == pytest.approx(-1.0)


def test_horizon_is_flagged_not_infinite():
    m = acoustic_metric_at(FlowProfile.linear(1.0, 2.0, 0.5), 2.0)
    assert m.at_horizon and m.g_tt == 0.0 and m.g_rr is None


def test_linear_profile_metric_against_near_horizon_form():
    p = FlowProfile.linear(1.0, 2.0, 0.5)
    exact = acoustic_metric_at(p, 2.1)
    near = near_horizon_metric(find_horizon(p), 1.0, 1.0, 2.1)
    assert exact.g_tt == pytest.approx(0.0975, abs=1e-15)
    assert near.g_tt == pytest.approx(0.1, abs=1e-15)
    # the two differ by rho alpha^2 (r-R)^2 / c
    assert near.g_tt - exact.g_tt == pytest.approx(0.0025, abs=1e-15)


def test_out_of_domain_tabulated():
    r = np.linspace(1, 2, 11)
    p = FlowProfile.tabulated(r, np.ones(11), -np.ones(11) * 0.5, 1.0)
    with pytest.raises(OutOfDomain):
        acoustic_metric_at(p, 2.5)


def _horizon(r_h=1.0, alpha=0.5):
    return HorizonData(r_H=r_h, alpha=alpha, temperature=hawking_temperature(alpha),
                       density=1.0, sound_speed=1.0)


def test_near_horizon_substitution():
    m = near_horizon_metric(_horizon(), 1.0, 1.0, 1.1)
    assert m.g_tt == pytest.approx(0.1)
    assert m.g_rr == pytest.approx(-10.0)


@pytest.mark.parametrize("eps", [1e-3, 1e-6, 1e-9])
def test_near_horizon_limit(eps):
    m = near_horizon_metric(_horizon(), 1.0, 1.0, 1.0 + eps)
    assert 0 < m.g_tt < 2 * eps
    assert m.g_rr < -0.9 / eps


def test_signature_flips_inside():
    m = near_horizon_metric(_horizon(), 1.0, 1.0, 0.95)
    assert m.g_tt < 0 and m.g_rr > 0


def test_exactly_on_horizon_raises():
    with pytest.raises(AtHorizon):
        near_horizon_metric(_horizon(), 1.0, 1.0, 1.0)


def test_far_from_horizon_warns():
    with pytest.warns(RuntimeWarning, match="10%"):
        near_horizon_metric(_horizon(), 1.0, 1.0, 1.5)


profiles = st.one_of(
    st.builds(
        FlowProfile.linear,
        c=st.floats(0.1, 10), R=st.floats(0.5, 10), alpha=st.floats(1e-3, 1e3),
        rho0=st.floats(1e-3, 1e3), num=st.just(51),
    ),
    st.builds(
        FlowProfile.powerlaw,
        c=st.floats(0.1, 10), R=st.floats(0.5, 10), exponent=st.floats(0.5, 4),
        rho0=st.floats(1e-3, 1e3), num=st.just(51),
    ),
)


@settings(max_examples=200, deadline=None)
@given(profiles, st.floats(0, 1))
def test_metric_component_product(profile, u):
    lo, hi = profile.domain
    r = lo + u * (hi - lo)
    m = acoustic_metric_at(profile, r)
    rho = float(profile.density_at(r))
    if m.at_horizon:
        return
    assert m.g_tt * m.g_rr == pytest.approx(-rho * rho, rel=1e-12)


@pytest.mark.parametrize("profile", [
    FlowProfile.linear(1.0, 2.0, 0.5),
    FlowProfile.powerlaw(1.3, 1.0, 2.0, rho0=2.0),
])
def test_near_horizon_agreement_is_second_order(profile):
    h = find_horizon(profile)
    deltas = np.geomspace(1e-4, 1e-2, 12)
    diffs = [
        abs(acoustic_metric_at(profile, h.r_H + d).g_tt
            - near_horizon_metric(h, h.density, h.sound_speed, h.r_H + d).g_tt)
        for d in deltas
    ]
    slope = np.polyfit(np.log(deltas), np.log(diffs), 1)[0]
    assert abs(slope - 2) <= 0.1


# -- find_horizon -------------------------------------------------------------

def test_linear_profile_horizon():
    h = find_horizon(FlowProfile.linear(1.0, 2.0, 0.5))
    assert h.r_H == pytest.approx(2.0, abs=1e-12)
    assert h.alpha == pytest.approx(0.5, abs=1e-12)
    assert h.is_event_horizon


def test_inverse_square_inflow_horizon():
    h = find_horizon(FlowProfile.powerlaw(1.0, 1.0, 2.0))
    assert h.r_H == pytest.approx(1.0, abs=1e-12)
    assert h.alpha == pytest.approx(2.0, rel=1e-12)


def test_subsonic_everywhere():
    r = np.linspace(1, 2, 21)
    with pytest.raises(NoHorizon):
        find_horizon(FlowProfile.tabulated(r, np.ones(21), np.full(21, -0.5), 1.0))


def test_touching_without_crossing():
    r = np.linspace(1.0, 3.0, 21)
    v = -(1.0 - (r - 2.0) ** 2)
    with pytest.raises(NonTransonic):
        find_horizon(FlowProfile.tabulated(r, np.ones(21), v, 1.0))


def test_multiple_horizons_sorted_with_outermost_flagged():
    # linear flow through both v = -c (at R) and v = +c (at R + 2c/alpha)
    p = FlowProfile.linear(1.0, 2.0, 0.5, grid=np.linspace(1.0, 8.0, 701))
    hs = find_horizons(p)
    assert [h.r_H for h in hs] == pytest.approx([2.0, 6.0], abs=1e-12)
    assert [h.is_event_horizon for h in hs] == [False, True]
    assert find_horizon(p).r_H == pytest.approx(6.0)


def test_tabulated_inverse_square_uses_finite_differences():
    r = np.linspace(0.5, 2.0, 3001)
    h = find_horizon(FlowProfile.tabulated(r, np.ones_like(r), -1.0 / r**2, 1.0))
    assert h.r_H == pytest.approx(1.0, abs=1e-12)
    assert h.alpha == pytest.approx(2.0, abs=1e-8)


def test_tabulated_nonuniform_grid():
    r = np.sort(np.r_[np.linspace(0.5, 2.0, 1501), 1.00037])
    h = find_horizon(FlowProfile.tabulated(r, np.ones_like(r), -1.0 / r**2, 1.0))
    assert h.alpha == pytest.approx(2.0, rel=1e-7)


def test_load_profile_reads_commented_columns(tmp_path):
    r = np.linspace(0.5, 2.0, 301)
    path = tmp_path / "flow.txt"
    np.savetxt(path, np.c_[r, np.ones_like(r), -2.0 / r**2], header="r rho0 v0")
    p = load_profile(path, sound_speed=2.0)
    h = find_horizon(p)
    assert p.kind == "tabulated"
    assert h.r_H == pytest.approx(1.0, abs=1e-10)


# -- temperature --------------------------------------------------------------

def test_natural_unit_temperature():
    assert hawking_temperature(2 * math.pi) == 1.0
    assert hawking_temperature(1.0) == pytest.approx(0.15915494, abs=5e-9)


def test_si_200_nanokelvin():
    alpha = alpha_for_temperature(200e-9, SI)
    assert alpha == pytest.approx(1.6452e5, rel=5e-5)
    assert hawking_temperature(alpha, SI) == pytest.approx(200e-9, rel=1e-12)


@given(st.floats(1e-12, 1e12), st.sampled_from([NATURAL, SI]))
def test_temperature_round_trip(T, units):
    assert hawking_temperature(alpha_for_temperature(T, units), units) == pytest.approx(T, rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_non_positive_alpha(bad):
    with pytest.raises(NonPositiveAlpha):
        hawking_temperature(bad)
