import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import optimize, stats

from rqit.qstate import ValidationError
from rqit.relclassical import (
    REST_FRAME_MI,
    VelocityEnsemble,
    awng_capacity,
    boost_ensemble,
    boost_velocities,
    doppler_factor,
    histogram_mutual_information,
    infinite_bandwidth_capacity,
    ksg_mutual_information,
    moving_temperature,
    no_shift_angle,
    planar_mutual_information,
    sample_bounded_planar_ensemble,
    stream_rng,
    temperature_anisotropy,
)


def test_capacity_examples():
    assert awng_capacity(1, 3, 1) == 2.0
    assert np.isclose(awng_capacity(10, 1, 0.5), 10 * math.log2(1.5))
    assert awng_capacity(1, 3, 1e-300) < 1e-299
    with pytest.raises(ValidationError):
        awng_capacity(1, 1, 0)


@settings(max_examples=50, deadline=None)
@given(
    W=st.floats(0.1, 1e3), snr=st.floats(0.01, 1e3), alpha=st.floats(0.01, 2.0), f=st.floats(1.01, 3.0)
)
def test_capacity_monotone(W, snr, alpha, f):
    c = awng_capacity(W, snr, alpha)
    assert awng_capacity(W * f, snr, alpha) > c
    assert awng_capacity(W, snr * f, alpha) > c
    assert awng_capacity(W, snr, alpha * f) > c


def test_infinite_bandwidth_limit():
    assert np.isclose(infinite_bandwidth_capacity(1.0, 1.0), 1.4427, atol=1e-4)
    assert infinite_bandwidth_capacity(5.0, 0.0) == 0.0
    for alpha in (0.3, 1.0):
        limit = infinite_bandwidth_capacity(2.0, alpha)
        gaps = [abs(awng_capacity(W, 2.0 / W, alpha) - limit) for W in (1e3, 1e6, 1e9)]
        assert gaps[-1] < 1e-6 and gaps[0] > gaps[1] > gaps[2]


def test_doppler_examples():
    assert doppler_factor(0.0) == 1.0
    assert np.isclose(doppler_factor(0.6), 0.5)
    assert np.isclose(doppler_factor(0.6, math.pi), math.sqrt(0.4 / 1.6))
    assert doppler_factor(1 - 1e-12) < 2e-6
    with pytest.raises(ValidationError):
        doppler_factor(1.0)


def test_moving_temperature_examples():
    assert moving_temperature(3.0, 0.0, 1.1) == 3.0
    assert moving_temperature(1.0, 0.6, 0.0) == 2.0
    tmax, tmin, flag = temperature_anisotropy(1.0, 0.6)
    assert flag and np.isclose(tmax, 2.0) and np.isclose(tmin, 0.5)
    assert not temperature_anisotropy(1.0, 0.0)[2]


@pytest.mark.parametrize("beta", [0.1, 0.5, 0.9, 0.99])
def test_no_shift_angle_is_a_root(beta):
    theta = no_shift_angle(beta)
    assert np.isclose(moving_temperature(1.0, beta, theta), 1.0, atol=1e-12)
    root = optimize.brentq(lambda t: moving_temperature(1.0, beta, t) - 1.0, 1e-9, math.pi)
    assert np.isclose(root, theta, atol=1e-9)


def test_ensemble_sampling():
    e = sample_bounded_planar_ensemble(100_000, seed=11)
    assert np.all(np.hypot(e.v[:, 0], e.v[:, 1]) < 1)
    assert np.all(np.abs(e.v.mean(axis=0)) < 3 / math.sqrt(e.n))
    # v_x follows the semicircle law 2 sqrt(1 - x^2) / pi
    cdf = lambda x: 0.5 + (x * np.sqrt(1 - x * x) + np.arcsin(x)) / math.pi
    assert stats.kstest(e.v[:, 0], cdf).pvalue > 1e-3
    again = sample_bounded_planar_ensemble(100_000, seed=11)
    assert np.array_equal(e.v, again.v)
    with pytest.raises(ValidationError):
        sample_bounded_planar_ensemble(999, seed=0)


def test_sampling_independent_of_chunking_boundary():
    a = sample_bounded_planar_ensemble(5000, seed=3, chunk=1000)
    b = sample_bounded_planar_ensemble(3000, seed=3, chunk=1000)
    assert np.array_equal(a.v[:3000], b.v)


def test_ensemble_rejects_superluminal():
    with pytest.raises(ValidationError):
        VelocityEnsemble(np.array([[0.8, 0.6]]))


def test_boost_examples():
    assert np.allclose(boost_velocities(np.array([[0.0, 0.0]]), 0.5), [[-0.5, 0.0]])
    e = sample_bounded_planar_ensemble(10_000, seed=1)
    assert np.array_equal(boost_ensemble(e, 0.0).v, e.v)
    back = boost_velocities(boost_velocities(e.v, 0.7), -0.7)
    assert np.max(np.abs(back - e.v)) < 1e-12
    with pytest.raises(ValidationError):
        boost_ensemble(e, 1.0)


@pytest.mark.parametrize("beta", [0.5, 0.9, 0.99])
def test_boost_stays_subluminal(beta):
    rng = stream_rng(5, 0)
    r, phi = np.sqrt(rng.random(1_000_000)), 2 * math.pi * rng.random(1_000_000)
    v = np.column_stack((r * np.cos(phi), r * np.sin(phi)))
    out = boost_velocities(v, beta)
    assert np.all(np.einsum("ij,ij->i", out, out) < 1)


def test_ksg_on_correlated_gaussians():
    rng = stream_rng(2, 0)
    rho = 0.6
    x = rng.normal(size=50_000)
    y = rho * x + math.sqrt(1 - rho**2) * rng.normal(size=50_000)
    exact = -0.5 * math.log(1 - rho**2)
    value, se = ksg_mutual_information(x, y)
    assert abs(value - exact) < 3 * se


def test_independent_control_is_zero():
    rng = stream_rng(4, 0)
    v = 0.1 * rng.normal(size=(200_000, 2))
    est = planar_mutual_information(VelocityEnsemble(v, 4))
    assert abs(est.value) < 3 * est.stderr
    assert abs(est.histogram_value) < 3 * est.histogram_stderr


def test_mi_scale_invariance():
    e = sample_bounded_planar_ensemble(100_000, seed=8)
    a = planar_mutual_information(e)
    b = planar_mutual_information(VelocityEnsemble(0.5 * e.v, 8))
    assert abs(a.value - b.value) <= 2 * a.stderr
    assert abs(a.histogram_value - b.histogram_value) < 1e-12


def test_mi_rest_frame_moderate_n():
    est = planar_mutual_information(sample_bounded_planar_ensemble(200_000, seed=21))
    assert abs(est.value - REST_FRAME_MI) < 3 * est.stderr
    assert est.estimators_agree


def test_mi_rejects_small_or_degenerate():
    with pytest.raises(ValidationError):
        planar_mutual_information(sample_bounded_planar_ensemble(5000, seed=0))
    v = np.zeros((20_000, 2))
    v[:, 1] = np.linspace(-0.5, 0.5, 20_000)
    with pytest.raises(ValidationError):
        planar_mutual_information(VelocityEnsemble(v))


def test_histogram_estimator_error_bar_covers_truth():
    e = sample_bounded_planar_ensemble(200_000, seed=13)
    value, se = histogram_mutual_information(e.v[:, 0], e.v[:, 1])
    assert abs(value - REST_FRAME_MI) < 3 * se


def test_units():
    e = sample_bounded_planar_ensemble(20_000, seed=9)
    nats = planar_mutual_information(e, n_boot=10)
    bits = planar_mutual_information(e, n_boot=10, unit="bits")
    assert np.isclose(bits.value * math.log(2), nats.value, rtol=1e-14)


def test_ksg_error_bar_covers_truth_across_seeds():
    # the halving term must absorb the sharp-edge bias at moderate n
    hits = 0
    for s in range(8):
        e = sample_bounded_planar_ensemble(50_000, seed=300 + s)
        value, se = ksg_mutual_information(e.v[:, 0], e.v[:, 1])
        hits += abs(value - REST_FRAME_MI) < 2 * se
    assert hits >= 6
