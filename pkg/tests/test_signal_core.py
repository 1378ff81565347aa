import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paritymodes import (DiscreteSignal, SignalFormatError, interpolant_derivative_eval,
                         interpolant_eval, parity_decompose)
from paritymodes.cli_io.generators import example_components, example_signal


def signals(min_l=1, max_l=40):
    """Random odd-length signals with a random sampling period."""
    return st.builds(
        lambda l, dt, seed: DiscreteSignal(np.random.default_rng(seed).standard_normal(2 * l + 1), dt),
        st.integers(min_l, max_l), st.floats(1e-3, 5.0), st.integers(0, 2**32 - 1))


def brute_sinc(u, t):
    # Independent route: np.sinc uses sin(pi x)/(pi x).
    k = u.indices
    return np.array([np.sum(u.samples * np.sinc((tt - k * u.dt) / u.dt)) for tt in np.atleast_1d(t)])


class TestDiscreteSignal:
    def test_derived_quantities(self):
        u = DiscreteSignal(np.zeros(201), 0.01)
        assert u.l == 100
        assert u.duration == pytest.approx(2.0)
        assert u.nyquist == pytest.approx(np.pi / 0.01)
        assert u.epsilon == pytest.approx(np.pi)
        assert u.times[0] == pytest.approx(-1.0) and u.times[100] == 0.0

    @pytest.mark.parametrize("bad", [np.zeros(4), np.zeros(1), np.array([1.0, np.nan, 2.0]),
                                     np.array([1.0, np.inf, 2.0]), np.zeros((3, 3))])
    def test_rejects_invalid_samples(self, bad):
        with pytest.raises(SignalFormatError):
            DiscreteSignal(bad, 1.0)

    @pytest.mark.parametrize("dt", [0.0, -1.0, np.nan])
    def test_rejects_invalid_dt(self, dt):
        with pytest.raises(SignalFormatError):
            DiscreteSignal(np.zeros(3), dt)

    def test_samples_read_only(self):
        u = DiscreteSignal([1.0, 2.0, 3.0], 1.0)
        with pytest.raises(ValueError):
            u.samples[0] = 5.0


class TestParity:
    def test_symmetric_input(self):
        p = parity_decompose(DiscreteSignal([1.0, 2.0, 1.0], 1.0))
        np.testing.assert_array_equal(p.even.samples, [1, 2, 1])
        np.testing.assert_array_equal(p.odd.samples, [0, 0, 0])

    def test_antisymmetric_input(self):
        p = parity_decompose(DiscreteSignal([1.0, 0.0, -1.0], 1.0))
        np.testing.assert_array_equal(p.even.samples, [0, 0, 0])
        np.testing.assert_array_equal(p.odd.samples, [1, 0, -1])

    def test_six_component_example_splits_into_cosines_and_sines(self):
        comps = example_components(6)
        p = parity_decompose(example_signal(6))
        np.testing.assert_allclose(p.even.samples, comps["d1"] + comps["d2"], atol=1e-13)
        np.testing.assert_allclose(p.odd.samples, comps["q1"] + comps["q2"] + comps["q3"], atol=1e-13)

    @given(signals())
    def test_round_trip_and_symmetry(self, u):
        p = parity_decompose(u)
        np.testing.assert_allclose(p.even.samples + p.odd.samples, u.samples, rtol=0, atol=1e-15 * (1 + np.abs(u.samples).max()))
        np.testing.assert_array_equal(p.even.samples, p.even.samples[::-1])
        np.testing.assert_array_equal(p.odd.samples, -p.odd.samples[::-1])
        assert p.odd.samples[u.l] == 0.0

    @given(signals())
    def test_idempotence(self, u):
        p = parity_decompose(u)
        assert not np.any(parity_decompose(p.even).odd.samples)
        assert not np.any(parity_decompose(p.odd).even.samples)


class TestInterpolant:
    @given(signals())
    def test_exact_at_nodes(self, u):
        np.testing.assert_array_equal(interpolant_eval(u, u.times), u.samples)

    def test_origin_and_zero_signal(self):
        u = DiscreteSignal([0.3, -1.2, 2.5, 0.7, 0.1], 0.5)
        assert interpolant_eval(u, 0.0) == 2.5
        z = DiscreteSignal(np.zeros(7), 0.2)
        assert np.all(interpolant_eval(z, np.linspace(-3, 3, 50)) == 0.0)
        assert np.all(interpolant_derivative_eval(z, np.linspace(-3, 3, 50)) == 0.0)

    def test_random_example_midpoints_match_brute_force(self):
        u = example_signal(0)
        assert u.n == 21 and u.half_span == pytest.approx(30.0)
        t = np.linspace(-30, 30, 10 * 20 + 1)
        np.testing.assert_allclose(interpolant_eval(u, t), brute_sinc(u, t), atol=1e-12)

    def test_scalar_in_scalar_out(self):
        u = example_signal(0)
        assert np.ndim(interpolant_eval(u, 1.5)) == 0
        assert np.ndim(interpolant_derivative_eval(u, 1.5)) == 0

    @settings(max_examples=30)
    @given(signals(), st.floats(-2, 2), st.floats(-2, 2), st.integers(0, 1000))
    def test_linearity(self, u, a, b, seed):
        v = u.with_samples(np.random.default_rng(seed).standard_normal(u.n))
        t = np.linspace(-u.half_span, u.half_span, 37) * 1.1
        lhs = interpolant_eval(u.with_samples(a * u.samples + b * v.samples), t)
        rhs = a * interpolant_eval(u, t) + b * interpolant_eval(v, t)
        scale = abs(a) * np.abs(u.samples).sum() + abs(b) * np.abs(v.samples).sum() + 1e-300
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale

    def test_derivative_at_even_extremum(self):
        t = np.arange(-100, 101) * 0.01
        u = DiscreteSignal(np.cos(2 * np.pi * t), 0.01)
        assert abs(interpolant_derivative_eval(u, 0.0)) < 1e-6 * 2 * np.pi

    def test_derivative_matches_finite_differences(self):
        rng = np.random.default_rng(11)
        u = DiscreteSignal(rng.standard_normal(41), 0.1)
        t = rng.uniform(-u.half_span, u.half_span, 100)
        h = 1e-5 * u.dt
        fd = (interpolant_eval(u, t + h) - interpolant_eval(u, t - h)) / (2 * h)
        an = interpolant_derivative_eval(u, t)
        scale = np.max(np.abs(an))
        np.testing.assert_allclose(an, fd, rtol=1e-5, atol=1e-5 * scale)

    def test_derivative_near_nodes_is_continuous(self):
        rng = np.random.default_rng(3)
        u = DiscreteSignal(rng.standard_normal(15), 0.25)
        for k in (-3, 0, 2):
            tk = k * u.dt
            at = interpolant_derivative_eval(u, tk)
            near = interpolant_derivative_eval(u, tk + 1e-9 * u.dt)
            assert near == pytest.approx(at, rel=1e-6, abs=1e-9)
