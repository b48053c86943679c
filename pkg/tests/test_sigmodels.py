"""Tests for the ADC/IVIM forward models and Jacobians."""

import math

import numpy as np
import pytest

from qfit.sigmodels import (
    ModelKind,
    PARAM_RANGES,
    Protocol,
    adc_signal,
    default_protocol,
    ivim_signal,
    model_signals,
    signal_jacobian,
    signal_jacobians,
)


class TestSignals:
    def test_adc_at_b0(self):
        assert adc_signal((1.0, 1.0), 0.0) == 1.0

    def test_adc_unit_decay(self):
        assert abs(adc_signal((1.0, 1.0), 1.0) - math.exp(-1.0)) < 1e-15

    def test_adc_scaled(self):
        assert abs(adc_signal((1.2, 2.0), 0.5) - 1.2 * math.exp(-1.0)) < 1e-15

    def test_ivim_reduces_to_adc_at_zero_fraction(self):
        b = np.linspace(0.0, 1.0, 11)
        for dp in (10.0, 80.0, 150.0):
            ivim = ivim_signal((1.1, 0.0, dp, 1.3), b)
            adc = adc_signal((1.1, 1.3), b)
            np.testing.assert_array_equal(ivim, adc)

    def test_ivim_at_b0(self):
        assert ivim_signal((0.93, 0.3, 50.0, 1.0), 0.0) == 0.93

    def test_ivim_value(self):
        # 0.3*exp(-2.55) + 0.7*exp(-0.05) = 0.6892850969508458 (mpmath, 16 digits)
        assert abs(ivim_signal((1.0, 0.3, 50.0, 1.0), 0.05) - 0.6892850969508458) < 1e-5

    def test_positive_and_nonincreasing(self):
        rng = np.random.default_rng(3)
        for kind in ModelKind:
            proto = default_protocol(kind)
            ranges = PARAM_RANGES[kind]
            lows = np.array([ranges[p][0] for p in kind.param_names])
            highs = np.array([ranges[p][1] for p in kind.param_names])
            theta = rng.uniform(lows, highs, size=(200, kind.n_params))
            sig = model_signals(theta, proto)
            assert np.all(sig > 0)
            order = np.argsort(proto.b_values)
            assert np.all(np.diff(sig[:, order], axis=1) <= 0)


class TestProtocol:
    def test_requires_b0(self):
        with pytest.raises(ValueError):
            Protocol(np.array([0.1, 0.5, 1.0]), ModelKind.ADC)

    def test_requires_enough_measurements(self):
        with pytest.raises(ValueError):
            Protocol(np.array([0.0, 0.5]), ModelKind.IVIM)

    def test_rejects_negative_b(self):
        with pytest.raises(ValueError):
            Protocol(np.array([0.0, -0.1]), ModelKind.ADC)

    def test_defaults(self):
        adc = default_protocol(ModelKind.ADC)
        np.testing.assert_allclose(adc.b_values, np.linspace(0, 1, 10))
        ivim = default_protocol(ModelKind.IVIM)
        np.testing.assert_allclose(
            ivim.b_values, [0, 0.01, 0.02, 0.03, 0.05, 0.08, 0.1, 0.2, 0.4, 0.8]
        )


class TestJacobian:
    def test_adc_b0_partials(self):
        proto = Protocol(np.array([0.0, 0.5, 1.0]), ModelKind.ADC)
        jac = signal_jacobian(np.array([1.0, 1.5]), proto)
        assert jac[0, 0] == 1.0
        assert jac[0, 1] == 0.0

    def test_ivim_zero_fraction_dp_partial(self):
        proto = default_protocol(ModelKind.IVIM)
        jac = signal_jacobian(np.array([1.0, 0.0, 70.0, 1.0]), proto)
        np.testing.assert_array_equal(jac[:, 2], 0.0)

    @pytest.mark.parametrize("kind", list(ModelKind))
    def test_matches_finite_differences(self, kind):
        rng = np.random.default_rng(11)
        proto = default_protocol(kind)
        ranges = PARAM_RANGES[kind]
        lows = np.array([ranges[p][0] for p in kind.param_names])
        highs = np.array([ranges[p][1] for p in kind.param_names])
        for _ in range(100):
            theta = rng.uniform(lows, highs)
            jac = signal_jacobian(theta, proto)
            for p in range(kind.n_params):
                h = 1e-6 * max(1.0, abs(theta[p]))
                up, dn = theta.copy(), theta.copy()
                up[p] += h
                dn[p] -= h
                fd = (model_signals(up, proto) - model_signals(dn, proto)) / (2 * h)
                scale = np.maximum(np.abs(fd), np.abs(jac[:, p]))
                assert np.all(np.abs(jac[:, p] - fd) <= 1e-6 * np.maximum(scale, 1e-3))

    def test_batched_matches_single(self):
        rng = np.random.default_rng(4)
        proto = default_protocol(ModelKind.IVIM)
        theta = rng.uniform(0.5, 1.5, size=(5, 4))
        batched = signal_jacobians(theta, proto)
        for i in range(5):
            np.testing.assert_array_equal(batched[i], signal_jacobian(theta[i], proto))

    def test_width_mismatch(self):
        proto = default_protocol(ModelKind.ADC)
        with pytest.raises(ValueError):
            model_signals(np.ones((3, 4)), proto)
