"""Conditional-SER kernels against independent high-precision oracles."""

import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import i0e

from greenlink import _kernels

mp.mp.dps = 60

GAMMAS = np.array([0.0, 0.2, 1.0, 3.7, 10.0, 40.0, 100.0, 333.0, 700.0])


def orth_ser_mp(gamma, m):
    """Direct alternating sum in 60-digit arithmetic."""
    n = m - 1
    g = mp.mpf(gamma)
    acc = mp.mpf(0)
    for k in range(1, n + 1):
        acc += (-1) ** (k + 1) * mp.binomial(n, k) / (k + 1) * mp.e ** (-k * g / (k + 1))
    return float(acc)


def orth_ser_bessel_integral(gamma, m):
    """Envelope-detector integral with the scaled Bessel function.

    P_c = int_0^inf u I0(u sqrt(2 g)) e^{-(u^2 + 2g)/2} (1 - e^{-u^2/2})^{M-1} du
    """
    c = math.sqrt(2.0 * gamma)

    def f(u):
        expo = -0.5 * (u - c) ** 2
        return u * i0e(u * c) * math.exp(expo) * (1.0 - math.exp(-0.5 * u * u)) ** (m - 1)

    val, _ = quad(f, 0.0, c + 40.0, epsabs=1e-13, epsrel=1e-12, limit=200)
    return 1.0 - val


class TestOrthogonalSer:
    @pytest.mark.parametrize("m", [2, 4, 8, 16, 32, 64])
    def test_matches_high_precision_sum(self, m):
        got = _kernels.orth_ser(GAMMAS, m)
        for g, v in zip(GAMMAS, got):
            ref = orth_ser_mp(g, m)
            assert v == pytest.approx(ref, rel=5e-13, abs=1e-300)

    def test_matches_bessel_integral_m4(self):
        # the two exact representations of the same law must agree
        got = float(_kernels.orth_ser(np.array([10.0]), 4)[0])
        assert abs(got - orth_ser_bessel_integral(10.0, 4)) < 1e-8

    @pytest.mark.parametrize("m,g", [(2, 0.5), (16, 3.0), (64, 10.0), (64, 120.0)])
    def test_matches_bessel_integral_grid(self, m, g):
        got = float(_kernels.orth_ser(np.array([g]), m)[0])
        assert got == pytest.approx(orth_ser_bessel_integral(g, m), rel=1e-9, abs=1e-12)

    def test_zero_snr_is_random_guess(self):
        for m in (2, 4, 64):
            assert float(_kernels.orth_ser(np.array([0.0]), m)[0]) == pytest.approx(
                1.0 - 1.0 / m, rel=1e-15
            )

    def test_numpy_fallback_agrees(self):
        for m in (2, 8, 64):
            a = _kernels.orth_ser(GAMMAS, m)
            b = _kernels._orth_ser_numpy(np.asarray(GAMMAS, dtype=np.float64), m)
            np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-300)


class TestCoherentMfskSer:
    def test_zero_snr(self):
        for m in (2, 4, 64):
            got = float(_kernels.coh_mfsk_ser(np.array([0.0]), m)[0])
            assert got == pytest.approx(1.0 - 1.0 / m, abs=1e-9)

    def test_binary_matches_q_function(self):
        # M=2 coherent orthogonal: P_s = Q(sqrt(gamma))
        g = np.array([0.5, 2.0, 9.0, 25.0])
        got = _kernels.coh_mfsk_ser(g, 2)
        ref = 0.5 * np.array([math.erfc(math.sqrt(x / 2.0)) for x in g])
        np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-14)

    @pytest.mark.parametrize("m", [4, 16, 64])
    def test_node_count_converged_vs_refinement(self, m):
        g = np.linspace(0.0, 60.0, 41)
        v = _kernels._coh_mfsk_ser_numpy(g, m)
        ref = _kernels._coh_mfsk_ser_numpy(g, m, _kernels._GH_X_REF, _kernels._GH_WN_REF)
        np.testing.assert_allclose(v, ref, atol=1e-9)

    def test_against_high_precision_values(self):
        # 40-digit quadrature of the defining integral, frozen
        cases = {
            (4, 5.0): 0.033164957234852129,
            (16, 5.0): 0.1061280563459027,
            (64, 30.0): 1.323653072164053e-6,
        }
        for (m, g), ref in cases.items():
            got = float(_kernels.coh_mfsk_ser(np.array([g]), m)[0])
            assert got == pytest.approx(ref, abs=1e-9)

    def test_numpy_fallback_agrees(self):
        g = np.linspace(0.0, 50.0, 23)
        np.testing.assert_allclose(
            _kernels.coh_mfsk_ser(g, 16), _kernels._coh_mfsk_ser_numpy(g, 16), atol=1e-13
        )

    def test_monotone_decreasing(self):
        g = np.linspace(0.0, 30.0, 61)
        v = _kernels.coh_mfsk_ser(g, 8)
        assert np.all(np.diff(v) < 0.0)


class TestMarcumQ1:
    def test_edges(self):
        assert _kernels.marcum_q1_scalar(3.0, 0.0) == 1.0
        assert _kernels.marcum_q1_scalar(0.0, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-14)

    def test_reference_value(self):
        assert _kernels.marcum_q1_scalar(1.0, 1.0) == pytest.approx(0.7328798037, abs=1e-10)

    @pytest.mark.parametrize(
        "a,b",
        [(0.5, 0.1), (1.0, 2.0), (2.0, 1.0), (5.0, 5.0), (10.0, 3.0), (3.0, 10.0),
         (20.0, 22.0), (40.0, 38.0), (60.0, 60.0), (30.0, 0.1)],
    )
    def test_against_defining_integral(self, a, b):
        def f(x):
            return x * i0e(a * x) * math.exp(a * x - 0.5 * (x * x + a * a))

        ref, _ = quad(f, b, b + max(8.0 * a, 40.0), epsabs=1e-13, epsrel=1e-12, limit=300)
        assert abs(_kernels.marcum_q1_scalar(a, b) - ref) < 1e-10


class TestDoqpskSer:
    def test_zero_snr_is_one(self):
        assert float(_kernels.doqpsk_ser(np.array([0.0]))[0]) == 1.0

    def test_matches_scalar_marcum_composition(self):
        c1 = (2.0 + math.sqrt(2.0)) / 4.0
        c2 = (2.0 - math.sqrt(2.0)) / 4.0
        g = np.array([0.5, 2.0, 10.0, 50.0, 200.0])
        got = _kernels.doqpsk_ser(g)
        for x, v in zip(g, got):
            a, b = math.sqrt(c1 * x), math.sqrt(c2 * x)
            ref = 1.0 - _kernels.marcum_q1_scalar(a, b) + _kernels.marcum_q1_scalar(b, a)
            assert v == pytest.approx(ref, rel=1e-9, abs=1e-12)

    def test_numpy_fallback_agrees(self):
        g = np.array([0.0, 0.5, 2.0, 10.0, 50.0, 200.0, 400.0])
        np.testing.assert_allclose(
            _kernels.doqpsk_ser(g), _kernels._doqpsk_ser_numpy(g), rtol=1e-9, atol=1e-12
        )


class TestElementwiseKernels:
    def test_mqam_reference(self):
        # a = 1 - 1/sqrt(M); Q = Q(sqrt(3 g/(M-1)))
        g = np.array([0.0, 4.0, 30.0])
        got = _kernels.mqam_ser(g, 4)
        for x, v in zip(g, got):
            q = 0.5 * math.erfc(math.sqrt(x / 2.0))
            assert v == pytest.approx(2.0 * q - q * q, rel=1e-13)

    def test_ook_reference(self):
        g = np.array([0.0, 2.0, 10.0])
        np.testing.assert_allclose(_kernels.ook_ser(g), 0.5 * np.exp(-0.5 * g), rtol=1e-15)

    def test_all_kernels_in_unit_interval(self):
        g = np.linspace(0.0, 500.0, 101)
        for vals in (
            _kernels.orth_ser(g, 64),
            _kernels.coh_mfsk_ser(g, 64),
            _kernels.mqam_ser(g, 64),
            _kernels.doqpsk_ser(g),
            _kernels.ook_ser(g),
        ):
            assert np.all(vals >= 0.0) and np.all(vals <= 1.0)
