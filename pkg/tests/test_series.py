import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadrantwalk import (ComplexSeries, chi_series, kappa, kappa_table,
                          nu_coefficients, series_x, series_y)


def coeff_strategy():
    return st.lists(
        st.tuples(st.floats(-5, 5), st.floats(-5, 5)).map(lambda t: complex(*t)),
        min_size=1, max_size=31)


@given(coeff_strategy(), coeff_strategy(), coeff_strategy())
def test_cauchy_product_associative(a, b, c):
    A, B, C = map(ComplexSeries.from_coeffs, (a, b, c))
    left = (A * B) * C
    right = A * (B * C)
    assert left.order == right.order
    scale = np.max(np.abs(left.coeffs)) + 1.0
    assert np.max(np.abs(left.coeffs - right.coeffs)) < 1e-12 * scale


@given(coeff_strategy(), st.integers(0, 6))
def test_power_matches_repeated_product(a, e):
    A = ComplexSeries.from_coeffs(a)
    by_pow = A ** e
    by_mul = ComplexSeries.one(A.order)
    for _ in range(e):
        by_mul = by_mul * A
    scale = np.max(np.abs(by_pow.coeffs)) + 1.0
    assert np.max(np.abs(by_pow.coeffs - by_mul.coeffs)) < 1e-9 * scale


def test_truncation_rules():
    A = ComplexSeries.from_coeffs([1, 2, 3, 4])
    B = ComplexSeries.from_coeffs([1, 1])
    assert (A * B).order == 1
    assert (A + B).order == 1
    with pytest.raises(IndexError):
        (A * B)[2]
    with pytest.raises(ValueError):
        B.truncate(5)


def test_log_inverts_known_exponential():
    # coefficients of exp(2z) truncated; log must return [0, 2, 0, 0, ...]
    coeffs = [2.0 ** p / math.factorial(p) for p in range(12)]
    L = ComplexSeries.from_coeffs(coeffs).log()
    expect = np.zeros(12, dtype=complex)
    expect[1] = 2.0
    assert np.max(np.abs(L.coeffs - expect)) < 1e-12


def test_series_x_coefficients(uniform):
    for n in (3, 4, 5, 8):
        sx = series_x(uniform(n), 3 * n)
        assert sx[0] == 1.0
        assert sx[1] == pytest.approx(-4 * math.cos(math.pi / n), rel=1e-14)
        assert np.max(np.abs(sx.coeffs.imag)) == 0.0
    assert series_x(uniform(4), 4)[2] == pytest.approx(4.0, rel=1e-14)
    assert series_x(uniform(3), 4)[3] == pytest.approx(0.0, abs=1e-14)


def test_series_y_coefficients(uniform):
    for n in (3, 4, 6):
        sy = series_y(uniform(n), 2 * n)
        assert sy[0] == 1.0
        assert sy[1] == pytest.approx(-4 * cmath.exp(1j * math.pi / n), rel=1e-14)
        # coefficient n is real: 4 (-1)^{n+1} n
        assert sy[n] == pytest.approx(4.0 * (-1) ** (n + 1) * n, rel=1e-13)
    assert series_y(uniform(4), 3)[2] == pytest.approx(8j, rel=1e-14)


def _kappa_by_contour(u, i0, j0, pmax, radius=0.05, samples=512):
    theta = 2 * np.pi * np.arange(samples) / samples
    z = radius * np.exp(1j * theta)
    f = u.x_array(z) ** i0 * u.y_array(z) ** j0
    hat = np.fft.fft(f) / samples
    extracted = np.array([hat[p] / radius ** p for p in range(pmax + 1)])
    # extracting coefficient p divides the FFT's roundoff by radius^p, so the
    # comparison below cannot resolve anything under this floor
    noise_floor = np.array([1e-13 * np.max(np.abs(f)) / radius ** p
                            for p in range(pmax + 1)])
    return extracted, noise_floor


def test_kappa_against_numerical_taylor(uniform):
    for n in range(3, 9):
        u = uniform(n)
        for (i0, j0) in ((1, 0), (0, 1), (1, 1), (3, 2), (6, 6)):
            pmax = 3 * n
            reference, floor = _kappa_by_contour(u, i0, j0, pmax)
            for p in range(pmax + 1):
                got = kappa(u, i0, j0, p)
                assert abs(got - reference[p]) < 1e-8 * abs(got) + floor[p]


def test_kappa_base_cases(uniform):
    u = uniform(5)
    for (i0, j0) in ((0, 0), (2, 3), (7, 1)):
        assert kappa(u, i0, j0, 0) == pytest.approx(1.0, abs=1e-14)
    k11 = kappa(u, 1, 1, 1)
    expect = -4 * math.cos(math.pi / 5) - 4 * cmath.exp(1j * math.pi / 5)
    assert abs(k11 - expect) < 1e-13


def test_kappa_reality_and_phase_structure(uniform):
    for n in (3, 4, 6):
        u = uniform(n)
        # x-only coefficients are real for every order
        for i in (1, 2, 5):
            for p in range(0, 2 * n + 1):
                assert abs(kappa(u, i, 0, p).imag) < 1e-12 * max(1.0, abs(kappa(u, i, 0, p)))
        # kappa_n(0, j) is real for every j
        for j in (1, 2, 4):
            v = kappa(u, 0, j, n)
            assert abs(v.imag) < 1e-11 * max(1.0, abs(v))
        # kappa_p(0, j) = phi_p(j) (-1)^p exp(i p pi/n), phi > 0
        for j in (1, 3):
            for p in range(1, 2 * n):
                v = kappa(u, 0, j, p)
                phi = v / ((-1) ** p * cmath.exp(1j * p * math.pi / n))
                assert abs(phi.imag) < 1e-10 * max(1.0, abs(phi))
                assert phi.real > 0


def test_kappa_alternating_signs(uniform):
    for n in (3, 4, 6, 8):
        u = uniform(n)
        for i in (1, 2, 4):
            for p in range(0, n):
                assert (-1) ** p * kappa(u, i, 0, p).real > 0


def test_kappa_table_matches_pointwise(uniform):
    u = uniform(4)
    table = kappa_table(u, 6, 5, 4)
    for i in range(7):
        for j in range(6):
            v = kappa(u, i, j, 4)
            assert abs(table[i, j] - v) < 1e-10 * max(1.0, abs(v))


def test_nu_closed_form(uniform):
    for n in (3, 4, 7):
        u = uniform(n)
        nu = nu_coefficients(u, 0.0, 3)
        assert abs(nu[0] - (-4 * math.cos(math.pi / n))) < 1e-13
        r = 0.75
        nu = nu_coefficients(u, r, 4)
        z0 = u.z0
        for p in range(4):
            m = 2 * p + 1
            expect = 2.0 / m * (z0 ** m + z0.conjugate() ** m * (1 + 2 * r))
            assert abs(nu[p] - expect) < 1e-13


def test_chi_series_is_odd_and_matches_nu(uniform):
    for n in (3, 5):
        u = uniform(n)
        for r in (0.0, 0.4, 2.5):
            order = 9
            chi = chi_series(u, r, order)
            nu = nu_coefficients(u, r, (order + 1) // 2)
            assert abs(chi[0]) < 1e-13
            for p in range(order + 1):
                if p % 2 == 0:
                    assert abs(chi[p]) < 1e-12
                else:
                    assert abs(chi[p] - nu[(p - 1) // 2]) < 1e-12 * max(1.0, abs(nu[(p - 1) // 2]))
