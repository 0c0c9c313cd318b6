import cmath
import math

import numpy as np
import pytest

from quadrantwalk import (ContourSpec, green_asymptotic, green_contour,
                          laplace_leading_term, make_model, saddle_scale,
                          solve_green_box)
from quadrantwalk.contour import _integrand_on_ray, gauss_panel_integral


def test_saddle_scale_limits(uniform):
    for n in (3, 4, 6):
        u = uniform(n)
        data = saddle_scale(u, 0.0)
        assert data.rho == pytest.approx(-1.0 / (4 * math.cos(math.pi / n)), rel=1e-13)
        assert cmath.phase(data.rho) % (2 * math.pi) == pytest.approx(math.pi, rel=1e-12)
        # large slopes steer the angle toward the band edge pi - pi/n
        big = cmath.phase(saddle_scale(u, 1e6).rho) % (2 * math.pi)
        assert big == pytest.approx(math.pi - math.pi / n, abs=1e-4)
        for ratio in (0.1, 0.5, 1.0, 3.0, 20.0):
            ang = cmath.phase(saddle_scale(u, ratio).rho) % (2 * math.pi)
            assert math.pi - math.pi / n < ang <= math.pi
            assert saddle_scale(u, ratio).rho == pytest.approx(
                1.0 / saddle_scale(u, ratio).nu1)


def test_saddle_ratio_one_n4(uniform):
    u = uniform(4)
    z0 = u.z0
    expect = 1.0 / (2.0 * (z0 + 3 * z0.conjugate()))
    got = saddle_scale(u, 1.0).rho
    assert got == pytest.approx(expect, rel=1e-13)
    ang = cmath.phase(got) % (2 * math.pi)
    assert 3 * math.pi / 4 < ang < math.pi


def test_contour_matches_oracle(uniform):
    # the central identity: quadrature of the closed formula reproduces the
    # brute-force lattice values
    for n in (3, 4):
        u = uniform(n)
        g = solve_green_box(make_model(n), 1, 1, 256)
        for (i, j) in ((8, 8), (6, 10), (12, 7)):
            got = green_contour(u, 1, 1, i, j)
            assert got == pytest.approx(g[i, j], rel=1e-5)
    u = uniform(4)
    g = solve_green_box(make_model(4), 2, 1, 256)
    assert green_contour(u, 2, 1, 9, 8) == pytest.approx(g[9, 8], rel=1e-5)


def test_angle_invariance(uniform):
    u = uniform(4)
    lo = math.pi - math.pi / 4
    angles = [lo + k * (math.pi - lo) / 6 for k in range(1, 6)]
    values = [green_contour(u, 1, 1, 8, 8, ContourSpec(angle=a)) for a in angles]
    spread = (max(values) - min(values)) / abs(values[0])
    assert spread < 1e-7


def test_angle_band_enforced(uniform):
    with pytest.raises(ValueError):
        green_contour(uniform(4), 1, 1, 8, 8, ContourSpec(angle=math.pi / 2))


def test_refinement_stall_is_signalled(uniform):
    from quadrantwalk import QuadratureError
    with pytest.raises(QuadratureError):
        green_contour(uniform(4), 1, 1, 8, 8,
                      ContourSpec(rel_tol=1e-16, max_refinements=0))


def test_fold_matches_full_ray(uniform):
    for n in (3, 4):
        u = uniform(n)
        folded = green_contour(u, 1, 1, 8, 8)
        full = green_contour(u, 1, 1, 8, 8, ContourSpec(fold=False))
        assert full == pytest.approx(folded, rel=1e-10)


def test_integrand_decays_along_ray(uniform):
    # |x^i y^j| > 1 strictly on the open ray, so the integrand falls away
    # from its saddle-scale peak
    u = uniform(4)
    i = j = 8
    data = saddle_scale(u, 1.0)
    theta = cmath.phase(data.rho) % (2 * math.pi)
    t_peak = abs(data.rho) * np.array([0.2, 0.5, 1.0]) / i
    peak = np.max(np.abs(_integrand_on_ray(u, 1, 1, i, j, theta, t_peak, 1e-12)[0]))
    far = np.abs(_integrand_on_ray(
        u, 1, 1, i, j, theta, np.array([10.0, 25.0]) * abs(data.rho), 1e-12)[0])
    assert np.all(far < peak)


def test_laplace_term_pairs(harmonic):
    for n in (3, 4, 6):
        h = harmonic(n)
        for (i, j) in ((16, 16), (10, 30), (40, 8)):
            near0, nearinf = laplace_leading_term(h, 1, 1, i, j)
            assert nearinf == near0.conjugate()
            total = near0 + nearinf
            assert abs(total.imag) < 1e-14 * abs(total.real)
            assert total.real == pytest.approx(green_asymptotic(h, 1, 1, i, j),
                                               rel=1e-12)


def test_moment_identity():
    # the k-th descent moment: int_0^T t^k exp(-i t) dt = k!/i^{k+1} once
    # i*T is large; T = eps/|rho| with eps = i^{-3/4} at i = 10^4
    for n in (3, 4):
        k = n - 1
        i = 10_000
        eps = i ** -0.75
        rho_abs = abs(saddle_scale_for(n).rho)
        T = eps / rho_abs
        val = gauss_panel_integral(lambda t: t ** k * np.exp(-i * t), 0.0, T,
                                   panels=400, order=12)
        expect = math.factorial(k) / i ** (k + 1)
        assert abs(val - expect) / expect < 1e-6


def saddle_scale_for(n):
    from quadrantwalk import Uniformization
    return saddle_scale(Uniformization(make_model(n)), 1.0)
