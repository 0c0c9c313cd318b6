"""Truncated complex power series at z = 0 and the curve-coordinate expansions.

The coordinate functions expand as

    x(z) = 1 + (4/tan(pi/n)) sum_{p>=1} (-1)^p sin(p pi/n) z^p,
    y(z) = 1 + 4 sum_{p>=1} (-1)^p p exp(i p pi/n) z^p,

and the central objects downstream are the coefficients kappa_p(i0, j0) of
x^{i0} y^{j0} and the odd coefficients nu_{2p+1} of the combined logarithm
ln x + r ln y that steers the descent contour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .uniformization import Uniformization


@dataclass(frozen=True)
class ComplexSeries:
    """Power series known through z^order; higher coefficients are unknown, not zero.

    Arithmetic truncates to the smaller operand order so no unknown
    coefficient is ever read.
    """

    coeffs: np.ndarray  # complex128, length order + 1
    order: int

    @staticmethod
    def from_coeffs(coeffs) -> "ComplexSeries":
        arr = np.asarray(coeffs, dtype=complex)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("series needs a one-dimensional, non-empty coefficient array")
        return ComplexSeries(arr.copy(), arr.size - 1)

    @staticmethod
    def one(order: int) -> "ComplexSeries":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = 1.0
        return ComplexSeries(c, order)

    def __getitem__(self, p: int) -> complex:
        if p > self.order:
            raise IndexError(f"coefficient {p} beyond truncation order {self.order}")
        return complex(self.coeffs[p])

    def truncate(self, order: int) -> "ComplexSeries":
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return ComplexSeries(self.coeffs[: order + 1].copy(), order)

    def __add__(self, other: "ComplexSeries") -> "ComplexSeries":
        m = min(self.order, other.order)
        return ComplexSeries(self.coeffs[: m + 1] + other.coeffs[: m + 1], m)

    def __sub__(self, other: "ComplexSeries") -> "ComplexSeries":
        m = min(self.order, other.order)
        return ComplexSeries(self.coeffs[: m + 1] - other.coeffs[: m + 1], m)

    def scale(self, factor: complex) -> "ComplexSeries":
        return ComplexSeries(self.coeffs * factor, self.order)

    def __mul__(self, other: "ComplexSeries") -> "ComplexSeries":
        m = min(self.order, other.order)
        prod = np.convolve(self.coeffs[: m + 1], other.coeffs[: m + 1])[: m + 1]
        return ComplexSeries(prod, m)

    def __pow__(self, exponent: int) -> "ComplexSeries":
        """Binary powering over Cauchy products (all operands share one order,
        so the min-rule never truncates here)."""
        if exponent < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = ComplexSeries.one(self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def log(self) -> "ComplexSeries":
        """Logarithm of a series with constant term 1, by the standard recurrence."""
        if abs(self.coeffs[0] - 1.0) > 1e-13:
            raise ValueError("log is implemented for constant term 1 only")
        f = self.coeffs
        out = np.zeros_like(f)
        for p in range(1, self.order + 1):
            acc = f[p]
            for k in range(1, p):
                acc -= (k / p) * out[k] * f[p - k]
            out[p] = acc
        return ComplexSeries(out, self.order)


def series_x(u: Uniformization, order: int) -> ComplexSeries:
    """Expansion of x(z) at 0; all coefficients are real."""
    if order < 1:
        raise ValueError("order must be >= 1")
    n = u.n
    p = np.arange(order + 1)
    c = (4.0 / math.tan(math.pi / n)) * (-1.0) ** p * np.sin(p * np.pi / n)
    c = c.astype(complex)
    c[0] = 1.0
    return ComplexSeries(c, order)


def series_y(u: Uniformization, order: int) -> ComplexSeries:
    """Expansion of y(z) at 0."""
    if order < 1:
        raise ValueError("order must be >= 1")
    n = u.n
    p = np.arange(order + 1)
    c = 4.0 * (-1.0 + 0j) ** p * p * np.exp(1j * p * np.pi / n)
    c[0] = 1.0
    return ComplexSeries(c, order)


def kappa(u: Uniformization, i0: int, j0: int, p: int) -> complex:
    """Coefficient of z^p in x(z)^{i0} y(z)^{j0}."""
    if i0 < 0 or j0 < 0 or p < 0:
        raise ValueError("kappa needs i0, j0, p >= 0")
    order = max(p, 1)
    prod = series_x(u, order) ** i0 * series_y(u, order) ** j0
    return prod[p]


def kappa_table(u: Uniformization, imax: int, jmax: int, p: int) -> np.ndarray:
    """kappa_p(i, j) for all 0 <= i <= imax, 0 <= j <= jmax at once.

    Builds cumulative power rows of the two coordinate series and contracts
    them; O((imax + jmax) p^2 + imax jmax p) instead of one Cauchy powering
    per grid point.
    """
    order = max(p, 1)
    xc = series_x(u, order).coeffs
    yc = series_y(u, order).coeffs

    def power_rows(base: np.ndarray, kmax: int) -> np.ndarray:
        rows = np.zeros((kmax + 1, order + 1), dtype=complex)
        rows[0, 0] = 1.0
        for k in range(1, kmax + 1):
            rows[k] = np.convolve(rows[k - 1], base)[: order + 1]
        return rows

    xs = power_rows(xc, imax)
    ys = power_rows(yc, jmax)
    # kappa_p(i, j) = sum_q xs[i, q] ys[j, p - q]
    return np.einsum("iq,jq->ij", xs[:, : p + 1], ys[:, p::-1])


def nu_coefficients(u: Uniformization, ratio: float, count: int) -> np.ndarray:
    """Odd coefficients nu_1, nu_3, ..., nu_{2 count - 1} of ln x + ratio ln y.

    Closed form: nu_{2p+1}(r) = 2/(2p+1) [z0^{2p+1} + conj(z0)^{2p+1}
    + 2 r conj(z0)^{2p+1}]; the even coefficients vanish identically.
    """
    if not math.isfinite(ratio):
        raise ValueError("ratio must be finite")
    z0 = u.z0
    m = 2 * np.arange(count) + 1
    return (2.0 / m) * (z0 ** m + np.conj(z0) ** m * (1.0 + 2.0 * ratio))


def chi_series(u: Uniformization, ratio: float, order: int) -> ComplexSeries:
    """ln x + ratio ln y as a truncated series (cross-check route for nu)."""
    lx = series_x(u, order).log()
    ly = series_y(u, order).log()
    return lx + ly.scale(ratio)
