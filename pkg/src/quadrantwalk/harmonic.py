"""The degree-n harmonic polynomial of the walk and its continuum limit.

The value at (i0, j0) is extracted from the z^n coefficient of
x(z)^{i0} y(z)^{j0}:

    value(i0, j0) = n [kappa_n - conj kappa_n] / ((-1)^n i) = 2 n (-1)^n Im kappa_n.

It is the unique (up to scale) positive harmonic function of the killed walk:
zero on the axes, positive inside, and annihilated by the mean-value operator
of the transition kernel.  Scaling loses homogeneity for n >= 5; the
homogeneous dominant term matches the Brownian reduite of the cone of opening
pi/n after the covariance-normalizing change of coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .series import kappa, kappa_table
from .uniformization import Uniformization
from .walk_model import WalkModel


@dataclass
class HarmonicPolynomial:
    """Evaluator with a memo cache over (i0, j0).

    The cache is a plain dict: inserts are idempotent and atomic under
    CPython, so concurrent readers never observe a torn value.
    """

    u: Uniformization
    _cache: dict[tuple[int, int], float] = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.u.n

    @property
    def model(self) -> WalkModel:
        return self.u.model

    def value(self, i0: int, j0: int) -> float:
        """The harmonic polynomial at (i0, j0)."""
        key = (i0, j0)
        got = self._cache.get(key)
        if got is None:
            got = 2.0 * self.n * (-1.0) ** self.n * kappa(self.u, i0, j0, self.n).imag
            self._cache[key] = got
        return got

    def value_raw(self, i0: int, j0: int) -> complex:
        """n (kappa_n - conj kappa_n)/((-1)^n i) without discarding the
        roundoff-level imaginary part (reality check hook)."""
        kn = kappa(self.u, i0, j0, self.n)
        return self.n * (kn - kn.conjugate()) / ((-1.0) ** self.n * 1j)

    def value_grid(self, imax: int, jmax: int) -> np.ndarray:
        """Values on the full grid [0, imax] x [0, jmax] in one pass."""
        table = kappa_table(self.u, imax, jmax, self.n)
        grid = 2.0 * self.n * (-1.0) ** self.n * table.imag
        for i in range(imax + 1):
            for j in range(jmax + 1):
                self._cache.setdefault((i, j), float(grid[i, j]))
        return grid


def closed_form(n: int, i0: float, j0: float) -> float | None:
    """Factored forms known for n in {3, 4, 6}; None otherwise."""
    if n == 3:
        return 24.0 * math.sqrt(3.0) * i0 * j0 * (i0 + 2 * j0)
    if n == 4:
        return (256.0 / 3.0) * i0 * j0 * (i0 + 2 * j0) * (i0 + j0)
    if n == 6:
        return (288.0 / 5.0) * math.sqrt(3.0) * i0 * j0 * (i0 + 2 * j0) * (i0 + j0) * (
            (i0 + 2 * j0 / 3.0) * (i0 + 4 * j0 / 3.0) + 10.0 / 9.0)
    return None


def value_11(n: int) -> float:
    """Closed form at (1, 1): 8 n^3 / tan(pi/n)."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return 8.0 * n ** 3 / math.tan(math.pi / n)


def value_22(n: int) -> float:
    """Closed form at (2, 2): (16/3) n^3 [n^2 + 2 - 6/tan(pi/n)^2] / [sin(pi/n)^2 tan(pi/n)].

    For n >= 5 this breaks the homogeneous scaling value_22 = 2^n value_11,
    witnessing non-homogeneity of the polynomial.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    t = math.tan(math.pi / n)
    s = math.sin(math.pi / n)
    return (16.0 / 3.0) * n ** 3 * (n ** 2 + 2.0 - 6.0 / t ** 2) / (s ** 2 * t)


def dominant_term(n: int, i: float, j: float) -> float:
    """The homogeneous degree-n part:
    2^{2n+1}/(n-1)! sum_{p=1}^{n-1} C(n,p) sin(p pi/n) cos(pi/n)^{n-p} j^p i^{n-p}."""
    cos = math.cos(math.pi / n)
    acc = 0.0
    for p in range(1, n):
        acc += math.comb(n, p) * math.sin(p * math.pi / n) * cos ** (n - p) * j ** p * i ** (n - p)
    return 2.0 ** (2 * n + 1) / math.factorial(n - 1) * acc


def cone_map(n: int, x: float, y: float) -> tuple[float, float]:
    """Covariance-normalizing map ((x+y)/sin(pi/n), y/cos(pi/n)).

    Sends the quarter plane onto the cone of opening pi/n and gives the
    transformed walk identity covariance.
    """
    return (x + y) / math.sin(math.pi / n), y / math.cos(math.pi / n)


def reduite(n: int, rho: float, theta: float) -> float:
    """Positive harmonic function of Brownian motion in the cone of opening
    pi/n, vanishing on its boundary: rho^n sin(n theta)."""
    if rho < 0:
        raise ValueError("rho must be >= 0")
    return rho ** n * math.sin(n * theta)


def reduite_cartesian(n: int, uu: float, vv: float) -> float:
    """Same function in cartesian coordinates:
    sum_p C(n, 2p+1) (-1)^p u^{n-2p-1} v^{2p+1} = Im[(u + i v)^n]."""
    acc = 0.0
    for p in range((n + 1) // 2):
        acc += math.comb(n, 2 * p + 1) * (-1.0) ** p * uu ** (n - 2 * p - 1) * vv ** (2 * p + 1)
    return acc


def reduite_link_constant(n: int) -> float:
    """Proportionality constant between the dominant term and the reduite.

    dominant_term(n, i, j) = c_n * reduite(cone_map(i, j)) with
    c_n = 2^{n+1} sin(2 pi/n)^n / (n-1)!; the link holds only up to this
    multiplicative constant (c_3 = 3 sqrt 3, c_4 = 16/3, never 1).
    """
    return 2.0 ** (n + 1) * math.sin(2 * math.pi / n) ** n / math.factorial(n - 1)


def reduite_ratio(h: HarmonicPolynomial, i: int, j: int) -> float:
    """value(i, j) / [c_n reduite(cone_map(i, j))]; tends to 1 along interior rays."""
    uu, vv = cone_map(h.n, float(i), float(j))
    rho = math.hypot(uu, vv)
    theta = math.atan2(vv, uu)
    denom = reduite_link_constant(h.n) * reduite(h.n, rho, theta)
    return h.value(i, j) / denom


def check_harmonicity(h: HarmonicPolynomial, imax: int, jmax: int) -> float:
    """Largest relative mean-value residual over the interior grid [1,imax]x[1,jmax].

    residual(i,j) = |f - p10 (f(i+1,j) + f(i-1,j)) - p1m1 (f(i+1,j-1) + f(i-1,j+1))|
                    / max(1, |f(i,j)|).
    """
    if imax < 2 or jmax < 2:
        raise ValueError("need imax, jmax >= 2")
    grid = h.value_grid(imax + 1, jmax + 1)
    p10, p1m1 = h.model.p10, h.model.p1m1
    f = grid[1:imax + 1, 1:jmax + 1]
    res = np.abs(f
                 - p10 * (grid[2:imax + 2, 1:jmax + 1] + grid[0:imax, 1:jmax + 1])
                 - p1m1 * (grid[2:imax + 2, 0:jmax] + grid[0:imax, 2:jmax + 2]))
    return float(np.max(res / np.maximum(1.0, np.abs(f))))


def doob_row_sum(h: HarmonicPolynomial, i: int, j: int) -> float:
    """Row sum over interior targets of the harmonic-transform kernel
    p (i,j -> i',j') value(i',j')/value(i,j); equals 1 on interior states,
    which is the computational content of 'the transformed walk never hits
    the boundary'."""
    if i < 1 or j < 1:
        raise ValueError("row sums are defined on interior states")
    p10, p1m1 = h.model.p10, h.model.p1m1
    base = h.value(i, j)
    total = 0.0
    for (di, dj), p in (((1, 0), p10), ((-1, 0), p10), ((1, -1), p1m1), ((-1, 1), p1m1)):
        ti, tj = i + di, j + dj
        if ti >= 1 and tj >= 1:
            total += p * h.value(ti, tj) / base
    return total
