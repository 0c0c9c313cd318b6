"""Rational parametrization of the kernel curve and its cycle geometry.

The genus-zero curve {Q(x, y) = 0} is parametrized by the Riemann sphere via

    x(z) = (z + z0)(z + conj z0) / ((z - z0)(z - conj z0)),
    y(z) = (z + z0)^2 / (z - z0)^2,          z0 = -exp(-i pi / n).

Both maps are total on the sphere (poles return INFINITY, x(inf) = y(inf) = 1)
and carry four distinguished cycles onto the branch cuts and unit circles of
the x- and y-planes:

    real axis        -> x in [x1, x4],     imaginary axis      -> |x| = 1,
    z0 * real axis   -> y in [0, +inf],    z0 * imaginary axis -> |y| = 1.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .riemann import INFINITY, POLE_EPS, SpherePoint, is_infinity
from .walk_model import WalkModel, discriminant_roots, kernel


@dataclass(frozen=True)
class Cone:
    """Closed cone of directions {t exp(i theta) : t >= 0, theta1 <= theta <= theta2}."""

    theta1: float
    theta2: float

    def __post_init__(self):
        if self.theta1 > self.theta2:
            raise ValueError("cone needs theta1 <= theta2")

    def contains_angle(self, theta: float, tol: float = 1e-12) -> bool:
        """Membership of a direction, compared modulo 2 pi."""
        span = 2 * np.pi
        shift = (theta - self.theta1) % span
        return shift <= (self.theta2 - self.theta1) + tol or shift >= span - tol

    def sample_rays(self, count: int) -> np.ndarray:
        """Evenly spread directions through the cone interior and edges."""
        return np.linspace(self.theta1, self.theta2, count)


@dataclass(frozen=True)
class Uniformization:
    """Coordinate functions of the kernel curve for one walk of the family."""

    model: WalkModel
    z0: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "z0", -cmath.exp(-1j * cmath.pi / self.model.n))

    @property
    def n(self) -> int:
        return self.model.n

    # -- scalar, total on the sphere -------------------------------------

    def x(self, z: SpherePoint) -> SpherePoint:
        """x-coordinate of the curve point over z; INFINITY at z0 and conj z0."""
        if is_infinity(z):
            return 1.0 + 0.0j
        z0 = self.z0
        den = (z - z0) * (z - z0.conjugate())
        if abs(den) < POLE_EPS:
            return INFINITY
        return (z + z0) * (z + z0.conjugate()) / den

    def y(self, z: SpherePoint) -> SpherePoint:
        """y-coordinate of the curve point over z; double pole at z0."""
        if is_infinity(z):
            return 1.0 + 0.0j
        den = z - self.z0
        if abs(den) < POLE_EPS:
            return INFINITY
        w = (z + self.z0) / den
        return w * w

    # -- vectorized fast paths (caller keeps clear of poles) -------------

    def x_array(self, z: np.ndarray) -> np.ndarray:
        z0 = self.z0
        return (z + z0) * (z + np.conj(z0)) / ((z - z0) * (z - np.conj(z0)))

    def y_array(self, z: np.ndarray) -> np.ndarray:
        w = (z + self.z0) / (z - self.z0)
        return w * w

    def curve_residual(self, z: complex) -> float:
        """|Q(x(z), y(z))|; identically zero up to roundoff by construction."""
        x, y = self.x(z), self.y(z)
        if is_infinity(x) or is_infinity(y) or x == 0 or y == 0:
            raise ValueError(f"z={z} maps to a pole or zero of the coordinates")
        return abs(kernel(self.model, x, y))

    def curve_residual_bound(self, z: complex) -> float:
        """Acceptance envelope 1e-10 (1+|x|^2)(1+|y|^2) for the residual at z."""
        x, y = self.x(z), self.y(z)
        if is_infinity(x) or is_infinity(y):
            raise ValueError(f"z={z} maps to a pole of the coordinates")
        return 1e-10 * (1.0 + abs(x) ** 2) * (1.0 + abs(y) ** 2)


@dataclass
class CycleImageReport:
    """Outcome of sampling the four preimage cycles of the branch cuts/circles."""

    ok: bool
    max_deviation: dict[str, float]
    first_failure: Optional[tuple[str, complex]]


#: Tolerance band on imaginary parts / modulus deviations in cycle membership
#: tests.  The cycles are sampled on parametrized rays, not solved for, so a
#: narrow band absorbs pure roundoff.
CYCLE_TOL = 1e-10


def cycle_images(u: Uniformization, samples_per_cycle: int = 200) -> CycleImageReport:
    """Confirm the four cycle images of the uniformization by sampling.

    real axis: x real inside [x1, x4]; imaginary axis: |x| = 1;
    z0 * reals: y real in [0, inf); z0 * imaginaries: |y| = 1.
    """
    x1, x4, _, _ = discriminant_roots(u.model)
    half = samples_per_cycle // 2
    mags = np.geomspace(1e-3, 1e3, half)
    ts = np.concatenate([-mags, mags])
    # keep clear of the y-pole at t = 1 on the z0-ray
    ts = ts[np.abs(ts - 1.0) > 1e-6]

    devs: dict[str, float] = {}
    failure: Optional[tuple[str, complex]] = None

    def record(name: str, points: np.ndarray, dev: np.ndarray):
        nonlocal failure
        devs[name] = float(np.max(dev))
        if failure is None and devs[name] > CYCLE_TOL:
            failure = (name, complex(points[int(np.argmax(dev))]))

    z = ts.astype(complex)
    xv = u.x_array(z)
    record("x_real_segment", z,
           np.maximum.reduce([np.abs(xv.imag),
                              np.maximum(x1 - xv.real, 0.0),
                              np.maximum(xv.real - x4, 0.0)]))

    z = 1j * ts
    record("x_unit_circle", z, np.abs(np.abs(u.x_array(z)) - 1.0))

    z = u.z0 * ts
    yv = u.y_array(z)
    record("y_real_segment", z,
           np.maximum(np.abs(yv.imag), np.maximum(-yv.real, 0.0)))

    z = u.z0 * 1j * ts
    record("y_unit_circle", z, np.abs(np.abs(u.y_array(z)) - 1.0))

    return CycleImageReport(ok=failure is None, max_deviation=devs, first_failure=failure)
