"""The walk family: jump probabilities and the kernel polynomial.

A walk in this family moves inside the quarter plane with the four jumps
(1,0), (-1,0), (1,-1), (-1,1) and is absorbed on the axes.  The family is
indexed by an integer n >= 3 through

    p10 = sin(pi/n)^2 / 2      (jumps (1,0) and (-1,0)),
    p1m1 = cos(pi/n)^2 / 2     (jumps (1,-1) and (-1,1)),

which makes the symmetry group of the kernel curve dihedral of order 2n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from numpy.polynomial import Polynomial

from .riemann import INFINITY, SpherePoint


@dataclass(frozen=True)
class WalkModel:
    """Parameters of one walk of the family. Immutable; build with make_model."""

    n: int
    p10: float
    p1m1: float


@dataclass(frozen=True)
class State:
    """A quarter-plane state (i, j) with i, j >= 0."""

    i: int
    j: int

    def __post_init__(self):
        if self.i < 0 or self.j < 0:
            raise ValueError(f"state ({self.i},{self.j}) lies outside the quarter plane")

    @property
    def is_interior(self) -> bool:
        return self.i >= 1 and self.j >= 1


def make_model(n: int) -> WalkModel:
    """Build the walk with group half-order n (n >= 3)."""
    if n < 3:
        raise ValueError(f"group half-order must be >= 3, got {n}")
    s = math.sin(math.pi / n)
    return WalkModel(n=n, p10=s * s / 2.0, p1m1=(1.0 - s * s) / 2.0)


def kernel(model: WalkModel, x: complex, y: complex) -> complex:
    """The kernel polynomial Q(x, y) = xy [p10 x + p10/x + p1m1 x/y + p1m1 y/x - 1].

    Vanishes exactly on the algebraic curve the uniformization parametrizes.
    Raises ZeroDivisionError for x = 0 or y = 0.
    """
    if x == 0 or y == 0:
        raise ZeroDivisionError("kernel is undefined at x = 0 or y = 0")
    p10, p1m1 = model.p10, model.p1m1
    return x * y * (p10 * x + p10 / x + p1m1 * x / y + p1m1 * y / x - 1.0)


def quadratic_coeffs(model: WalkModel, axis: str) -> tuple[Polynomial, Polynomial, Polynomial]:
    """Coefficients of the kernel read as a quadratic in one variable.

    axis="in_y": Q = a(x) y^2 + b(x) y + c(x) with
        a = p1m1, b = p10 x^2 - x + p10, c = p1m1 x^2.
    axis="in_x": Q = at(y) x^2 + bt(y) x + ct(y) with
        at = p10 y + p1m1, bt = -y, ct = p1m1 y^2 + p10 y.
    """
    p10, p1m1 = model.p10, model.p1m1
    if axis == "in_y":
        return (
            Polynomial([p1m1]),
            Polynomial([p10, -1.0, p10]),
            Polynomial([0.0, 0.0, p1m1]),
        )
    if axis == "in_x":
        return (
            Polynomial([p1m1, p10]),
            Polynomial([0.0, -1.0]),
            Polynomial([0.0, p10, p1m1]),
        )
    raise ValueError(f"axis must be 'in_y' or 'in_x', got {axis!r}")


def discriminant(model: WalkModel, axis: str) -> Polynomial:
    """b^2 - 4ac for the requested quadratic reading of the kernel."""
    a, b, c = quadratic_coeffs(model, axis)
    return b * b - 4 * a * c


def discriminant_roots(model: WalkModel) -> tuple[float, float, float, SpherePoint]:
    """Branch points (x1, x4, y1, y4) delimiting the two square-root cuts.

    x1 < 1 < x4 are the simple roots of x^2 + 2x(1 - 1/p10) + 1 (the
    non-double-root factor of the x-discriminant), with x1 * x4 = 1.
    The y-discriminant has y1 = 0 and y4 = infinity.
    """
    h = 1.0 / model.p10 - 1.0
    root = math.sqrt(h * h - 1.0)
    return h - root, h + root, 0.0, INFINITY
