"""The dihedral symmetry group of the walk acting on the uniformization sphere.

The two generating involutions are Mobius maps

    gx : z -> 1/z                  (preserves the x-coordinate),
    gy : z -> exp(-2 i pi / n)/z   (preserves the y-coordinate),

and together they generate a dihedral group of order 2n: n rotations
z -> exp(2 i k pi / n) z of even word length and n inverted rotations
z -> exp(-2 i k pi / n)/z of odd word length.  The alternating sum of
x^{i0} y^{j0} over the orbit of z drives both the meromorphic continuation
of the boundary generating functions and the harmonic polynomial.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .riemann import INFINITY, POLE_EPS, SpherePoint, is_infinity
from .uniformization import Cone, Uniformization


class GroupClosureError(RuntimeError):
    """Breadth-first closure did not terminate at the expected group order."""


class PoleCollisionError(ValueError):
    """An orbit point fell within the pole guard of a coordinate function."""


#: Probe points for projective equality of Mobius maps; generic (no orbit of
#: one hits a pole of a dihedral element for any n >= 3).
_PROBES = (0.37 + 0.21j, -1.43 + 0.52j, 2.11 - 0.95j)
_EQ_TOL = 1e-10


@dataclass(frozen=True)
class MobiusMap:
    """z -> (a z + b)/(c z + d), normalized so the largest coefficient has modulus 1."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if abs(self.a * self.d - self.b * self.c) < POLE_EPS:
            raise ValueError("degenerate Mobius coefficients (ad - bc = 0)")
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) / scale)

    def __call__(self, z: SpherePoint) -> SpherePoint:
        if is_infinity(z):
            if abs(self.c) < POLE_EPS:
                return INFINITY
            return self.a / self.c
        den = self.c * z + self.d
        if abs(den) < POLE_EPS:
            return INFINITY
        return (self.a * z + self.b) / den

    def apply_array(self, z: np.ndarray) -> np.ndarray:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other: (self . other)(z) = self(other(z))."""
        return MobiusMap(
            a=self.a * other.a + self.b * other.c,
            b=self.a * other.b + self.b * other.d,
            c=self.c * other.a + self.d * other.c,
            d=self.c * other.b + self.d * other.d,
        )

    def same_action(self, other: "MobiusMap") -> bool:
        """Projective equality, tested on three generic probe points."""
        for p in _PROBES:
            pa, pb = self(p), other(p)
            if is_infinity(pa) != is_infinity(pb):
                return False
            if not is_infinity(pa) and abs(pa - pb) > _EQ_TOL * (1 + abs(pa)):
                return False
        return True


@dataclass(frozen=True)
class GroupElement:
    """A group element together with a minimal word over the generators.

    Words are strings over {"x", "y"}: "x" is the involution preserving the
    x-coordinate, "y" the one preserving y.  The identity has the empty word.
    """

    map: MobiusMap
    word: str

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def sign(self) -> int:
        """(-1)^length, the alternating character of the dihedral group."""
        return -1 if self.length % 2 else 1


IDENTITY = MobiusMap(1.0, 0.0, 0.0, 1.0)


def generators(n: int) -> tuple[GroupElement, GroupElement]:
    """The two generating involutions (gx: z -> 1/z, gy: z -> exp(-2 i pi/n)/z)."""
    if n < 3:
        raise ValueError(f"group half-order must be >= 3, got {n}")
    gx = MobiusMap(0.0, 1.0, 1.0, 0.0)
    gy = MobiusMap(0.0, cmath.exp(-2j * cmath.pi / n), 1.0, 0.0)
    return GroupElement(gx, "x"), GroupElement(gy, "y")


def enumerate_group(n: int, max_elements: int = 4096) -> list[GroupElement]:
    """All 2n elements with minimal words, by breadth-first closure.

    Raises GroupClosureError if the closure does not stabilize at 2n
    distinct actions (it always does under the family's parametrization).
    """
    gx, gy = generators(n)
    elements: list[GroupElement] = [GroupElement(IDENTITY, "")]
    frontier = [elements[0]]
    while frontier:
        new_frontier = []
        for el in frontier:
            for gen in (gx, gy):
                candidate = GroupElement(gen.map.compose(el.map), gen.word + el.word)
                if any(candidate.map.same_action(known.map) for known in elements):
                    continue
                elements.append(candidate)
                new_frontier.append(candidate)
                if len(elements) > max_elements:
                    raise GroupClosureError(
                        f"closure exceeded {max_elements} elements for n={n}")
        frontier = new_frontier
    if len(elements) != 2 * n:
        raise GroupClosureError(
            f"expected group order {2 * n}, closure produced {len(elements)}")
    elements.sort(key=lambda el: (el.length, el.word))
    return elements


# -- signed orbit sums -------------------------------------------------------


def _pole_set(u: Uniformization) -> np.ndarray:
    """Poles of x and y pulled through every group element: the 2n rotations
    of z0 and of conj z0 (coinciding pairwise, but duplicates are harmless)."""
    n = u.n
    rot = np.exp(2j * np.pi * np.arange(n) / n)
    return np.concatenate([rot * u.z0, rot * np.conj(u.z0)])


def signed_orbit_sum(u: Uniformization, i0: int, j0: int, z: complex) -> complex:
    """Sum over the group of (-1)^length x(w z)^{i0} y(w z)^{j0}.

    Computed in the rotation form

        sum_k [ F(exp(-2 i k pi/n) z) - F(exp(-2 i k pi/n)/z) ],  F = x^{i0} y^{j0},

    which is equivalent to the direct 2n-term sum because the n rotations have
    even length and the n inverted rotations odd length.  Raises
    PoleCollisionError when an orbit point falls within 1e-12 of a pole of the
    coordinates.
    """
    return complex(signed_orbit_sum_array(u, i0, j0, np.asarray([z], dtype=complex))[0])


def signed_orbit_sum_array(u: Uniformization, i0: int, j0: int,
                           z: np.ndarray, pole_guard: float = 1e-12,
                           with_magnitude: bool = False):
    """Vectorized signed orbit sum over an array of finite points.

    With with_magnitude=True also returns the sum of the term moduli, the
    conditioning scale of the alternating sum (near 0 the 2n near-unit terms
    cancel down to order z^n, so roundoff lives at eps times this scale).
    """
    n = u.n
    omegas = np.exp(-2j * np.pi * np.arange(n) / n)
    poles = _pole_set(u)
    total = np.zeros_like(z, dtype=complex)
    magnitude = np.zeros(z.shape)
    for k in range(n):
        for w, sgn in ((omegas[k] * z, 1.0), (omegas[k] / z, -1.0)):
            if pole_guard > 0:
                dist = np.min(np.abs(w[:, None] - poles[None, :]), axis=1)
                if np.any(dist < pole_guard):
                    bad = w[dist < pole_guard][0]
                    raise PoleCollisionError(
                        f"orbit point {bad} within {pole_guard} of a coordinate pole")
            term = u.x_array(w) ** i0 * u.y_array(w) ** j0
            total = total + sgn * term
            if with_magnitude:
                magnitude += np.abs(term)
    if with_magnitude:
        return total, magnitude
    return total


def signed_orbit_sum_direct(u: Uniformization, i0: int, j0: int, z: complex) -> complex:
    """Reference 2n-term evaluation over the enumerated group (test oracle)."""
    total = 0.0 + 0.0j
    for el in enumerate_group(u.n):
        w = el.map(z)
        xv, yv = u.x(w), u.y(w)
        if is_infinity(xv) or is_infinity(yv):
            raise PoleCollisionError(f"orbit point {w} is a pole of the coordinates")
        total += el.sign * xv ** i0 * yv ** j0
    return total


# -- cones and fundamental domain --------------------------------------------


def cone_Dk(n: int, k: int, sign: str) -> Cone:
    """The cone D_k^+ = Lambda((k-1)pi/n, k pi/n) or D_k^- = Lambda(-(k+1)pi/n, -k pi/n).

    D_0^+ = D_0^- = Lambda(-pi/n, 0) is the fundamental domain whose group
    translates tile the sphere (each boundary half-line covered twice).
    """
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in 0..{n}, got {k}")
    if sign == "+":
        return Cone((k - 1) * math.pi / n, k * math.pi / n)
    if sign == "-":
        return Cone(-(k + 1) * math.pi / n, -k * math.pi / n)
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def image_cone(el: GroupElement, cone: Cone, n: int) -> Cone:
    """Image of a cone of directions under a group element.

    Rotations by alpha shift both opening angles by alpha; inverted rotations
    z -> exp(-i beta)/z send Lambda(t1, t2) to Lambda(-t2 - beta, -t1 - beta).
    """
    m = el.map
    if abs(m.c) < POLE_EPS:  # rotation z -> (a/d) z
        alpha = cmath.phase(m.a / m.d)
        return Cone(cone.theta1 + alpha, cone.theta2 + alpha)
    if abs(m.a) > POLE_EPS or abs(m.d) > POLE_EPS:
        raise ValueError("element is not of dihedral form")
    beta = -cmath.phase(m.b / m.c)
    return Cone(-cone.theta2 - beta, -cone.theta1 - beta)


@dataclass(frozen=True)
class GroupClassification:
    """Outcome of the finite-group test on a jump probability p10."""

    finite: bool
    n: Optional[int] = None
    q: Optional[int] = None

    @property
    def order(self) -> Optional[int]:
        return 2 * self.n if self.finite else None

    @property
    def has_fundamental_domain(self) -> bool:
        """The continuation identity needs q = 1; other q give a finite group
        with no fundamental domain of the required form."""
        return bool(self.finite and self.q == 1)


def finiteness_criterion(p10: float, max_denominator: int = 64,
                         tol: float = 1e-10) -> GroupClassification:
    """Classify the group generated by a horizontal jump probability p10.

    The group is finite of order 2n exactly when
    arcsin(sqrt(2 p10))/pi = q/n in lowest terms; the search is capped at
    denominator max_denominator, beyond which the group is reported
    infinite(-or-large).
    """
    if not 0.0 < p10 < 0.5:
        raise ValueError(f"p10 must lie in (0, 1/2), got {p10}")
    t = math.asin(math.sqrt(2.0 * p10)) / math.pi
    frac = Fraction(t).limit_denominator(max_denominator)
    if frac.denominator >= 3 and abs(t - float(frac)) <= tol:
        return GroupClassification(finite=True, n=frac.denominator, q=frac.numerator)
    return GroupClassification(finite=False)
