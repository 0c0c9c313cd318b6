"""Points on the Riemann sphere: finite complex numbers plus a tagged infinity.

The coordinate maps and Mobius transformations in this package are total on
the sphere.  Infinity is a dedicated sentinel rather than ``complex('inf')``
so that downstream arithmetic never has to reason about IEEE inf/nan
propagation.
"""

from __future__ import annotations

from typing import Union


class _Infinity:
    """Singleton for the point at infinity on the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __eq__(self, other) -> bool:
        return isinstance(other, _Infinity)

    def __hash__(self) -> int:
        return hash("riemann-sphere-infinity")


INFINITY = _Infinity()

SpherePoint = Union[complex, _Infinity]

#: Cancellation threshold below which a denominator is treated as an exact
#: pole hit.  Chosen far under any roundoff scale met in practice.
POLE_EPS = 1e-300


def is_infinity(z: SpherePoint) -> bool:
    return isinstance(z, _Infinity)
