"""
Complex sine forward/inverse evaluation with explicit branch addressing, plus
the chordal metric on the Riemann sphere.

Branch convention: principal_arcsin is evaluated in logarithmic form,
    arcsin(w) = -i * log(i*w + sqrt(1 - w^2)),
with the principal square root and logarithm and signed zeros normalised to
+0. On the cuts this gives arcsin(x) = pi/2 - i*acosh(x) for x > 1 and
arcsin(x) = -pi/2 + i*acosh(-x) for x < -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from core.errors import InputError

HALF_PI = np.pi / 2


@dataclass(frozen=True)
class ExtendedPoint:
    """A point of the Riemann sphere: a finite complex value or infinity."""
    value: Optional[complex] = None

    def __post_init__(self):
        if self.value is not None:
            v = complex(self.value)
            if not (np.isfinite(v.real) and np.isfinite(v.imag)):
                raise InputError(f"finite ExtendedPoint required, got {self.value!r}")
            object.__setattr__(self, "value", v)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    @classmethod
    def infinity(cls) -> "ExtendedPoint":
        return cls(None)

    def __repr__(self) -> str:
        return "ExtendedPoint(inf)" if self.is_infinity else f"ExtendedPoint({self.value!r})"


INFINITY = ExtendedPoint.infinity()

PointLike = Union[ExtendedPoint, complex, float, int]


def as_point(p: PointLike) -> ExtendedPoint:
    return p if isinstance(p, ExtendedPoint) else ExtendedPoint(p)


def _finite_complex(w) -> complex:
    w = complex(w)
    if not (np.isfinite(w.real) and np.isfinite(w.imag)):
        raise InputError(f"finite argument required, got {w!r}")
    # + 0.0 turns a signed zero into +0 so the cut side is fixed
    return complex(w.real + 0.0, w.imag + 0.0)


def principal_arcsin(w: complex) -> complex:
    """
    Principal arcsin with Re(result) in [-pi/2, pi/2].

    i*w + s and s - i*w (s = sqrt(1 - w^2)) multiply to 1, so
    log(i*w + s) = -log(s - i*w); the larger of the two is used to avoid
    cancellation when |w| is large.
    """
    w = np.complex128(_finite_complex(w))
    s = np.sqrt(np.complex128(1.0) - w * w)
    iw = np.complex128(1j) * w
    t = iw + s
    u = s - iw
    if abs(t) >= abs(u):
        log_t = np.log(t)
    else:
        log_t = -np.log(u)
    result = np.complex128(-1j) * log_t
    return complex(result.real + 0.0, result.imag + 0.0)


def addressed_arcsin(w: complex, a: int) -> complex:
    """(-1)^a * principal_arcsin(w) + a*pi; lies in the strip |Re z - a*pi| <= pi/2."""
    a = int(a)
    base = principal_arcsin(w)
    if a % 2:
        base = -base
    return complex(base + a * np.pi)


def strip_index(z: complex) -> int:
    """Index a of the strip |Re z - a*pi| <= pi/2 containing z (nearest zero-lattice point)."""
    return int(np.floor(complex(z).real / np.pi + 0.5))


def strip_boundary_distance(z: complex) -> float:
    """Distance of Re z to the nearest strip boundary pi/2 + k*pi."""
    x = complex(z).real - HALF_PI
    return float(abs(x - np.pi * np.round(x / np.pi)))


def chordal_distance(p: PointLike, q: PointLike) -> float:
    """
    Chordal metric 2|p-q| / sqrt((1+|p|^2)(1+|q|^2)); d(z, inf) = 2 / sqrt(1+|z|^2).
    """
    p = as_point(p)
    q = as_point(q)
    if p.is_infinity and q.is_infinity:
        return 0.0
    if p.is_infinity or q.is_infinity:
        finite = q.value if p.is_infinity else p.value
        return float(2.0 / np.sqrt(1.0 + abs(finite) ** 2))
    a, b = p.value, q.value
    return float(2.0 * abs(a - b) / np.sqrt((1.0 + abs(a) ** 2) * (1.0 + abs(b) ** 2)))
