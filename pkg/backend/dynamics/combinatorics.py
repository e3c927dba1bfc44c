"""
Finite combinatorial data standing in for a topological model in the sine
family: period m, even anchor index k0 and the inverse-branch address word.

Orbit labels follow f(x_{i+1}) = x_i for 0 <= i <= m-2 and f(x_0) = x_{m-1},
with x_0 = pi/2 + k0*pi. Address a_i is the strip index of x_i.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Any, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from core.errors import (
    AmbiguousAddressError,
    InputError,
    ItineraryError,
    OrbitNotClosedError,
)
from dynamics.inverse_branches import HALF_PI, strip_boundary_distance, strip_index

logger = logging.getLogger("SineThurston.Combinatorics")

ORBIT_CLOSURE_TOL = 1e-6
BOUNDARY_TOL = 1e-9

_LINE_RE = re.compile(
    r"m=(?P<m>[+-]?\d+)\s+k0=(?P<k0>[+-]?\d+)\s+a=(?P<a>(?:[+-]?\d+(?:,[+-]?\d+)*)?)"
    r"(?:\s+label=(?P<label>\S+))?"
)


@dataclass(frozen=True)
class Itinerary:
    m: int
    k0: int
    addresses: Tuple[int, ...] = ()
    label: Optional[str] = None

    @property
    def anchor(self) -> float:
        """x_0 = pi/2 + k0*pi."""
        return HALF_PI + self.k0 * np.pi

    def to_line(self) -> str:
        line = f"m={self.m} k0={self.k0} a={','.join(str(a) for a in self.addresses)}"
        if self.label:
            line += f" label={self.label}"
        return line

    def __str__(self) -> str:
        return self.to_line()


def _field(raw: Any, name: str, default=None):
    if isinstance(raw, Mapping):
        return raw.get(name, default)
    return getattr(raw, name, default)


def validate_itinerary(raw: Any) -> Itinerary:
    """
    Validate a candidate itinerary (mapping or object with m, k0, addresses,
    optional label). Every violated invariant is collected before raising.
    """
    violations: List[str] = []
    m = _field(raw, "m")
    k0 = _field(raw, "k0", 0)
    addresses = _field(raw, "addresses", ())
    label = _field(raw, "label")
    if addresses is None:
        addresses = ()

    def _is_int(v) -> bool:
        return isinstance(v, (int, np.integer)) and not isinstance(v, bool)

    if not _is_int(m):
        violations.append(f"m must be an integer, got {m!r}")
    elif m < 1:
        violations.append("m must be positive")
    if not _is_int(k0):
        violations.append(f"k0 must be an integer, got {k0!r}")
    elif k0 % 2 != 0:
        violations.append("k0 must be even")

    addresses = list(addresses)
    bad = [a for a in addresses if not _is_int(a)]
    if bad:
        violations.append(f"addresses must be integers, got {bad!r}")
    if _is_int(m) and m >= 1 and len(addresses) != m - 1:
        expected = m - 1
        noun = "address" if expected == 1 else "addresses"
        violations.append(f"expected {expected} {noun}, got {len(addresses)}")

    if violations:
        raise ItineraryError(violations)
    return Itinerary(
        m=int(m),
        k0=int(k0),
        addresses=tuple(int(a) for a in addresses),
        label=str(label) if label else None,
    )


def enumerate_itineraries(m: int, K: int) -> List[Itinerary]:
    """All itineraries of period m with k0 = 0 and addresses in [-K, K], lexicographic."""
    if m < 1:
        raise InputError("m must be positive")
    if K < 0:
        raise InputError("K must be non-negative")
    letters = range(-K, K + 1)
    return [
        Itinerary(m=m, k0=0, addresses=tuple(word))
        for word in itertools.product(letters, repeat=m - 1)
    ]


# ==========================================
# Text format: m=<int> k0=<int> a=<ints> [label=<string>]
# ==========================================
def parse_itinerary_line(line: str) -> Itinerary:
    match = _LINE_RE.fullmatch(line.strip())
    if match is None:
        raise InputError(f"malformed itinerary line {line.strip()!r}")
    addresses = [int(a) for a in match.group("a").split(",")] if match.group("a") else []
    return validate_itinerary({
        "m": int(match.group("m")),
        "k0": int(match.group("k0")),
        "addresses": addresses,
        "label": match.group("label"),
    })


def parse_itinerary_text(text: str) -> List[Itinerary]:
    result = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            result.append(parse_itinerary_line(line))
        except ItineraryError as e:
            raise ItineraryError([f"line {lineno}: {v}" for v in e.violations])
        except InputError as e:
            raise InputError(f"line {lineno}: {e}")
    return result


def read_itinerary_file(path: str) -> List[Itinerary]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_itinerary_text(f.read())


def write_itinerary_file(path: str, itineraries: Iterable[Itinerary]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for it in itineraries:
            f.write(it.to_line() + "\n")


# ==========================================
# Reading the combinatorics of a parameter
# ==========================================
def _address_of(z: complex, position: int) -> int:
    if strip_boundary_distance(z) < BOUNDARY_TOL:
        raise AmbiguousAddressError(
            f"orbit point x_{position} = {z} lies within {BOUNDARY_TOL:g} of a strip boundary"
        )
    return strip_index(z)


def read_orbit_addresses(lam: complex, m: int) -> Tuple[int, ...]:
    """
    Strip indices a_1..a_{m-1} of x_i = G^{m-i}(x_0), i.e. x_{m-1} = lambda,
    x_{m-2} = G(lambda), ...; raises AmbiguousAddressError on a boundary.
    """
    lam = complex(lam)
    labels = [0j] * m
    z = lam
    for i in range(m - 1, 0, -1):
        labels[i] = z
        z = lam * np.sin(z)
    return tuple(_address_of(labels[i], i) for i in range(1, m))


def itinerary_of_parameter(lam: complex, m: int) -> Itinerary:
    """
    Itinerary of a center: the critical orbit must close at some x_0 =
    pi/2 + k0*pi (k0 even) with period m within 1e-6.
    """
    lam = complex(lam)
    if m < 1:
        raise InputError("m must be positive")
    if lam == 0:
        raise InputError("lambda must be non-zero")

    # For even k0, G(x_0) = lambda, so x_0 must equal G^{m-1}(lambda).
    w = lam
    with np.errstate(all="ignore"):
        for _ in range(m - 1):
            w = complex(lam * np.sin(w))
    if not (np.isfinite(w.real) and np.isfinite(w.imag)):
        raise OrbitNotClosedError(f"critical orbit of lambda={lam} escapes")
    k0 = int(np.round((w.real - HALF_PI) / np.pi))
    x0 = HALF_PI + k0 * np.pi
    if k0 % 2 != 0 or abs(w - x0) >= ORBIT_CLOSURE_TOL:
        raise OrbitNotClosedError(
            f"critical orbit of lambda={lam} does not close with period {m} "
            f"(G^{m}(x0) = {w}, nearest anchor index {k0})"
        )
    addresses = read_orbit_addresses(lam, m)
    return Itinerary(m=m, k0=k0, addresses=addresses)
