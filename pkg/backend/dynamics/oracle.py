"""
Independent verification path: forward critical orbit, damped Newton on the
closure condition G^m(x_0) = x_0, and center certification.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from core.config import config
from core.errors import (
    AmbiguousAddressError,
    InputError,
    NewtonDivergenceError,
    OrbitEscapeError,
)
from core.type_system import format_complex
from dynamics.combinatorics import Itinerary, read_orbit_addresses
from dynamics.inverse_branches import HALF_PI
from dynamics.model import CenterResult

logger = logging.getLogger("SineThurston.Oracle")

ESCAPE_IM = 700.0
NEWTON_TOL = 1e-13
NEWTON_MAX_STEPS = 50
NEWTON_MAX_HALVINGS = 20
DERIVATIVE_FLOOR = 1e-14


@dataclass
class OrbitTrace:
    lam: complex
    points: List[complex]
    closure_error: float
    cycle_multiplier_bound: float


@dataclass
class Clause:
    name: str
    passed: bool
    measured: str


@dataclass
class Certificate:
    lam: complex
    itinerary: Itinerary
    closure_error: float
    exact_period: int
    addresses_read: Tuple[int, ...] | None
    multiplier: float
    clauses: List[Clause] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def clause(self, key: str) -> Clause:
        for c in self.clauses:
            if c.name.startswith(f"({key})"):
                return c
        raise KeyError(key)


def _anchor(k0: int) -> float:
    return HALF_PI + k0 * np.pi


def forward_orbit(lam: complex, m: int, k0: int = 0) -> OrbitTrace:
    """m steps of G(z) = lambda*sin(z) from x_0 = pi/2 + k0*pi."""
    lam = complex(lam)
    if lam == 0:
        raise InputError("lambda must be non-zero")
    x0 = _anchor(k0)
    points = [complex(x0)]
    multiplier = 1.0
    z = complex(x0)
    for _ in range(m):
        z = complex(lam * np.sin(z))
        if not np.isfinite(z.imag) or abs(z.imag) > ESCAPE_IM:
            raise OrbitEscapeError(f"orbit of x0={x0:.6g} under lambda={lam} escapes (|Im z| > {ESCAPE_IM:g})")
        # over z_1..z_m: the factor at z_m ~ x_0 carries the closure
        multiplier *= abs(lam * np.cos(z))
        points.append(z)
    return OrbitTrace(
        lam=lam,
        points=points,
        closure_error=float(abs(points[-1] - x0)),
        cycle_multiplier_bound=float(multiplier),
    )


def closure_function(lam: complex, m: int, k0: int = 0) -> Tuple[complex, complex]:
    """
    F(lambda) = G^m(x_0) - x_0 and dF/dlambda by forward-mode chain rule:
    dz'/dlambda = sin z + lambda*cos(z)*dz/dlambda.
    """
    lam = complex(lam)
    x0 = _anchor(k0)
    z = complex(x0)
    dz = 0j
    for _ in range(m):
        s, c = np.sin(z), np.cos(z)
        z, dz = complex(lam * s), complex(s + lam * c * dz)
    return z - x0, dz


def exact_period(lam: complex, m: int, k0: int = 0, tol: float | None = None) -> int:
    """Smallest divisor d of m with |G^d(x_0) - x_0| < tol, or 0 if none closes."""
    tol = config.PERIOD_TOL if tol is None else tol
    for d in range(1, m + 1):
        if m % d:
            continue
        try:
            if forward_orbit(lam, d, k0).closure_error < tol:
                return d
        except OrbitEscapeError:
            return 0
    return 0


def refine_closure(lam0: complex, m: int, k0: int = 0) -> Tuple[complex, int, float]:
    """
    Damped Newton on F. Returns (lambda, steps, last step length).
    Stops at |F| < 1e-13, after 50 steps, or when 20 halvings fail to decrease |F|.
    """
    lam = complex(lam0)
    if lam == 0:
        raise InputError("lambda0 must be non-zero")
    with np.errstate(all="ignore"):
        F, dF = closure_function(lam, m, k0)
        step_len = float("inf")
        steps = 0
        while steps < NEWTON_MAX_STEPS and abs(F) >= NEWTON_TOL:
            if not np.isfinite(abs(dF)) or abs(dF) < DERIVATIVE_FLOOR:
                raise NewtonDivergenceError(
                    f"derivative underflow |dF/dlambda| = {abs(dF):.3e} at lambda={lam}"
                )
            delta = F / dF
            accepted = False
            for _ in range(NEWTON_MAX_HALVINGS + 1):
                candidate = lam - delta
                if candidate != 0:
                    F_new, dF_new = closure_function(candidate, m, k0)
                    if np.isfinite(abs(F_new)) and abs(F_new) < abs(F):
                        accepted = True
                        break
                delta = delta / 2
            if not accepted:
                logger.debug(f"[Newton] stalled at lambda={lam} |F|={abs(F):.3e}")
                break
            step_len = float(abs(lam - candidate))
            lam, F, dF = candidate, F_new, dF_new
            steps += 1

    if not np.isfinite(abs(F)) or abs(F) >= config.CLOSURE_TOL:
        raise NewtonDivergenceError(
            f"Newton did not reach closure from lambda0={lam0}: |F| = {abs(F):.3e} at lambda={lam}"
        )
    return lam, steps, step_len


def certify_center(lam: complex, it: Itinerary) -> Certificate:
    """
    (a) closure < 1e-9, (b) exact period m, (c) addresses match,
    (d) multiplier < 1e-8. Failures are recorded, never raised.
    """
    lam = complex(lam)
    clauses: List[Clause] = []
    closure = float("inf")
    multiplier = float("inf")
    if lam != 0:
        try:
            orbit = forward_orbit(lam, it.m, it.k0)
            closure = orbit.closure_error
            multiplier = orbit.cycle_multiplier_bound
        except OrbitEscapeError as e:
            logger.debug(f"[Certify] {e}")
    clauses.append(Clause("(a) closure", closure < config.CLOSURE_TOL, f"closure_error={closure:.3e}"))

    period = exact_period(lam, it.m, it.k0) if lam != 0 else 0
    clauses.append(Clause("(b) exact period", period == it.m, f"exact_period={period} expected={it.m}"))

    read: Tuple[int, ...] | None = None
    if lam != 0:
        try:
            read = read_orbit_addresses(lam, it.m)
        except AmbiguousAddressError as e:
            logger.debug(f"[Certify] {e}")
    clauses.append(Clause(
        "(c) addresses",
        read is not None and tuple(read) == tuple(it.addresses),
        f"read={list(read) if read is not None else 'ambiguous'} expected={list(it.addresses)}",
    ))

    clauses.append(Clause("(d) multiplier", multiplier < config.MULTIPLIER_TOL, f"multiplier={multiplier:.3e}"))
    return Certificate(
        lam=lam,
        itinerary=it,
        closure_error=closure,
        exact_period=period,
        addresses_read=read,
        multiplier=multiplier,
        clauses=clauses,
    )


def newton_refine(lam0: complex, it: Itinerary) -> CenterResult:
    lam, steps, step_len = refine_closure(lam0, it.m, it.k0)
    cert = certify_center(lam, it)
    logger.debug(f"[Newton] {it} -> lambda={lam} in {steps} step(s), certified={cert.passed}")
    return CenterResult(
        lambda_star=lam,
        iterations=steps,
        final_displacement=step_len if np.isfinite(step_len) else 0.0,
        orbit_residual=cert.closure_error,
        exact_period=cert.exact_period,
        contraction_rate=float("nan"),
        converged=cert.passed,
        period=it.m,
        itinerary=it,
        certificate=cert,
    )


def format_certificate(cert: Certificate) -> str:
    lines = [f"lambda = {format_complex(cert.lam)}", f"itinerary: {cert.itinerary.to_line()}"]
    for c in cert.clauses:
        lines.append(f"{c.name}: {'pass' if c.passed else 'FAIL'} ({c.measured})")
    lines.append(f"certified: {'yes' if cert.passed else 'no'}")
    return "\n".join(lines) + "\n"
