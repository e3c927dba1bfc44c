"""
Pullback iteration on marked configurations.

One step pulls the marked points back through g_n(z) = lambda_n*sin(z):
    z'_{l+1} = addressed_arcsin(z_l / lambda_n, a_{l+1}),  l = 0..m-2,
with z_0 = x_0 held fixed, and lambda_{n+1} = z'_{m-1}. A fixed point of
the step is a parameter whose critical orbit x_0 -> lambda -> ... closes up.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from core.config import config
from core.errors import DegeneracyError, DivergenceError, InputError, InsufficientDataError
from dynamics.combinatorics import Itinerary
from dynamics.diagnostics import contraction_estimate, separation
from dynamics.inverse_branches import addressed_arcsin, chordal_distance
from dynamics.model import CenterResult, IterationTrace, MarkedConfig, StepRecord
from dynamics.oracle import certify_center

logger = logging.getLogger("SineThurston.Spider")

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200
SEED_OFFSET = complex(0.4, 0.3)
SEED_RADIUS = 0.5
SEED_ATTEMPTS = 100


@dataclass(frozen=True)
class SeedPolicy:
    """
    default  z_l = x_0 + l*(0.4 + 0.3i)
    random   default point plus a uniform point of the disk of radius 0.5,
             redrawn until every point stays in the upper half-plane
    explicit the given points
    """
    kind: str = "default"
    seed_value: int = 0
    points: Tuple[complex, ...] = field(default_factory=tuple)

    @classmethod
    def default(cls) -> "SeedPolicy":
        return cls("default")

    @classmethod
    def random(cls, seed_value: int = 0) -> "SeedPolicy":
        return cls("random", seed_value=int(seed_value))

    @classmethod
    def explicit(cls, points: Sequence[complex]) -> "SeedPolicy":
        return cls("explicit", points=tuple(complex(z) for z in points))


def _config_ok(cfg: MarkedConfig) -> bool:
    if cfg.m >= 2 and abs(cfg.lam) < config.LAMBDA_FLOOR:
        return False
    if not all(np.isfinite(z.real) and np.isfinite(z.imag) for z in cfg.points):
        return False
    return separation(cfg) >= config.SEPARATION_FLOOR


def _same_half_plane(points: Sequence[complex], base: Sequence[complex]) -> bool:
    # addresses only see Re z, the half-plane picks which of a conjugate pair of centers is reached
    return all(np.sign(z.imag) == np.sign(b.imag) for z, b in zip(points, base))


def initial_configuration(it: Itinerary, seed: SeedPolicy | None = None) -> MarkedConfig:
    seed = seed or SeedPolicy.default()
    x0 = it.anchor
    base = tuple(complex(x0) + l * SEED_OFFSET for l in range(1, it.m))

    if seed.kind == "default":
        return MarkedConfig(points=base, k0=it.k0)

    if seed.kind == "explicit":
        if len(seed.points) != it.m - 1:
            raise ValueError(f"explicit seed needs {it.m - 1} point(s), got {len(seed.points)}")
        return MarkedConfig(points=seed.points, k0=it.k0)

    if seed.kind != "random":
        raise ValueError(f"unknown seed policy {seed.kind!r}")

    rng = np.random.default_rng(seed.seed_value)
    cfg = MarkedConfig(points=base, k0=it.k0)
    for attempt in range(1, SEED_ATTEMPTS + 1):
        r = SEED_RADIUS * np.sqrt(rng.random(len(base)))
        theta = 2 * np.pi * rng.random(len(base))
        jitter = r * np.exp(1j * theta)
        cfg = MarkedConfig(points=tuple(z + complex(j) for z, j in zip(base, jitter)), k0=it.k0)
        if _same_half_plane(cfg.points, base) and _config_ok(cfg):
            return cfg
        logger.debug(f"[Spider] random seed attempt {attempt} rejected")
    logger.warning(f"[Spider] no valid random seed after {SEED_ATTEMPTS} attempts, using the last draw")
    return cfg


def pullback_step(cfg: MarkedConfig, it: Itinerary) -> MarkedConfig:
    if it.m == 1:
        return cfg
    lam = cfg.lam
    if abs(lam) < config.LAMBDA_FLOOR:
        raise DegeneracyError(
            f"lambda underflow |lambda| = {abs(lam):.3e} < {config.LAMBDA_FLOOR:g}: "
            f"degenerate or unrealizable combinatorics"
        )
    source = cfg.with_anchor()
    new_points = []
    for l in range(it.m - 1):
        w = source[l] / lam
        if not (np.isfinite(w.real) and np.isfinite(w.imag)):
            raise DegeneracyError(f"non-finite pullback argument z_{l}/lambda = {w}")
        new_points.append(addressed_arcsin(w, it.addresses[l]))
    return MarkedConfig(points=tuple(new_points), k0=cfg.k0)


def residual(cfg: MarkedConfig, it: Itinerary) -> float:
    """max_l |lambda*sin(z_{l+1 mod m}) - z_l| with z_0 = x_0."""
    z = cfg.with_anchor()
    lam = cfg.lam
    m = it.m
    return float(max(abs(lam * np.sin(z[(l + 1) % m]) - z[l]) for l in range(m)))


def _displacement(old: MarkedConfig, new: MarkedConfig) -> float:
    if not old.points:
        return 0.0
    return max(chordal_distance(a, b) for a, b in zip(old.points, new.points))


def run_spider(it: Itinerary, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
               seed: SeedPolicy | None = None) -> Tuple[CenterResult, IterationTrace]:
    """
    Iterate pullback_step until the displacement drops below tol.

    Raises:
        DivergenceError: budget exhausted above tol.
        DegeneracyError: lambda or separation floor breached.
    Both carry the partial trace.
        InputError: max_iter < 1.
    """
    if max_iter < 1:
        raise InputError(f"max_iter must be >= 1, got {max_iter}")
    cfg = initial_configuration(it, seed)
    trace = IterationTrace(k0=it.k0)
    previous: Optional[float] = None
    converged_steps = False

    for n in range(1, max_iter + 1):
        try:
            new_cfg = pullback_step(cfg, it)
        except DegeneracyError as e:
            e.trace = trace
            logger.debug(f"[Spider] {it}: degenerate at step {n}: {e}")
            raise
        disp = _displacement(cfg, new_cfg)
        sep = separation(new_cfg)
        ratio = disp / previous if (previous is not None and previous > 0) else None
        trace.append(StepRecord(n=n, lam=new_cfg.lam, displacement=disp, separation=sep,
                                ratio=ratio, points=new_cfg.points))
        logger.debug(f"[Spider] n={n} lambda={new_cfg.lam:.12g} disp={disp:.3e} sep={sep:.3e}")
        if sep < config.SEPARATION_FLOOR:
            raise DegeneracyError(
                f"separation {sep:.3e} below {config.SEPARATION_FLOOR:g} at step {n}: marked points collide",
                trace=trace,
            )
        cfg = new_cfg
        previous = disp
        if disp < tol:
            converged_steps = True
            break

    if not converged_steps:
        raise DivergenceError(
            f"{it}: no convergence in {max_iter} steps (last displacement {previous:.3e})",
            trace=trace,
        )

    cert = certify_center(cfg.lam, it)
    try:
        rate = contraction_estimate(trace)
    except InsufficientDataError:
        rate = float("nan")

    result = CenterResult(
        lambda_star=cfg.lam,
        iterations=len(trace),
        final_displacement=trace.steps[-1].displacement,
        orbit_residual=cert.closure_error,
        exact_period=cert.exact_period,
        contraction_rate=rate,
        converged=cert.passed,
        period=it.m,
        itinerary=it,
        certificate=cert,
    )
    if cert.passed:
        logger.info(f"[Spider] {it}: lambda* = {cfg.lam:.15g} after {len(trace)} step(s), rate {rate:.4g}")
    else:
        failed = [c.name for c in cert.clauses if not c.passed]
        result.note = "certificate failed: " + ", ".join(failed)
        logger.warning(f"[Spider] {it}: iteration settled at {cfg.lam:.15g} but {result.note}")
    return result, trace
