"""
Per-run health indicators: bounded geometry (separation), lambda bounds,
contraction rate and an inverse geodesic-length proxy.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.config import config
from core.errors import InputError, InsufficientDataError
from dynamics.inverse_branches import INFINITY, ExtendedPoint, PointLike, as_point, chordal_distance
from dynamics.model import IterationTrace, MarkedConfig

logger = logging.getLogger("SineThurston.Diagnostics")

BURN_IN_FRACTION = 0.2
MAJORIZATION_FACTOR = 3.0
MIN_CONTRACTION_STEPS = 5
MIRROR_DEDUP_TOL = 1e-10


@dataclass
class GeometryReport:
    min_lambda: float
    max_lambda: float
    min_separation: float
    rate_estimate: float
    proxy_lengths: List[Tuple[int, str, float]] = field(default_factory=list)
    final_separation: float = float("nan")
    lambda_alarm: bool = False
    contracting: bool = False
    bounded_geometry_ok: bool = False
    majorized_ok: bool = False
    steps: int = 0

    def metrics(self) -> List[Tuple[str, float]]:
        rows = [
            ("steps", float(self.steps)),
            ("min_lambda", self.min_lambda),
            ("max_lambda", self.max_lambda),
            ("min_separation", self.min_separation),
            ("final_separation", self.final_separation),
            ("rate_estimate", self.rate_estimate),
            ("lambda_alarm", float(self.lambda_alarm)),
            ("contracting", float(self.contracting)),
            ("bounded_geometry_ok", float(self.bounded_geometry_ok)),
            ("majorized_ok", float(self.majorized_ok)),
        ]
        if self.proxy_lengths:
            last_step = self.proxy_lengths[-1][0]
            for step, pid, value in self.proxy_lengths:
                if step == last_step:
                    rows.append((f"proxy_{pid}", value))
        return rows

    @property
    def healthy(self) -> bool:
        return not self.lambda_alarm and self.contracting


# ==========================================
# separation (bounded geometry)
# ==========================================
def _marked_set(cfg: MarkedConfig) -> List[ExtendedPoint]:
    primaries = [complex(cfg.anchor)] + [complex(z) for z in cfg.points]
    points: List[ExtendedPoint] = [ExtendedPoint(z) for z in primaries]
    points += [ExtendedPoint(0j), ExtendedPoint(complex(np.pi)), INFINITY]
    for z in primaries:
        mirror = -z
        # a self-symmetric cycle contains its own mirror images
        if any(chordal_distance(mirror, p) < MIRROR_DEDUP_TOL for p in primaries):
            continue
        points.append(ExtendedPoint(mirror))
    return points


def separation(cfg: MarkedConfig) -> float:
    """
    Minimum chordal distance over distinct pairs of
    {+-z_1..+-z_{m-1}, +-x_0, 0, pi, inf}.
    """
    points = _marked_set(cfg)
    return min(chordal_distance(p, q) for p, q in combinations(points, 2))


# ==========================================
# lambda bounds / contraction
# ==========================================
def lambda_bounds(trace: IterationTrace) -> Tuple[float, float]:
    if len(trace) == 0:
        raise InsufficientDataError("lambda_bounds needs a non-empty trace")
    moduli = np.abs(trace.lambdas)
    return float(moduli.min()), float(moduli.max())


def contraction_estimate(trace: IterationTrace) -> float:
    """
    Geometric mean of the last ceil(half) of the displacement ratios.
    Values >= 1 are returned as-is.
    """
    d = trace.displacements
    d = d[d > 0]
    if d.size < MIN_CONTRACTION_STEPS:
        raise InsufficientDataError(
            f"contraction estimate needs {MIN_CONTRACTION_STEPS} steps with positive "
            f"displacement, got {d.size}"
        )
    ratios = d[1:] / d[:-1]
    tail = ratios[-math.ceil(ratios.size / 2):]
    return float(np.exp(np.mean(np.log(tail))))


def burn_in(n_steps: int) -> int:
    """Index of the first step past the 20 % burn-in."""
    return int(math.ceil(BURN_IN_FRACTION * n_steps))


def displacements_majorized(trace: IterationTrace, rate: float,
                            factor: float = MAJORIZATION_FACTOR) -> bool:
    """
    d_n <= factor * C * rate^n for every step past burn-in, with C fitted
    from the first post-burn-in step.
    """
    d = trace.displacements
    start = burn_in(d.size)
    if start >= d.size or not (0 < rate < 1):
        return False
    n = np.arange(d.size - start, dtype=np.float64)
    bound = d[start] * np.power(rate, n)
    return bool(np.all(d[start:] <= factor * bound + np.finfo(float).tiny))


def separation_tail_ok(trace: IterationTrace) -> bool:
    """separation_n >= separation_final / 2 past burn-in."""
    s = trace.separations
    if s.size == 0:
        return False
    start = burn_in(s.size)
    return bool(np.all(s[start:] >= 0.5 * s[-1]))


# ==========================================
# inverse geodesic-length proxy
# ==========================================
def _cross_ratio(a: ExtendedPoint, b: ExtendedPoint, c: ExtendedPoint, d: ExtendedPoint) -> complex:
    """
    Image of b under the Moebius map sending a -> 0, c -> 1, d -> inf:
    (b-a)(c-d) / ((b-d)(c-a)), with factors involving inf dropped.
    """
    num = [(b, a), (c, d)]
    den = [(b, d), (c, a)]

    def product(pairs):
        value = 1 + 0j
        for p, q in pairs:
            if p.is_infinity or q.is_infinity:
                continue
            value *= p.value - q.value
        return value

    return product(num) / product(den)


def annulus_length_proxy(first: Tuple[PointLike, PointLike],
                         second: Tuple[PointLike, PointLike]) -> float:
    """
    Normalise so `second` -> {1, inf} and `first` -> {0, x}; return
    (1/2pi) * log(1/|x|) clamped below at 0.
    """
    a, b = as_point(first[0]), as_point(first[1])
    c, d = as_point(second[0]), as_point(second[1])
    pts = [a, b, c, d]
    for p, q in combinations(pts, 2):
        if chordal_distance(p, q) == 0.0:
            raise InputError("annulus_length_proxy needs four distinct points")
    x = _cross_ratio(a, b, c, d)
    return max(0.0, float(np.log(1.0 / abs(x)) / (2 * np.pi)))


def proxy_lengths_for(cfg: MarkedConfig) -> List[Tuple[str, float]]:
    """Proxies for ({0, lambda}, {pi, inf}) and ({0, pi}, {z_k, inf})."""
    out = []
    partitions = [("lambda", ((0j, cfg.lam), (complex(np.pi), INFINITY)))]
    for k, z in enumerate(cfg.points, start=1):
        partitions.append((f"x{k}", ((0j, complex(np.pi)), (z, INFINITY))))
    for pid, (first, second) in partitions:
        try:
            out.append((pid, annulus_length_proxy(first, second)))
        except InputError:
            logger.debug(f"[Diagnostics] partition {pid} degenerate, skipped")
    return out


# ==========================================
# report
# ==========================================
def geometry_report(trace: IterationTrace) -> GeometryReport:
    lo, hi = lambda_bounds(trace)
    seps = trace.separations
    try:
        rate = contraction_estimate(trace)
    except InsufficientDataError:
        rate = float("nan")

    proxies = []
    for index, step in enumerate(trace.steps):
        for pid, value in proxy_lengths_for(trace.config_at(index)):
            proxies.append((step.n, pid, value))

    if math.isnan(rate):
        # a configuration that never moves (m = 1) is trivially contracting
        stationary = bool(np.all(trace.displacements == 0))
        contracting = majorized = stationary
    else:
        contracting = rate < 1
        majorized = displacements_majorized(trace, rate)

    report = GeometryReport(
        min_lambda=lo,
        max_lambda=hi,
        min_separation=float(seps.min()),
        rate_estimate=rate,
        proxy_lengths=proxies,
        final_separation=float(seps[-1]),
        lambda_alarm=lo < config.LAMBDA_ALARM,
        contracting=contracting,
        bounded_geometry_ok=separation_tail_ok(trace),
        majorized_ok=majorized,
        steps=len(trace),
    )
    if report.lambda_alarm:
        logger.warning(f"[Diagnostics] min |lambda_n| = {lo:.3e} below {config.LAMBDA_ALARM:g}")
    if not math.isnan(rate) and rate >= 1:
        logger.warning(f"[Diagnostics] non-contracting run: rate estimate {rate:.4f}")
    return report


def format_report_table(report: GeometryReport) -> str:
    width = max(len(name) for name, _ in report.metrics())
    lines = [f"{'metric'.ljust(width)}  value"]
    for name, value in report.metrics():
        lines.append(f"{name.ljust(width)}  {value:.17g}")
    return "\n".join(lines) + "\n"
