"""
Parameter-plane scanner: classify a grid of lambda values by the fate of the
critical value, render a component map, and extract refined centers.

Only the orbit of lambda = G(pi/2) is iterated. The orbit of -pi/2 is its
mirror image since G(-z) = -G(z).
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from PIL import Image
from scipy import ndimage

from core.config import config
from core.errors import InputError, SolverError
from core.type_system import Region
from dynamics.combinatorics import itinerary_of_parameter
from dynamics.inverse_branches import HALF_PI
from dynamics.model import CenterResult
from dynamics.oracle import certify_center, refine_closure
from services.dask_service import dask_service

logger = logging.getLogger("SineThurston.Scanner")

CENTER_DEDUP_TOL = 1e-6


class CellKind(enum.IntEnum):
    UNRESOLVED = 0
    ATTRACTING = 1
    ESCAPED = 2


@dataclass(frozen=True)
class ScanOptions:
    max_iter: int = 2000
    period_cap: int = 64
    esc_im: float = 100.0
    return_tol: float = 1e-9

    def validate(self) -> "ScanOptions":
        if self.max_iter < 1:
            raise InputError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.period_cap < 1:
            raise InputError(f"period_cap must be >= 1, got {self.period_cap}")
        if not self.esc_im > 0:
            raise InputError(f"esc_im must be positive, got {self.esc_im}")
        return self


@dataclass(frozen=True)
class CellClass:
    kind: CellKind
    period: int = 0
    # limit-cycle representative (last iterate)
    limit: Optional[complex] = None
    multiplier: float = float("nan")
    escape_step: int = 0

    @property
    def is_attracting(self) -> bool:
        return self.kind == CellKind.ATTRACTING


@dataclass
class ScanGrid:
    """
    Cell (i, j) is column i (left to right) of row j (top to bottom); arrays
    are indexed [j, i].
    """
    region: Region
    nx: int
    ny: int
    kind: np.ndarray
    period: np.ndarray
    limit: np.ndarray
    multiplier: np.ndarray
    escape_step: np.ndarray
    centers: List[CenterResult] = field(default_factory=list)

    @property
    def dx(self) -> float:
        return self.region.width / self.nx

    @property
    def dy(self) -> float:
        return self.region.height / self.ny

    @property
    def size(self) -> int:
        return int(self.kind.size)

    def cell_center(self, i: int, j: int) -> complex:
        return complex(self.region.x_min + (i + 0.5) * self.dx,
                       self.region.y_max - (j + 0.5) * self.dy)

    def cell_of(self, lam: complex) -> Optional[Tuple[int, int]]:
        """(i, j) of the cell containing lam, or None outside the region."""
        i = math.floor((lam.real - self.region.x_min) / self.dx)
        j = math.floor((self.region.y_max - lam.imag) / self.dy)
        if 0 <= i < self.nx and 0 <= j < self.ny:
            return i, j
        return None

    def cell(self, i: int, j: int) -> CellClass:
        kind = CellKind(int(self.kind[j, i]))
        if kind == CellKind.ATTRACTING:
            return CellClass(kind, period=int(self.period[j, i]), limit=complex(self.limit[j, i]),
                             multiplier=float(self.multiplier[j, i]))
        if kind == CellKind.ESCAPED:
            return CellClass(kind, escape_step=int(self.escape_step[j, i]))
        return CellClass(kind)

    def counts(self) -> dict:
        return {k.name.lower(): int(np.count_nonzero(self.kind == k)) for k in CellKind}


# ==========================================
# Classification kernel (vectorised over cells)
# ==========================================
def _classify_block(lams: np.ndarray, opts: ScanOptions, mirror: bool = False):
    """
    Iterate z -> lambda*sin(z) from z = lambda (or -lambda) for every entry.

    Returns (kind, period, limit, multiplier, escape_step) flat arrays.
    kind and period do not depend on the block shape; the multiplier can
    differ in the last bit between a band and a single cell.
    """
    lams = np.asarray(lams, dtype=np.complex128).ravel()
    n = lams.size
    cap = opts.period_cap
    first_kept = max(0, opts.max_iter - cap)
    history = np.zeros((opts.max_iter - first_kept + 1, n), dtype=np.complex128)

    z = -lams if mirror else lams.copy()
    alive = lams != 0
    escape_step = np.zeros(n, dtype=np.int32)
    escaped = np.zeros(n, dtype=bool)

    with np.errstate(all="ignore"):
        if first_kept == 0:
            history[0] = z
        for step in range(1, opts.max_iter + 1):
            z = np.where(alive, lams * np.sin(z), z)
            # NaN compares False and counts as escaped
            out = alive & ~(np.abs(z.imag) <= opts.esc_im)
            if out.any():
                escaped |= out
                escape_step[out] = step
                alive &= ~out
            if step >= first_kept:
                history[step - first_kept] = z

        period = np.zeros(n, dtype=np.int32)
        last = history[-1]
        for p in range(1, min(cap, history.shape[0] - 1) + 1):
            hit = alive & (period == 0) & (np.abs(last - history[-1 - p]) < opts.return_tol)
            period[hit] = p

        multiplier = np.full(n, np.nan)
        for p in np.unique(period[period > 0]):
            cols = period == p
            tail = history[-int(p):, cols]
            multiplier[cols] = np.prod(np.abs(lams[cols] * np.cos(tail)), axis=0)

    attracting = (period > 0) & (multiplier < 1)
    kind = np.full(n, int(CellKind.UNRESOLVED), dtype=np.int8)
    kind[attracting] = int(CellKind.ATTRACTING)
    kind[escaped] = int(CellKind.ESCAPED)

    period = np.where(attracting, period, 0).astype(np.int32)
    limit = np.where(attracting, last, np.nan + 0j)
    multiplier = np.where(attracting, multiplier, np.nan)
    return kind, period, limit, multiplier, escape_step


def classify_parameter(lam: complex, opts: ScanOptions | None = None, mirror: bool = False) -> CellClass:
    """
    Classify one parameter by the fate of its critical value. lambda = 0 is
    an excluded parameter and comes back unresolved. With mirror=True the
    mirrored critical value -lambda is iterated instead.
    """
    opts = (opts or ScanOptions()).validate()
    kind, period, limit, multiplier, escape_step = _classify_block(
        np.array([complex(lam)]), opts, mirror=mirror)
    k = CellKind(int(kind[0]))
    if k == CellKind.ATTRACTING:
        return CellClass(k, period=int(period[0]), limit=complex(limit[0]), multiplier=float(multiplier[0]))
    if k == CellKind.ESCAPED:
        return CellClass(k, escape_step=int(escape_step[0]))
    return CellClass(k)


# ==========================================
# Grid scan
# ==========================================
def _band_lambdas(region: Region, nx: int, ny: int, j0: int, j1: int) -> np.ndarray:
    dx = region.width / nx
    dy = region.height / ny
    xs = region.x_min + (np.arange(nx) + 0.5) * dx
    ys = region.y_max - (np.arange(j0, j1) + 0.5) * dy
    return xs[np.newaxis, :] + 1j * ys[:, np.newaxis]


def scan_grid(region: Region, resolution: Tuple[int, int], opts: ScanOptions | None = None) -> ScanGrid:
    opts = (opts or ScanOptions()).validate()
    nx, ny = int(resolution[0]), int(resolution[1])
    if nx <= 0 or ny <= 0:
        raise InputError(f"resolution must be positive, got {nx}x{ny}")
    if not (region.width > 0 and region.height > 0):
        raise InputError(f"region width and height must be positive, got {region.width} x {region.height}")

    band = max(1, int(config.BAND_ROWS))
    bands = [(j0, min(j0 + band, ny)) for j0 in range(0, ny, band)]
    logger.info(f"[Scan] {nx}x{ny} cells around {region.center} "
                f"({region.width:g} x {region.height:g}), {len(bands)} band(s)")

    def run_band(bounds):
        j0, j1 = bounds
        lams = _band_lambdas(region, nx, ny, j0, j1)
        return [a.reshape(j1 - j0, nx) for a in _classify_block(lams, opts)]

    parts = dask_service.map(run_band, bands, label="scan-band")
    kind, period, limit, multiplier, escape_step = (
        np.concatenate([p[k] for p in parts], axis=0) for k in range(5)
    )

    grid = ScanGrid(region=region, nx=nx, ny=ny, kind=kind, period=period, limit=limit,
                    multiplier=multiplier, escape_step=escape_step)

    # lambda = 0 is excluded from the family
    zero_cell = grid.cell_of(0j)
    if zero_cell is not None:
        i, j = zero_cell
        grid.kind[j, i] = int(CellKind.UNRESOLVED)
        grid.period[j, i] = 0
        grid.limit[j, i] = np.nan
        grid.multiplier[j, i] = np.nan
        grid.escape_step[j, i] = 0

    logger.info(f"[Scan] cells: {grid.counts()}")
    return grid


# ==========================================
# Center extraction
# ==========================================
def _cycle_points(lam: complex, period: int, opts: ScanOptions) -> List[complex]:
    z = complex(lam)
    with np.errstate(all="ignore"):
        for _ in range(opts.max_iter):
            z = complex(lam * np.sin(z))
            if not abs(z.imag) <= opts.esc_im:
                return []
        points = []
        for _ in range(period):
            points.append(z)
            z = complex(lam * np.sin(z))
    return points


def _anchor_index(points: List[complex]) -> Optional[int]:
    """Even k0 whose critical point pi/2 + k0*pi is nearest a cycle point (or its mirror)."""
    best: Optional[Tuple[float, int]] = None
    for c in points:
        for w in (c, -c):
            k = int(np.round((w.real - HALF_PI) / np.pi))
            for k0 in (k - 1, k, k + 1):
                if k0 % 2:
                    continue
                d = abs(w - (HALF_PI + k0 * np.pi))
                if best is None or d < best[0]:
                    best = (d, k0)
    return None if best is None else best[1]


def _unrefined(seed: complex, period: int, note: str) -> CenterResult:
    return CenterResult(
        lambda_star=seed,
        iterations=0,
        final_displacement=float("nan"),
        orbit_residual=float("nan"),
        exact_period=0,
        contraction_rate=float("nan"),
        converged=False,
        period=period,
        note=note,
    )


def _refine_region(grid: ScanGrid, region_mask: np.ndarray, period: int, opts: ScanOptions) -> CenterResult:
    masked = np.where(region_mask, grid.multiplier, np.inf)
    j, i = np.unravel_index(int(np.argmin(masked)), masked.shape)
    seed = grid.cell_center(int(i), int(j))

    k0 = _anchor_index(_cycle_points(seed, period, opts))
    if k0 is None:
        return _unrefined(seed, period, "seed orbit left the scan window")
    try:
        lam, steps, step_len = refine_closure(seed, period, k0)
    except SolverError as e:
        return _unrefined(seed, period, f"refinement failed: {e}")

    home = grid.cell_of(lam)
    if home is None or not region_mask[home[1], home[0]]:
        return _unrefined(seed, period, f"refinement left the region (lambda={lam:.6g})")

    try:
        it = itinerary_of_parameter(lam, period)
    except SolverError as e:
        return _unrefined(seed, period, f"itinerary unreadable: {e}")

    cert = certify_center(lam, it)
    return CenterResult(
        lambda_star=lam,
        iterations=steps,
        final_displacement=step_len,
        orbit_residual=cert.closure_error,
        exact_period=cert.exact_period,
        contraction_rate=float("nan"),
        converged=cert.passed,
        period=period,
        itinerary=it,
        certificate=cert,
        note="" if cert.passed else "certificate failed",
    )


def extract_centers(grid: ScanGrid, opts: ScanOptions | None = None) -> List[CenterResult]:
    """
    One Newton-refined center per connected same-period region, seeded from
    the cell with the smallest cycle multiplier. Centers closer than 1e-6 to
    an earlier one are dropped.
    """
    opts = (opts or ScanOptions()).validate()
    if grid.size == 0:
        return []

    attracting = grid.kind == int(CellKind.ATTRACTING)
    results: List[CenterResult] = []
    for p in sorted(int(v) for v in np.unique(grid.period[attracting])):
        labels, count = ndimage.label(attracting & (grid.period == p))
        for r in range(1, count + 1):
            result = _refine_region(grid, labels == r, p, opts)
            if result.converged and any(
                c.converged and abs(c.lambda_star - result.lambda_star) < CENTER_DEDUP_TOL for c in results
            ):
                continue
            if result.converged:
                logger.info(f"[Scan] period {p} center lambda = {result.lambda_star:.15g}")
            else:
                logger.warning(f"[Scan] period {p} region near {result.lambda_star:.6g} unrefined: {result.note}")
            results.append(result)

    grid.centers = results
    return results


# ==========================================
# PGM rendering
# ==========================================
def cell_shades(grid: ScanGrid) -> np.ndarray:
    """escaped -> 255, unresolved -> 0, attracting period p -> 32 + 16*((p-1) mod 13)."""
    shades = np.zeros(grid.kind.shape, dtype=np.uint8)
    shades[grid.kind == int(CellKind.ESCAPED)] = 255
    attracting = grid.kind == int(CellKind.ATTRACTING)
    shades[attracting] = (32 + 16 * ((grid.period[attracting].astype(np.int64) - 1) % 13)).astype(np.uint8)
    return shades


def write_pgm(grid: ScanGrid, path: str) -> None:
    """Binary PGM (P5, maxval 255), one byte per cell, top row first."""
    image = Image.fromarray(np.ascontiguousarray(cell_shades(grid)))
    image.save(path, format="PPM")
    logger.info(f"[Scan] wrote {grid.nx}x{grid.ny} map to {path}")
