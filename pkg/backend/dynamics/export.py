"""
CSV artifacts. Every float is written with 17 significant digits and
missing values as empty fields.
"""

from __future__ import annotations

import logging
from typing import Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd

from dynamics.diagnostics import GeometryReport, lambda_bounds
from dynamics.model import CenterResult, IterationTrace

logger = logging.getLogger("SineThurston.Export")

FLOAT_FORMAT = "%.17g"

TRACE_COLUMNS = ["n", "re_lambda", "im_lambda", "displacement", "separation", "ratio"]
METRIC_COLUMNS = ["metric", "value"]
CENTER_COLUMNS = ["re_lambda", "im_lambda", "period", "residual", "certified"]
CATALOG_COLUMNS = ["itinerary", "converged", "re_lambda", "im_lambda",
                   "min_abs_lambda", "min_separation", "rate"]


def _write(df: pd.DataFrame, path: str) -> None:
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
    logger.debug(f"[Export] {len(df)} row(s) -> {path}")


def trace_frame(trace: IterationTrace) -> pd.DataFrame:
    lams = trace.lambdas
    return pd.DataFrame({
        "n": np.array([s.n for s in trace.steps], dtype=np.int64),
        "re_lambda": lams.real,
        "im_lambda": lams.imag,
        "displacement": trace.displacements,
        "separation": trace.separations,
        "ratio": np.array([np.nan if s.ratio is None else s.ratio for s in trace.steps], dtype=np.float64),
    }, columns=TRACE_COLUMNS)


def write_trace_csv(trace: IterationTrace, path: str) -> None:
    _write(trace_frame(trace), path)


def write_metrics_csv(report: GeometryReport, path: str) -> None:
    df = pd.DataFrame(report.metrics(), columns=METRIC_COLUMNS)
    _write(df, path)


def centers_frame(centers: Iterable[CenterResult]) -> pd.DataFrame:
    rows = [
        {
            "re_lambda": c.lambda_star.real,
            "im_lambda": c.lambda_star.imag,
            "period": c.period,
            "residual": c.orbit_residual,
            "certified": int(bool(c.converged)),
        }
        for c in centers
    ]
    return pd.DataFrame(rows, columns=CENTER_COLUMNS)


def write_centers_csv(centers: Iterable[CenterResult], path: str) -> None:
    _write(centers_frame(centers), path)


CatalogRow = Tuple[str, Optional[CenterResult], Optional[IterationTrace]]


def catalog_frame(rows: Iterable[CatalogRow]) -> pd.DataFrame:
    """One row per attempted itinerary; a run that raised has no result but may keep its trace."""
    records: List[dict] = []
    for label, result, trace in rows:
        has_trace = trace is not None and len(trace) > 0
        lam = result.lambda_star if result is not None else None
        records.append({
            "itinerary": label,
            "converged": int(result is not None and result.converged),
            "re_lambda": lam.real if lam is not None else np.nan,
            "im_lambda": lam.imag if lam is not None else np.nan,
            "min_abs_lambda": lambda_bounds(trace)[0] if has_trace else np.nan,
            "min_separation": float(trace.separations.min()) if has_trace else np.nan,
            "rate": result.contraction_rate if result is not None else np.nan,
        })
    return pd.DataFrame(records, columns=CATALOG_COLUMNS)


def write_catalog_csv(rows: Iterable[CatalogRow], path: str) -> None:
    _write(catalog_frame(rows), path)
