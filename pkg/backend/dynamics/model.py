"""
Value types passed between the spider, the oracle and the diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

import numpy as np

from dynamics.inverse_branches import HALF_PI


@dataclass(frozen=True)
class MarkedConfig:
    """
    Images z_1..z_{m-1} of the marked orbit points under the current
    normalising map. The anchor x_0 = pi/2 + k0*pi is implied by k0 and never
    stored per step; lambda is z_{m-1} (or x_0 when m = 1).
    """
    points: Tuple[complex, ...]
    k0: int = 0

    @property
    def m(self) -> int:
        return len(self.points) + 1

    @property
    def anchor(self) -> float:
        return HALF_PI + self.k0 * np.pi

    @property
    def lam(self) -> complex:
        return self.points[-1] if self.points else complex(self.anchor)

    def with_anchor(self) -> Tuple[complex, ...]:
        """(z_0 = x_0, z_1, ..., z_{m-1})"""
        return (complex(self.anchor),) + tuple(self.points)

    def negated(self) -> "MarkedConfig":
        return MarkedConfig(points=tuple(-z for z in self.points), k0=self.k0)


@dataclass(frozen=True)
class StepRecord:
    n: int
    lam: complex
    displacement: float
    separation: float
    ratio: Optional[float]
    points: Tuple[complex, ...] = ()


@dataclass
class IterationTrace:
    steps: List[StepRecord] = field(default_factory=list)
    k0: int = 0

    def append(self, record: StepRecord) -> None:
        self.steps.append(record)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([s.lam for s in self.steps], dtype=np.complex128)

    @property
    def displacements(self) -> np.ndarray:
        return np.array([s.displacement for s in self.steps], dtype=np.float64)

    @property
    def separations(self) -> np.ndarray:
        return np.array([s.separation for s in self.steps], dtype=np.float64)

    def config_at(self, index: int) -> MarkedConfig:
        return MarkedConfig(points=self.steps[index].points, k0=self.k0)


@dataclass
class CenterResult:
    lambda_star: complex
    iterations: int
    final_displacement: float
    orbit_residual: float
    exact_period: int
    contraction_rate: float
    converged: bool
    # requested period m
    period: int = 0
    itinerary: Optional[Any] = None
    certificate: Optional[Any] = None
    note: str = ""
