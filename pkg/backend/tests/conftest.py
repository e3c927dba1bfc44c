import os
import sys
import time

import numpy as np
import pytest
from scipy.optimize import brentq

BACKEND_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if BACKEND_DIR not in sys.path:
    sys.path.insert(0, BACKEND_DIR)

from core.errors import SolverError  # noqa: E402
from dynamics.combinatorics import Itinerary, enumerate_itineraries  # noqa: E402
from dynamics.spider import run_spider  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long numerical sweeps (full catalog, reference scan window)")


@pytest.fixture(scope="session")
def period2_root():
    """Real root of lambda*sin(lambda) = pi/2 on [2.4, 2.5]."""
    return brentq(lambda x: x * np.sin(x) - np.pi / 2, 2.4, 2.5, xtol=1e-15)


@pytest.fixture(scope="session")
def period2_itinerary():
    return Itinerary(m=2, k0=0, addresses=(1,))


@pytest.fixture(scope="session")
def period2_run(period2_itinerary):
    return run_spider(period2_itinerary)


@pytest.fixture(scope="session")
def catalog_sweep():
    """(rows, seconds): (itinerary, result or None, trace) for every m <= 4 itinerary with addresses in [-2, 2]."""
    rows = []
    started = time.perf_counter()
    for m in range(1, 5):
        for it in enumerate_itineraries(m, 2):
            try:
                result, trace = run_spider(it)
            except SolverError as e:
                result, trace = None, e.trace
            rows.append((it, result, trace))
    return rows, time.perf_counter() - started


@pytest.fixture(scope="session")
def catalog(catalog_sweep):
    return catalog_sweep[0]


@pytest.fixture(scope="session")
def converged_catalog(catalog):
    return [(it, result, trace) for it, result, trace in catalog if result is not None and result.converged]
