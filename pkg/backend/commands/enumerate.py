import logging
import math

from commands.base import BaseCommand, spider_inputs
from core.errors import SolverError
from core.registry import register_command
from core.type_system import format_complex
from dynamics.combinatorics import enumerate_itineraries, write_itinerary_file
from dynamics.export import write_catalog_csv
from dynamics.spider import run_spider
from services.dask_service import dask_service

logger = logging.getLogger("SineThurston.Commands")


@register_command("enumerate")
class EnumerateCommand(BaseCommand):
    """List every itinerary of a period with addresses in [-K, K]; optionally solve each."""
    DISPLAY_NAME = "Enumerate"

    @classmethod
    def INPUT_TYPES(cls):
        return {
            "required": {
                "period": ("INT", {"min": 1}),
            },
            "optional": {
                "K": ("INT", {"default": 1, "min": 0}),
                "solve": ("BOOLEAN", {"default": False}),
                **spider_inputs(),
                "out": ("PATH",),
            },
        }

    def execute(self, period, K=1, solve=False, tol=1e-12, max_iter=200, seed="default",
                seed_value=0, out=None) -> int:
        itineraries = enumerate_itineraries(period, K)
        logger.info(f"[Enumerate] period {period}, K {K}: {len(itineraries)} itinerary(ies)")

        if not solve:
            for it in itineraries:
                self.emit(it.to_line())
            if out:
                write_itinerary_file(out, itineraries)
            return 0

        policy = self.seed_policy(seed, seed_value)

        def solve_one(it):
            try:
                result, trace = run_spider(it, tol=tol, max_iter=max_iter, seed=policy)
                return it, result, trace, "converged" if result.converged else "uncertified"
            except SolverError as e:
                logger.info(f"[Enumerate] {it}: {type(e).__name__}: {e}")
                return it, None, e.trace, type(e).__name__

        outcomes = dask_service.map(solve_one, itineraries, label="solve")

        rows = []
        for it, result, trace, status in outcomes:
            rows.append((it.to_line(), result, trace))
            line = f"{it.to_line()}  {status}"
            if result is not None:
                line += f"  lambda = {format_complex(result.lambda_star)}"
                if not math.isnan(result.contraction_rate):
                    line += f"  rate = {result.contraction_rate:.6g}"
            self.emit(line)

        if out:
            write_catalog_csv(rows, out)
        return 0
