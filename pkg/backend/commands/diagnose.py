import logging

from commands.base import BaseCommand, itinerary_inputs, spider_inputs
from core.errors import SolverError
from core.registry import register_command
from dynamics.diagnostics import format_report_table, geometry_report
from dynamics.export import write_metrics_csv, write_trace_csv
from dynamics.spider import run_spider

logger = logging.getLogger("SineThurston.Commands")


@register_command("diagnose")
class DiagnoseCommand(BaseCommand):
    """Run the iteration and report its geometry and contraction health."""
    DISPLAY_NAME = "Diagnose"

    @classmethod
    def INPUT_TYPES(cls):
        return {
            "required": {},
            "optional": {
                **itinerary_inputs(),
                **spider_inputs(),
                "trace": ("PATH",),
                "out": ("PATH",),
                "report": ("PATH",),
            },
        }

    def execute(self, period=None, k0=0, addresses=(), itinerary=None, tol=1e-12, max_iter=200,
                seed="default", seed_value=0, trace=None, out=None, report=None) -> int:
        it = self.resolve_itinerary(period, k0, addresses, itinerary)
        converged = False
        try:
            result, run_trace = run_spider(it, tol=tol, max_iter=max_iter,
                                           seed=self.seed_policy(seed, seed_value))
            converged = result.converged
            self.emit(self.lambda_line(result.lambda_star))
        except SolverError as e:
            # a failed run is still diagnosed from its partial trace
            if e.trace is None or len(e.trace) == 0:
                raise
            logger.warning(f"[Diagnose] {it}: {type(e).__name__}: {e}")
            run_trace = e.trace
            self.emit(f"run failed: {type(e).__name__}")

        geo = geometry_report(run_trace)
        table = format_report_table(geo)
        self.emit(table)

        if trace:
            write_trace_csv(run_trace, trace)
        if out:
            write_metrics_csv(geo, out)
        if report:
            with open(report, "w", encoding="utf-8", newline="\n") as f:
                f.write(table)

        if not converged or not geo.healthy:
            return 2
        return 0
