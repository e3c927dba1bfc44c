import logging

from commands.base import BaseCommand, itinerary_inputs, spider_inputs
from core.errors import SolverError
from core.registry import register_command
from dynamics.export import write_trace_csv
from dynamics.oracle import format_certificate
from dynamics.spider import run_spider

logger = logging.getLogger("SineThurston.Commands")


@register_command("solve")
class SolveCommand(BaseCommand):
    """Run the pullback iteration for one itinerary and print the center."""
    DISPLAY_NAME = "Solve"

    @classmethod
    def INPUT_TYPES(cls):
        return {
            "required": {},
            "optional": {
                **itinerary_inputs(),
                **spider_inputs(),
                "trace": ("PATH",),
                "report": ("PATH",),
            },
        }

    def execute(self, period=None, k0=0, addresses=(), itinerary=None, tol=1e-12, max_iter=200,
                seed="default", seed_value=0, trace=None, report=None) -> int:
        it = self.resolve_itinerary(period, k0, addresses, itinerary)
        try:
            result, run_trace = run_spider(it, tol=tol, max_iter=max_iter,
                                           seed=self.seed_policy(seed, seed_value))
        except SolverError as e:
            if trace and e.trace is not None:
                write_trace_csv(e.trace, trace)
            raise

        if trace:
            write_trace_csv(run_trace, trace)
        if report and result.certificate is not None:
            with open(report, "w", encoding="utf-8", newline="\n") as f:
                f.write(format_certificate(result.certificate))

        self.emit(self.lambda_line(result.lambda_star))
        self.emit(f"itinerary = {it.to_line()}")
        self.emit(f"iterations = {result.iterations}")
        self.emit(f"final_displacement = {result.final_displacement:.17g}")
        self.emit(f"orbit_residual = {result.orbit_residual:.17g}")
        self.emit(f"exact_period = {result.exact_period}")
        self.emit(f"contraction_rate = {result.contraction_rate:.17g}")
        self.emit(f"certified = {'yes' if result.converged else 'no'}")
        if not result.converged:
            logger.warning(f"[Solve] {it}: {result.note}")
            return 2
        return 0
