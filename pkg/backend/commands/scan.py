import logging

from commands.base import BaseCommand
from core.registry import register_command
from core.type_system import format_complex
from dynamics.export import write_centers_csv
from dynamics.scanner import ScanOptions, extract_centers, scan_grid, write_pgm

logger = logging.getLogger("SineThurston.Commands")


@register_command("scan")
class ScanCommand(BaseCommand):
    """Classify a parameter-plane grid, render it and extract centers."""
    DISPLAY_NAME = "Scan"

    @classmethod
    def INPUT_TYPES(cls):
        return {
            "required": {},
            "optional": {
                "region": ("REGION", {"default": "2,0,2,0.4"}),
                "res": ("RESOLUTION", {"default": "256x64"}),
                "period_cap": ("INT", {"default": 64, "min": 1}),
                "max_iter": ("INT", {"default": 2000, "min": 1}),
                "esc_im": ("FLOAT", {"default": 100.0, "positive": True}),
                "out": ("PATH",),
                "centers": ("PATH",),
            },
        }

    def execute(self, region, res, period_cap=64, max_iter=2000, esc_im=100.0, out=None, centers=None) -> int:
        opts = ScanOptions(max_iter=max_iter, period_cap=period_cap, esc_im=esc_im)
        grid = scan_grid(region, res, opts)
        found = extract_centers(grid, opts)

        if out:
            write_pgm(grid, out)
        if centers:
            write_centers_csv(found, centers)

        counts = grid.counts()
        self.emit(f"cells = {grid.size} (attracting {counts['attracting']}, "
                  f"escaped {counts['escaped']}, unresolved {counts['unresolved']})")
        for c in found:
            status = "certified" if c.converged else f"unrefined ({c.note})"
            self.emit(f"period {c.period}: lambda = {format_complex(c.lambda_star)} {status}")

        if counts["unresolved"] == grid.size:
            logger.warning("[Scan] every cell is unresolved")
            return 2
        return 0
