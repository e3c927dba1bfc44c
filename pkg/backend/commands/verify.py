from commands.base import BaseCommand, itinerary_inputs
from core.registry import register_command
from dynamics.oracle import certify_center, format_certificate


@register_command("verify")
class VerifyCommand(BaseCommand):
    """Certify a candidate center against an itinerary."""
    DISPLAY_NAME = "Verify"

    @classmethod
    def INPUT_TYPES(cls):
        return {
            "required": {
                "lam": ("COMPLEX", {"flag": "--lambda"}),
            },
            "optional": {
                **itinerary_inputs(),
                "report": ("PATH",),
            },
        }

    def execute(self, lam, period=None, k0=0, addresses=(), itinerary=None, report=None) -> int:
        it = self.resolve_itinerary(period, k0, addresses, itinerary)
        cert = certify_center(lam, it)
        text = format_certificate(cert)
        if report:
            with open(report, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        self.emit(text)
        return 0 if cert.passed else 2
