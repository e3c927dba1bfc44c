from __future__ import annotations

import logging
import sys
from typing import List, Optional

from core.errors import InputError
from core.type_system import format_complex
from dynamics.combinatorics import Itinerary, read_itinerary_file, validate_itinerary
from dynamics.spider import SeedPolicy

logger = logging.getLogger("SineThurston.Commands")

SEED_POLICIES = ["default", "random"]


# ==========================================
# Shared option blocks
# ==========================================
def itinerary_inputs() -> dict:
    return {
        "period": ("INT", {"min": 1}),
        "k0": ("INT", {"default": 0}),
        "addresses": ("INT_LIST", {"default": ""}),
        "itinerary": ("PATH",),
    }


def spider_inputs() -> dict:
    return {
        "tol": ("FLOAT", {"default": 1e-12, "positive": True}),
        "max_iter": ("INT", {"default": 200, "min": 1}),
        "seed": (SEED_POLICIES, {"default": "default"}),
        "seed_value": ("INT", {"default": 0, "min": 0}),
    }


class BaseCommand:
    """
    命令基类：INPUT_TYPES 声明选项，FUNCTION 指定入口方法（返回退出码）。
    """
    FUNCTION = "execute"

    @classmethod
    def INPUT_TYPES(cls):
        return {"required": {}, "optional": {}}

    # results go to stdout; diagnostics go through logging (stderr)
    @staticmethod
    def emit(text: str = "") -> None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")

    @staticmethod
    def resolve_itinerary(period: Optional[int], k0: int, addresses: List[int],
                          itinerary: Optional[str]) -> Itinerary:
        """--itinerary FILE (first entry) or --period/--k0/--addresses."""
        if itinerary:
            entries = read_itinerary_file(itinerary)
            if not entries:
                raise InputError(f"{itinerary}: no itinerary found")
            if len(entries) > 1:
                logger.info(f"[Commands] {itinerary}: using the first of {len(entries)} itineraries")
            return entries[0]
        if period is None:
            raise InputError("either --period or --itinerary is required")
        return validate_itinerary({"m": period, "k0": k0, "addresses": list(addresses or [])})

    @staticmethod
    def seed_policy(seed: str, seed_value: int) -> SeedPolicy:
        if seed == "random":
            return SeedPolicy.random(seed_value)
        return SeedPolicy.default()

    @staticmethod
    def lambda_line(lam: complex) -> str:
        return f"lambda = {format_complex(lam)}"

    def execute(self, **kwargs) -> int:
        raise NotImplementedError
