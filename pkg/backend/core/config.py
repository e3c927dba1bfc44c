import logging
import multiprocessing
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from core.errors import InputError

logger = logging.getLogger("SineThurston.Config")


class AppConfig:
    """
    全局配置类：基于硬件资源的自适应配置

    设计原则：
    - 默认值保守，适合任意硬件
    - 所有配置都可通过环境变量覆盖
    - 资源检测结果写入日志，便于诊断
    """
    _instance = None

    # ---------- 基础配置（环境变量可覆盖） ----------
    # None = let dask pick (CPU count)
    N_THREADS: Optional[int] = None
    # rows of the parameter grid handled by one scan task
    BAND_ROWS = 16

    # ---------- numeric guards ----------
    LAMBDA_FLOOR = 1e-8
    SEPARATION_FLOOR = 1e-10
    CLOSURE_TOL = 1e-9
    PERIOD_TOL = 1e-6
    MULTIPLIER_TOL = 1e-8
    LAMBDA_ALARM = 1e-6

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(AppConfig, cls).__new__(cls)
            cls._instance._detect_environment()
        return cls._instance

    def _detect_environment(self):
        cpu_count = multiprocessing.cpu_count()
        logger.debug(f"  硬件自检: CPU={cpu_count}")

        # SINE_THURSTON_THREADS (0 or unset = auto)
        threads = os.getenv("SINE_THURSTON_THREADS")
        if threads:
            try:
                value = int(threads)
            except ValueError:
                logger.warning(f"   -> [Override] ignoring malformed SINE_THURSTON_THREADS={threads!r}")
                value = 0
            if value < 0:
                logger.warning(f"   -> [Override] ignoring negative SINE_THURSTON_THREADS={value}")
                value = 0
            self.N_THREADS = value or None
            logger.warning(f"   -> [Override] SINE_THURSTON_THREADS={threads}")

        if os.getenv("SINE_THURSTON_BAND_ROWS"):
            self.BAND_ROWS = max(1, int(os.getenv("SINE_THURSTON_BAND_ROWS")))
            logger.warning(f"   -> [Override] SINE_THURSTON_BAND_ROWS={self.BAND_ROWS}")

        threads_str = self.N_THREADS if self.N_THREADS else f"auto ({cpu_count})"
        logger.debug(f" 最终生效配置: Threads={threads_str}, BandRows={self.BAND_ROWS}")


config = AppConfig()


# ==========================================
# Run configuration (flags > config file > defaults)
# ==========================================
@dataclass
class RunConfig:
    command: str
    options: Dict[str, Any] = field(default_factory=dict)
    sources: Dict[str, str] = field(default_factory=dict)

    def get(self, name: str, default=None):
        return self.options.get(name, default)


def normalize_key(key: str) -> str:
    """`max-iter`, `--max-iter` and `max_iter` all name the same option."""
    return key.strip().lstrip("-").replace("-", "_")


def load_config_file(path: str) -> Dict[str, str]:
    """
    Parse a flat `key = value` file. Blank lines and `#` comments are skipped.

    Raises:
        OSError: the file cannot be read.
        InputError: a line is not of the form key = value.
    """
    values: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = line.split("=", 1)
            key = normalize_key(key)
            if not key:
                raise InputError(f"{path}:{lineno}: empty key")
            if key in values:
                logger.warning(f"[Config] {path}:{lineno}: '{key}' set twice, last value wins")
            values[key] = value.strip()
    logger.debug(f"[Config] Loaded {len(values)} option(s) from {path}")
    return values


def merge_run_config(command: str, flags: Dict[str, Any], file_values: Dict[str, Any],
                     defaults: Dict[str, Any]) -> RunConfig:
    run = RunConfig(command=command)
    for name, value in defaults.items():
        run.options[name] = value
        run.sources[name] = "default"
    for name, value in file_values.items():
        run.options[name] = value
        run.sources[name] = "config"
    for name, value in flags.items():
        if value is None:
            continue
        run.options[name] = value
        run.sources[name] = "flag"
    return run
