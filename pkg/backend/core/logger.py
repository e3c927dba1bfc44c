import logging
import os
import sys

# 配置格式
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def default_level() -> str:
    return os.getenv("SINE_THURSTON_LOG_LEVEL", "INFO").upper()


def setup_logging(level=None):
    """
    初始化全局日志配置

    Diagnostics go to stderr; stdout is reserved for command results.
    """
    if level is None:
        level = default_level()

    # 1. 基础配置
    logging.basicConfig(
        level=logging.WARNING,
        format=LOG_FORMAT,
        handlers=[
            logging.StreamHandler(sys.stderr)
        ]
    )

    # 2. 返回主 Logger
    logger = logging.getLogger("SineThurston")
    logger.setLevel(level)
    return logger


def set_level(level) -> None:
    """Re-level the project logger tree (used by -v/--verbose)."""
    logging.getLogger("SineThurston").setLevel(level)


# 创建单例 logger 供其他模块导入
logger = setup_logging()
