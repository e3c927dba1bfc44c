"""
运行监控工具：记录一次命令执行的耗时与进程内存。

使用方式：
    from utils.run_monitor import get_run_monitor

    with get_run_monitor().track("solve"):
        ...
"""

import logging
import os
import time
from contextlib import contextmanager
from typing import Any, Dict, Optional

import psutil

logger = logging.getLogger("SineThurston.Monitor")


class RunMonitor:
    """
    记录和对比运行快照（时间戳 + RSS）。
    """

    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self.snapshots: Dict[str, Dict[str, Any]] = {}

    def _get_process_memory_mb(self) -> Optional[float]:
        try:
            return psutil.Process(os.getpid()).memory_info().rss / (1024 * 1024)
        except Exception as e:
            logger.debug(f"[Monitor] Failed to get process memory: {e}")
            return None

    def take_snapshot(self, name: str) -> Dict[str, Any]:
        snapshot = {
            "timestamp": time.perf_counter(),
            "process_mb": self._get_process_memory_mb(),
        }
        self.snapshots[name] = snapshot
        return snapshot

    def log_delta(self, name1: str, name2: str) -> Dict[str, Any]:
        s1 = self.snapshots.get(name1)
        s2 = self.snapshots.get(name2)
        if not s1 or not s2:
            logger.warning(f"[Monitor] Cannot compute delta: missing snapshots {name1} or {name2}")
            return {}

        delta = {"time_elapsed_s": s2["timestamp"] - s1["timestamp"]}
        parts = [f"elapsed={delta['time_elapsed_s']:.3f}s"]
        if s1["process_mb"] and s2["process_mb"]:
            delta["process_delta_mb"] = s2["process_mb"] - s1["process_mb"]
            sign = "+" if delta["process_delta_mb"] >= 0 else ""
            parts.append(f"RSS={s2['process_mb']:.0f}MB ({sign}{delta['process_delta_mb']:.1f}MB)")

        logger.info(f"[Monitor] {name1} -> {name2}: {' | '.join(parts)}")
        return delta

    @contextmanager
    def track(self, name: str):
        if not self.enabled:
            yield
            return
        self.snapshots.clear()
        self.take_snapshot(f"{name}:start")
        try:
            yield
        finally:
            self.take_snapshot(f"{name}:end")
            self.log_delta(f"{name}:start", f"{name}:end")


# 全局单例
_run_monitor: Optional[RunMonitor] = None


def get_run_monitor() -> RunMonitor:
    global _run_monitor
    if _run_monitor is None:
        _run_monitor = RunMonitor()
    return _run_monitor
