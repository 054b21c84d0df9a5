"""Worker-count control: MODNET_THREADS caps any internal parallelism."""

from __future__ import annotations

import os


def thread_count(default_cap: int = 4) -> int:
    raw = os.environ.get("MODNET_THREADS")
    if raw is None:
        return max(1, min(default_cap, os.cpu_count() or 1))
    try:
        val = int(raw)
    except ValueError as exc:
        raise ValueError(f"MODNET_THREADS must be a positive integer, got {raw!r}") from exc
    if val < 1:
        raise ValueError("MODNET_THREADS must be >= 1")
    return val
