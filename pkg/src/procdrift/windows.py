"""Sliding sub-log windows over the start-time-sorted trace sequence."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from .log import EventLog


class WindowError(ValueError):
    """Raised for window parameters that cannot be applied to a log."""


@dataclass(frozen=True)
class WindowConfig:
    win_size: int
    win_step: int

    def validate(self, log_size: int) -> None:
        if self.win_step < 1:
            raise WindowError(f"win_step must be >= 1, got {self.win_step}")
        if self.win_size < self.win_step:
            raise WindowError(
                f"win_size ({self.win_size}) must be >= win_step ({self.win_step})"
            )
        if self.win_size > log_size:
            raise WindowError(
                f"win_size ({self.win_size}) exceeds log size ({log_size})"
            )


@dataclass(frozen=True)
class SubLogWindow:
    index: int
    first: int  # trace index, inclusive
    last: int   # trace index, inclusive
    span: tuple[datetime, datetime]  # start timestamps of first/last trace

    @property
    def size(self) -> int:
        return self.last - self.first + 1


def default_window_config(log_size: int) -> WindowConfig:
    """Default step |L|/61 and size 2*step; small logs fall back to |L|/10."""
    if log_size < 2:
        raise WindowError(f"log must contain at least 2 traces, got {log_size}")
    step = log_size // 61
    if step < 2:
        step = max(1, log_size // 10)
    size = min(2 * step, log_size)
    return WindowConfig(win_size=size, win_step=step)


def window_count(log_size: int, cfg: WindowConfig) -> int:
    """Number of emitted windows.

    Primary count is (|L| - size - step) // step, which drops a trailing
    remainder; when that is < 1 (tiny logs) every fully populated window is
    emitted instead: (|L| - size) // step + 1.
    """
    primary = (log_size - cfg.win_size - cfg.win_step) // cfg.win_step
    if primary >= 1:
        return primary
    return (log_size - cfg.win_size) // cfg.win_step + 1


def make_windows(log: EventLog, cfg: WindowConfig) -> list[SubLogWindow]:
    cfg.validate(len(log))
    n = window_count(len(log), cfg)
    windows = []
    for j in range(n):
        first = j * cfg.win_step
        last = first + cfg.win_size - 1
        span = (log.traces[first].start, log.traces[last].start)
        windows.append(SubLogWindow(index=j, first=first, last=last, span=span))
    return windows
