"""Scalar metrics and stationarity diagnostics for confidence series."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def spread(matrix: np.ndarray) -> float:
    """Mean over rows of (row max - row min)."""
    arr = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if arr.size == 0:
        return 0.0
    return float(np.mean(arr.max(axis=1) - arr.min(axis=1)))


def erratic(matrix: np.ndarray) -> float:
    """Sum over rows of sqrt(1 + (delta * n)^2), delta = total absolute change.

    A constant row contributes exactly 1, so a matrix of m constant rows
    scores m.
    """
    arr = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if arr.size == 0:
        return 0.0
    n = arr.shape[1]
    delta = np.abs(np.diff(arr, axis=1)).sum(axis=1)
    return float(np.sum(np.sqrt(1.0 + (delta * n) ** 2)))


@dataclass(frozen=True)
class AdfResult:
    statistic: float | None  # None when the series is degenerate
    p_value: float
    used_lag: int

    def stationary(self, alpha: float = 0.05) -> bool:
        return self.p_value < alpha


def adf_test(series: np.ndarray, max_lag: int | None = None) -> AdfResult:
    """Augmented Dickey-Fuller test (constant term, AIC lag selection).

    Lag order is capped at floor((n-1)^(1/3)). A constant series is trivially
    stationary (p = 0) by convention, as is any series too degenerate for the
    regression to run.
    """
    x = np.asarray(series, dtype=np.float64)
    n = len(x)
    if n < 4 or np.allclose(x, x[0]):
        return AdfResult(statistic=None, p_value=0.0, used_lag=0)
    if max_lag is None:
        max_lag = int((n - 1) ** (1.0 / 3.0))
    max_lag = max(0, min(max_lag, n // 2 - 2))
    from statsmodels.tsa.stattools import adfuller

    try:
        stat, p_value, used_lag, *_ = adfuller(
            x, maxlag=max_lag, regression="c", autolag="AIC"
        )
    except (ValueError, np.linalg.LinAlgError):
        return AdfResult(statistic=None, p_value=0.0, used_lag=0)
    if math.isnan(p_value):
        return AdfResult(statistic=None, p_value=0.0, used_lag=int(used_lag))
    return AdfResult(statistic=float(stat), p_value=float(p_value), used_lag=int(used_lag))


@dataclass(frozen=True)
class AcfResult:
    values: tuple[float, ...]       # r[0..max_lag], r[0] == 1
    significant: tuple[bool, ...]   # |r[k]| > band for k >= 1; lag 0 never flagged
    band: float                     # 1.96 / sqrt(n)

    @property
    def significant_lags(self) -> list[int]:
        return [k for k, s in enumerate(self.significant) if s]


def autocorrelation(series: np.ndarray, max_lag: int | None = None) -> AcfResult:
    """Biased sample autocorrelation with a 1.96/sqrt(n) significance band.

    A constant series has r = 0 at every positive lag by convention.
    """
    x = np.asarray(series, dtype=np.float64)
    n = len(x)
    if n < 2:
        raise ValueError("autocorrelation needs at least 2 observations")
    if max_lag is None:
        max_lag = min(n - 2, 20)
    max_lag = max(1, min(max_lag, n - 1))
    band = 1.96 / math.sqrt(n)
    centered = x - x.mean()
    denom = float(np.dot(centered, centered))
    values = [1.0]
    for k in range(1, max_lag + 1):
        if denom == 0.0:
            values.append(0.0)
        else:
            values.append(float(np.dot(centered[:-k], centered[k:]) / denom))
    significant = [False] + [abs(v) > band for v in values[1:]]
    return AcfResult(tuple(values), tuple(significant), band)
