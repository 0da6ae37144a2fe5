"""Change-point detection over windowed series via penalized PELT.

The search minimizes  sum(segment costs) + penalty * (number of change
points)  exactly, with pruning of candidate split points that can never be
optimal again (Killick-style; valid because all three costs are subadditive
under concatenation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

COSTS = ("kernel-rbf", "kernel-linear", "l2-mean")


@dataclass(frozen=True)
class ChangePointConfig:
    cost: str = "kernel-rbf"
    penalty: float | str = "auto"  # positive float or "auto"
    min_segment: int = 2
    auto_c: float = 3.0  # multiplier for the auto penalty
    noise_lag: int = 1   # smallest lag at which observations share no traces


def _as_points(series: np.ndarray) -> np.ndarray:
    """Normalize input to (n_obs, n_dims): rows are aligned series."""
    arr = np.asarray(series, dtype=np.float64)
    if arr.ndim == 1:
        return arr[:, None]
    if arr.ndim == 2:
        return arr.T.copy()
    raise ValueError(f"series must be 1-D or 2-D, got shape {arr.shape}")


def auto_penalty(
    series: np.ndarray, c: float = 3.0, cost: str = "l2-mean", noise_lag: int = 1
) -> float:
    """c * sigma^2 * log(n), with sigma^2 a noise-variance estimate.

    For the l2 cost, sigma^2 is the median per-row variance. Kernel costs are
    bandwidth-normalized, so their sigma^2 is measured on the same scale as
    the cost itself: the median two-point scatter of observation pairs that
    are ``noise_lag`` apart. Sliding windows that overlap make neighbouring
    observations correlated; ``noise_lag`` should be the smallest lag at
    which two observations share no underlying traces, so that their gap
    reflects noise rather than shared content.
    """
    arr = np.asarray(series, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    n = arr.shape[1]
    if n < 2:
        return 0.0
    if cost in ("kernel-rbf", "kernel-linear"):
        lag = max(1, min(int(noise_lag), n - 1))
        gram = _gram(arr.T, cost)
        diag = np.diag(gram)
        idx = np.arange(n - lag)
        # cost of the two-point segment {x_t, x_{t+lag}}, halved per point
        pair = 0.5 * (diag[idx] + diag[idx + lag]) - gram[idx, idx + lag]
        sigma2 = float(np.median(pair)) / 2.0
    else:
        variances = arr.var(axis=1)
        sigma2 = float(np.median(variances))
        if sigma2 <= 0.0:
            sigma2 = float(variances.mean())
    return c * sigma2 * math.log(n)


class _L2Cost:
    """Within-segment sum of squared deviations from the segment mean."""

    def __init__(self, points: np.ndarray):
        self.cum = np.vstack([np.zeros(points.shape[1]), np.cumsum(points, axis=0)])
        self.cum2 = np.vstack(
            [np.zeros(points.shape[1]), np.cumsum(points**2, axis=0)]
        )

    def __call__(self, s: int, e: int) -> float:
        n = e - s
        total = self.cum[e] - self.cum[s]
        total2 = self.cum2[e] - self.cum2[s]
        return float(np.sum(total2 - total**2 / n))


class _KernelCost:
    """Within-segment scatter in the feature space of a gram matrix."""

    def __init__(self, gram: np.ndarray):
        n = gram.shape[0]
        self.diag_cum = np.concatenate([[0.0], np.cumsum(np.diag(gram))])
        area = np.zeros((n + 1, n + 1))
        area[1:, 1:] = gram.cumsum(axis=0).cumsum(axis=1)
        self.area = area

    def __call__(self, s: int, e: int) -> float:
        n = e - s
        block = self.area[e, e] - self.area[s, e] - self.area[e, s] + self.area[s, s]
        return float(self.diag_cum[e] - self.diag_cum[s] - block / n)


def _sq_dists(points: np.ndarray) -> np.ndarray:
    sq = np.sum(points**2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * points @ points.T
    np.maximum(d2, 0.0, out=d2)
    return d2


def _gram(points: np.ndarray, cost: str) -> np.ndarray:
    if cost == "kernel-linear":
        return points @ points.T
    if cost == "kernel-rbf":
        d2 = _sq_dists(points)
        n = d2.shape[0]
        off_diag = d2[np.triu_indices(n, k=1)]
        med = float(np.median(off_diag)) if off_diag.size else 0.0
        gamma = 1.0 / med if med > 0 else 1.0  # median heuristic
        return np.exp(-gamma * d2)
    raise ValueError(f"unknown cost {cost!r}; choose from {COSTS}")


def _make_cost(points: np.ndarray, cost: str):
    if cost == "l2-mean":
        return _L2Cost(points)
    return _KernelCost(_gram(points, cost))


def pelt_segmentation(
    points: np.ndarray, cost_name: str, penalty: float, min_segment: int = 1
) -> tuple[list[int], float]:
    """Optimal change points and objective value for (n_obs, n_dims) points."""
    n = points.shape[0]
    if penalty < 0:
        raise ValueError("penalty must be >= 0")
    if min_segment < 1:
        raise ValueError("min_segment must be >= 1")
    if n < 2 * min_segment:
        return [], 0.0 if n == 0 else _make_cost(points, cost_name)(0, n)

    cost = _make_cost(points, cost_name)
    inf = math.inf
    f = [inf] * (n + 1)
    f[0] = -penalty
    prev = [0] * (n + 1)
    cands = [0]
    for t in range(min_segment, n + 1):
        best = inf
        best_s = 0
        vals: list[float | None] = []
        for s in cands:
            if t - s < min_segment:
                vals.append(None)
                continue
            v = f[s] + cost(s, t) + penalty
            vals.append(v)
            if v < best:
                best = v
                best_s = s
        f[t] = best
        prev[t] = best_s
        # prune candidates that can never become optimal again:
        # keep s while F[s] + C(s,t) <= F[t]  (v includes +penalty, best = F[t])
        cands = [s for s, v in zip(cands, vals) if v is None or v <= best + penalty]
        cands.append(t)

    points_out = []
    t = n
    while t > 0:
        s = prev[t]
        if s > 0:
            points_out.append(s)
        t = s
    points_out.reverse()
    return points_out, f[n]


def detect_change_points(
    series: np.ndarray, cfg: ChangePointConfig | None = None
) -> list[int]:
    """Change-point indices (strictly increasing, within (0, n_obs)).

    An index k means a new segment starts at observation k. `series` is one
    row or a stack of aligned rows; multivariate input is segmented jointly.
    """
    cfg = cfg or ChangePointConfig()
    pts = _as_points(series)
    if cfg.penalty == "auto":
        penalty = auto_penalty(series, cfg.auto_c, cfg.cost, cfg.noise_lag)
        if penalty <= 0.0:
            return []
    else:
        penalty = float(cfg.penalty)
    found, _ = pelt_segmentation(pts, cfg.cost, penalty, cfg.min_segment)
    return found
