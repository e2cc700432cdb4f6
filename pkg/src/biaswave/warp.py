"""Warping distribution functions on [0, 1].

A warp is a continuous CDF H with density h and inverse, used to compose
wavelet atoms as phi(H(x)).  The identity warp recovers the ordinary basis;
the empirical warp is the linearly interpolated ECDF of the data.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

_TIE_JITTER = 1e-12


@dataclass(frozen=True)
class WarpFunction:
    cdf: Callable
    density: Callable
    inverse: Callable
    kind: str = "identity"
    knots: np.ndarray | None = field(default=None, compare=False)

    def __call__(self, x):
        return self.cdf(x)


def identity_warp() -> WarpFunction:
    return WarpFunction(
        cdf=lambda x: np.asarray(x, dtype=float),
        density=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        inverse=lambda u: np.asarray(u, dtype=float),
        kind="identity",
    )


def empirical_warp(sample) -> WarpFunction:
    """Piecewise-linear ECDF warp through (y_(k), k/n), pinned to (0,0) and (1,1).

    Tied sample values are separated by a cumulative jitter of 1e-12 so the
    CDF stays invertible; the density is the piecewise slope (diagnostic only).
    """
    y = np.sort(np.asarray(sample, dtype=float))
    if y.size < 2:
        raise ValueError("empirical warp needs at least 2 observations")
    if y[0] < 0.0 or y[-1] > 1.0:
        raise ValueError("empirical warp sample must lie in [0, 1]")
    ties = np.concatenate([[False], np.diff(y) == 0.0])
    if ties.any():
        bump = np.zeros(y.size)
        bump[ties] = _TIE_JITTER
        y = y + np.cumsum(bump)
    n = y.size
    xs = np.concatenate([[0.0], y, [1.0]])
    us = np.concatenate([[0.0], np.arange(1, n + 1) / n, [1.0]])
    if xs[1] == 0.0:
        xs, us = xs[1:], us[1:]
    if xs[-2] >= xs[-1]:
        xs, us = xs[:-1], us[:-1]

    def cdf(x):
        return np.interp(np.asarray(x, dtype=float), xs, us)

    # drop flat segments for the inverse (leftmost preimage convention)
    keep = np.concatenate([[True], np.diff(us) > 0.0])
    inv_u, inv_x = us[keep], xs[keep]

    def inverse(u):
        return np.interp(np.asarray(u, dtype=float), inv_u, inv_x)

    slopes = np.diff(us) / np.diff(xs)

    def density(x):
        x = np.asarray(x, dtype=float)
        i = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, slopes.size - 1)
        return slopes[i]

    return WarpFunction(cdf=cdf, density=density, inverse=inverse, kind="empirical", knots=y)


def warp_point(warp: WarpFunction, x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"warp argument {x} outside [0, 1]")
    return float(warp.cdf(x))


def unwarp_point(warp: WarpFunction, u: float) -> float:
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"unwarp argument {u} outside [0, 1]")
    return float(warp.inverse(u))
