"""Auxiliary estimators for the biased density g.

Default: Gaussian kernel estimator with a solve-the-equation plug-in
bandwidth.  Alternative: the linear wavelet estimator on [0, 1], kept
selectable for experiments (it is exactly the dyadic histogram for Haar).
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .filters import WaveletFilter
from .wavelets import DEFAULT_PRECISION, periodized_phi_design

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def _normal_pdf(x):
    return np.exp(-0.5 * x * x) / _SQRT_2PI


def _phi4(x):
    return (x**4 - 6.0 * x**2 + 3.0) * _normal_pdf(x)


def _phi6(x):
    return (x**6 - 15.0 * x**4 + 45.0 * x**2 - 15.0) * _normal_pdf(x)


def silverman_bandwidth(sample) -> float:
    x = np.asarray(sample, dtype=float)
    sd = x.std(ddof=1)
    iqr = np.subtract(*np.percentile(x, [75, 25]))
    scale = min(sd, iqr / 1.34) if iqr > 0 else sd
    return 0.9 * scale * x.size ** (-0.2)


def sj_bandwidth(sample, rel_tol=1e-8) -> float:
    """Solve-the-equation plug-in bandwidth for a Gaussian kernel.

    Two-stage pilot functionals with a normal-reference deepest stage;
    the fixed-point equation is solved by bisection on a bracket around
    Silverman's rule.  Falls back to Silverman's rule with a warning when
    no sign change is bracketed.
    """
    x = np.asarray(sample, dtype=float)
    n = x.size
    if n < 10:
        raise ValueError("sj_bandwidth needs at least 10 observations")
    if x.std(ddof=1) == 0.0:
        raise ValueError("sj_bandwidth: sample variance is zero")
    iqr = np.subtract(*np.percentile(x, [75, 25]))
    lam = iqr if iqr > 0 else x.std(ddof=1)
    a = 0.920 * lam * n ** (-1.0 / 7.0)
    b = 0.912 * lam * n ** (-1.0 / 9.0)
    # phi4/phi6 are even, so the upper triangle of the pairwise differences
    # suffices; off-diagonal sums are twice the triangle sums
    iu = np.triu_indices(n, k=1)
    diffs = x[iu[0]] - x[iu[1]]

    def s_d(alpha):
        return 2.0 * np.sum(_phi4(diffs / alpha)) / (n * (n - 1) * alpha**5)

    def t_d(bw):
        return -2.0 * np.sum(_phi6(diffs / bw)) / (n * (n - 1) * bw**7)

    sda, tdb = s_d(a), t_d(b)

    def objective(h):
        alpha2 = 1.357 * np.abs(sda / tdb) ** (1.0 / 7.0) * h ** (5.0 / 7.0)
        denom = n * s_d(alpha2)
        if denom <= 0:
            return np.inf
        return (1.0 / (2.0 * np.sqrt(np.pi) * denom)) ** 0.2 - h

    h0 = silverman_bandwidth(x)
    # the objective can be undefined (+inf) at small h where the pilot
    # functional goes negative; scan a geometric grid for a finite bracket
    hs = h0 * np.geomspace(1.0 / 50.0, 50.0, 40)
    vals = np.array([objective(h) for h in hs])
    for i in range(hs.size - 1):
        flo, fhi = vals[i], vals[i + 1]
        if np.isfinite(flo) and np.isfinite(fhi) and flo * fhi <= 0:
            return float(brentq(objective, hs[i], hs[i + 1], rtol=rel_tol))
    warnings.warn("sj_bandwidth: no sign change bracketed; using Silverman's rule")
    return h0


@dataclass(frozen=True)
class KernelDensityEstimate:
    sample: np.ndarray
    bandwidth: float

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        s = np.asarray(self.sample, dtype=float)
        s.flags.writeable = False
        object.__setattr__(self, "sample", s)

    def __call__(self, y):
        return kde_eval(self, y)


def fit_kde(sample, bandwidth=None) -> KernelDensityEstimate:
    if bandwidth is None:
        bandwidth = sj_bandwidth(sample)
    return KernelDensityEstimate(sample=np.asarray(sample, dtype=float), bandwidth=bandwidth)


def kde_eval(kde: KernelDensityEstimate, y):
    """Gaussian kernel density (1/(nh)) sum_i K((y - Y_i)/h); always >= 0."""
    y = np.asarray(y, dtype=float)
    z = (np.atleast_1d(y)[:, None] - kde.sample[None, :]) / kde.bandwidth
    out = _normal_pdf(z).mean(axis=1) / kde.bandwidth
    return out if y.ndim else float(out[0])


@dataclass(frozen=True)
class WaveletDensityEstimate:
    filter: WaveletFilter
    level: int
    alphas: np.ndarray

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        design = periodized_phi_design(self.filter, self.level, np.atleast_1d(y), DEFAULT_PRECISION)
        out = design @ self.alphas
        return out if y.ndim else float(out[0])


def wavelet_density(sample, filt: WaveletFilter, level: int) -> WaveletDensityEstimate:
    """Linear wavelet density estimate on [0, 1]: alpha_jk = mean of phi_jk(Y_i)."""
    y = np.asarray(sample, dtype=float)
    if y.min() < 0.0 or y.max() > 1.0:
        raise ValueError("wavelet_density sample must lie in [0, 1]")
    if (1 << level) > y.size:
        raise ValueError(f"level {level} too fine for sample of size {y.size}")
    design = periodized_phi_design(filt, level, y, DEFAULT_PRECISION)
    return WaveletDensityEstimate(filter=filt, level=level, alphas=design.mean(axis=0))
