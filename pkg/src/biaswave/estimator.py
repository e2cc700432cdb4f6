"""Power-density estimation from size-biased samples.

Pipeline: affine domain transform into [eps, 1-eps] -> auxiliary estimate of
the biased density (when needed) -> warped periodized wavelet analysis of the
power density -> universal-threshold regularization of the detail
coefficients -> synthesis, power back-transform and domain rescaling.

Four named methods: m1 (a=1/2, ordinary basis), m2 (a=1, ordinary basis),
m3 (a=1/2, warped basis), m4 (a=1, warped basis).
"""

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .auxdensity import KernelDensityEstimate, WaveletDensityEstimate, fit_kde, wavelet_density
from .filters import WaveletFilter, load_filter
from .warp import WarpFunction, empirical_warp, identity_warp
from .wavelets import (
    DEFAULT_PRECISION,
    EvalPrecision,
    periodized_phi_design,
    periodized_psi_design,
)
from .weights import WeightFunction

SERIALIZATION_VERSION = 1

#: method id -> (power a, warp kind)
METHODS = {
    "m1": (0.5, "identity"),
    "m2": (1.0, "identity"),
    "m3": (0.5, "empirical"),
    "m4": (1.0, "empirical"),
}

MAD_NORMAL_CONSISTENCY = 0.6745


def default_epsilon(j1: int) -> float:
    return 1.9 ** (-j1)


def resolve_j1(p: float, n: int) -> int:
    """Finest level from the exponent rule J1 = ceil(p * log2 n)."""
    return int(np.ceil(p * np.log2(n)))


@dataclass(frozen=True)
class EstimatorConfig:
    a: float
    j0: int
    j1: int
    warp_kind: str = "identity"
    threshold: str = "hard_universal"
    aux: str = "kde_sj"
    filter: WaveletFilter = None
    epsilon: float = None
    g_floor: float = 1e-6
    mad_normalize: bool = True
    aux_level: int = None
    bandwidth: float = None
    precision: EvalPrecision = DEFAULT_PRECISION

    def __post_init__(self):
        if self.a < 0.5:
            raise ValueError("power a must be >= 1/2")
        if not 0 <= self.j0 <= self.j1:
            raise ValueError("need 0 <= J0 <= J1")
        if self.warp_kind not in ("identity", "empirical"):
            raise ValueError(f"unknown warp kind {self.warp_kind!r}")
        if self.threshold not in ("hard_universal", "soft_universal", "none"):
            raise ValueError(f"unknown threshold mode {self.threshold!r}")
        if self.aux not in ("kde_sj", "wavelet", "none"):
            raise ValueError(f"unknown aux mode {self.aux!r}")
        if self.filter is None:
            object.__setattr__(self, "filter", load_filter("sym10"))
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", default_epsilon(self.j1))
        if not 0.0 <= self.epsilon < 0.5:
            raise ValueError("epsilon must lie in [0, 0.5)")
        if (self.a != 1.0 or self.warp_kind == "empirical") and self.aux == "none":
            raise ValueError("auxiliary density required when a != 1 or the basis is warped")

    @property
    def needs_aux(self) -> bool:
        return self.a != 1.0 or self.warp_kind == "empirical"


def config_for_method(method, j0, j1, **overrides) -> EstimatorConfig:
    try:
        a, warp_kind = METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {sorted(METHODS)}") from None
    if not overrides.get("aux") and a == 1.0 and warp_kind == "identity":
        overrides.setdefault("aux", "none")
    return EstimatorConfig(a=a, j0=j0, j1=j1, warp_kind=warp_kind, **overrides)


@dataclass(frozen=True)
class DomainTransform:
    q: float
    s: float
    epsilon: float

    def forward(self, y):
        return (np.asarray(y, dtype=float) - self.q) / self.s

    def inverse(self, u):
        return np.asarray(u, dtype=float) * self.s + self.q


def compute_transform(sample, epsilon) -> DomainTransform:
    """Affine map sending [y_(1), y_(n)] onto [eps, 1-eps]."""
    y = np.asarray(sample, dtype=float)
    if y.size < 2:
        raise ValueError("transform needs at least 2 observations")
    if not 0.0 <= epsilon < 0.5:
        raise ValueError("epsilon must lie in [0, 0.5)")
    lo, hi = y.min(), y.max()
    r = hi - lo
    if r <= 0.0:
        raise ValueError("sample range is zero")
    s = r / (1.0 - 2.0 * epsilon)
    q = lo - epsilon * s
    return DomainTransform(q=q, s=s, epsilon=epsilon)


def _weight_values(sample, w: WeightFunction):
    vals = np.atleast_1d(np.asarray(w(np.asarray(sample, dtype=float)), dtype=float))
    if not np.all(np.isfinite(vals)) or np.any(vals <= 0.0):
        bad = np.asarray(sample, dtype=float)[~(np.isfinite(vals) & (vals > 0.0))][0]
        raise ValueError(f"weight function must be positive and finite; fails at y = {bad}")
    return vals


def estimate_mu_hat(sample, w: WeightFunction) -> float:
    """Harmonic-type estimate n / sum(1/w(Y_i)) of mu = E[w(X)]."""
    vals = _weight_values(sample, w)
    return vals.size / np.sum(1.0 / vals)


def cox_cdf(sample, w: WeightFunction, x) -> float:
    """Weighted ECDF (mu_hat/n) sum 1/w(Y_i) 1(Y_i <= x); hits 1 at the sample max."""
    y = np.asarray(sample, dtype=float)
    inv = 1.0 / _weight_values(y, w)
    x = np.asarray(x, dtype=float)
    indic = y[None, :] <= np.atleast_1d(x)[:, None]
    out = (indic * inv[None, :]).sum(axis=1) / inv.sum()
    return out if x.ndim else float(out[0])


def universal_threshold(details, mode="hard", mad_normalize=True):
    """Threshold all detail levels with the universal rule from the finest level.

    sigma_hat is the median absolute deviation of the finest-level details,
    divided by 0.6745 unless mad_normalize is off; lambda = sigma_hat *
    sqrt(2 log 2^(J1-1)) where 2^(J1-1) is the finest-level coefficient count.
    """
    if not details:
        raise ValueError("no detail levels to threshold")
    if mode not in ("hard", "soft"):
        raise ValueError(f"unknown threshold mode {mode!r}")
    finest = np.asarray(details[-1], dtype=float)
    mad = np.median(np.abs(finest - np.median(finest)))
    sigma = mad / MAD_NORMAL_CONSISTENCY if mad_normalize else mad
    lam = sigma * np.sqrt(2.0 * np.log(finest.size))
    starred = []
    for d in details:
        d = np.asarray(d, dtype=float)
        if mode == "hard":
            starred.append(np.where(np.abs(d) > lam, d, 0.0))
        else:
            starred.append(np.sign(d) * np.maximum(np.abs(d) - lam, 0.0))
    return starred, float(sigma), float(lam)


@dataclass(frozen=True)
class CoefficientSet:
    c: np.ndarray
    d: list
    d_star: list
    sigma_hat: float
    lam: float


def _analysis_weights(config, w_orig_vals, g_vals, h_vals, mu_hat):
    a = config.a
    if config.warp_kind == "empirical":
        # warped coefficient: h replaced by the auxiliary density estimate
        core = g_vals**a
    elif g_vals is None:
        core = h_vals
    else:
        core = g_vals ** (a - 1.0) * h_vals
    return (mu_hat**a) * core / (w_orig_vals**a)


@dataclass(frozen=True)
class PowerDensityEstimate:
    config: EstimatorConfig
    transform: DomainTransform
    warp: WarpFunction
    coeffs: CoefficientSet
    mu_hat: float
    aux: object = None
    diagnostics: dict = field(default_factory=dict)

    def power_density(self, x):
        """The wavelet synthesis for the power density, on the transformed scale."""
        x = np.asarray(x, dtype=float)
        u = np.clip(self.transform.forward(np.atleast_1d(x)), 0.0, 1.0)
        v = np.clip(np.asarray(self.warp.cdf(u), dtype=float), 0.0, 1.0)
        cfg = self.config
        out = periodized_phi_design(cfg.filter, cfg.j0, v, cfg.precision) @ self.coeffs.c
        for j, dj in zip(range(cfg.j0, cfg.j1), self.coeffs.d_star):
            if np.any(dj):
                out += periodized_psi_design(cfg.filter, j, v, cfg.precision) @ dj
        return out if x.ndim else float(out[0])

    def density(self, x):
        """Back-transformed density estimate on the original data scale."""
        x = np.asarray(x, dtype=float)
        fa = np.atleast_1d(self.power_density(x))
        inv_a = 1.0 / self.config.a
        if self.config.a == 1.0:
            f = fa
        elif inv_a.is_integer() and int(inv_a) % 2 == 0:
            f = fa**inv_a
        else:
            f = np.maximum(fa, 0.0) ** inv_a
        f = f / self.transform.s
        return f if x.ndim else float(f[0])

    def __call__(self, x):
        return self.density(x)

    # ------------------------------------------------------------- serialization

    def to_dict(self) -> dict:
        cfg = self.config
        doc = {
            "version": SERIALIZATION_VERSION,
            "config": {
                "a": cfg.a,
                "j0": cfg.j0,
                "j1": cfg.j1,
                "warp_kind": cfg.warp_kind,
                "threshold": cfg.threshold,
                "filter": cfg.filter.name,
                "epsilon": cfg.epsilon,
                "n_dyadic_digits": cfg.precision.n_dyadic_digits,
            },
            "transform": {"q": self.transform.q, "s": self.transform.s,
                          "epsilon": self.transform.epsilon},
            "mu_hat": self.mu_hat,
            "coefficients": {
                "c": self.coeffs.c.tolist(),
                "d": [d.tolist() for d in self.coeffs.d],
                "d_star": [d.tolist() for d in self.coeffs.d_star],
                "sigma_hat": self.coeffs.sigma_hat,
                "lambda": self.coeffs.lam,
            },
            "diagnostics": self.diagnostics,
        }
        if self.warp.kind == "empirical":
            doc["warp_knots"] = self.warp.knots.tolist()
        return doc

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc) -> "PowerDensityEstimate":
        if doc.get("version") != SERIALIZATION_VERSION:
            raise ValueError(f"unsupported document version {doc.get('version')!r}")
        c = doc["config"]
        config = EstimatorConfig(
            a=c["a"], j0=c["j0"], j1=c["j1"], warp_kind=c["warp_kind"],
            threshold=c["threshold"], aux="none" if c["a"] == 1.0 and
            c["warp_kind"] == "identity" else "kde_sj",
            filter=load_filter(c["filter"]), epsilon=c["epsilon"],
            precision=EvalPrecision(c["n_dyadic_digits"]),
        )
        t = doc["transform"]
        warp = (empirical_warp(np.asarray(doc["warp_knots"]))
                if c["warp_kind"] == "empirical" else identity_warp())
        coeffs = CoefficientSet(
            c=np.asarray(doc["coefficients"]["c"], dtype=float),
            d=[np.asarray(d, dtype=float) for d in doc["coefficients"]["d"]],
            d_star=[np.asarray(d, dtype=float) for d in doc["coefficients"]["d_star"]],
            sigma_hat=doc["coefficients"]["sigma_hat"],
            lam=doc["coefficients"]["lambda"],
        )
        return cls(config=config,
                   transform=DomainTransform(q=t["q"], s=t["s"], epsilon=t["epsilon"]),
                   warp=warp, coeffs=coeffs, mu_hat=doc["mu_hat"],
                   diagnostics=doc.get("diagnostics", {}))

    @classmethod
    def from_json(cls, text) -> "PowerDensityEstimate":
        return cls.from_dict(json.loads(text))


def fit_power_density(sample, w: WeightFunction, config: EstimatorConfig) -> PowerDensityEstimate:
    y = np.asarray(sample, dtype=float)
    if y.size < 2:
        raise ValueError("need at least 2 observations")
    w_vals = _weight_values(y, w)
    mu_hat = y.size / np.sum(1.0 / w_vals)

    transform = compute_transform(y, config.epsilon)
    ty = np.clip(transform.forward(y), 0.0, 1.0)

    warp = empirical_warp(ty) if config.warp_kind == "empirical" else identity_warp()
    u = np.clip(np.asarray(warp.cdf(ty), dtype=float), 0.0, 1.0)

    aux = None
    g_vals = None
    clamped = 0
    if config.needs_aux:
        if config.aux == "kde_sj":
            aux = fit_kde(ty, bandwidth=config.bandwidth)
        else:
            level = config.aux_level
            if level is None:
                level = max(0, int(np.floor(np.log2(y.size) / 2.0)))
            aux = wavelet_density(ty, config.filter, level)
        raw = np.atleast_1d(np.asarray(aux(ty), dtype=float))
        clamped = int(np.sum(raw < config.g_floor))
        g_vals = np.maximum(raw, config.g_floor)

    h_vals = np.atleast_1d(np.asarray(warp.density(ty), dtype=float))
    weights = _analysis_weights(config, w_vals, g_vals, h_vals, mu_hat)
    factor = 1.0 / y.size

    c = factor * (periodized_phi_design(config.filter, config.j0, u, config.precision).T @ weights)
    d = [
        factor * (periodized_psi_design(config.filter, j, u, config.precision).T @ weights)
        for j in range(config.j0, config.j1)
    ]

    if d and config.threshold != "none":
        mode = "hard" if config.threshold == "hard_universal" else "soft"
        d_star, sigma, lam = universal_threshold(d, mode, config.mad_normalize)
    else:
        d_star, sigma, lam = [x.copy() for x in d], 0.0, 0.0

    diagnostics = {
        "mu_hat": float(mu_hat),
        "sigma_hat": sigma,
        "lambda": lam,
        "g_floor_clamped": clamped,
        "n": int(y.size),
    }
    if isinstance(aux, KernelDensityEstimate):
        diagnostics["bandwidth"] = float(aux.bandwidth)

    coeffs = CoefficientSet(c=c, d=d, d_star=d_star, sigma_hat=sigma, lam=lam)
    return PowerDensityEstimate(config=config, transform=transform, warp=warp,
                                coeffs=coeffs, mu_hat=float(mu_hat), aux=aux,
                                diagnostics=diagnostics)


def estimate_density(sample, w, method, j0=0, j1=None, p=0.45, **options) -> PowerDensityEstimate:
    """Fit one of the named methods m1-m4; J1 defaults to ceil(p * log2 n)."""
    n = len(sample)
    if j1 is None:
        j1 = resolve_j1(p, n)
    config = config_for_method(method, j0, j1, **options)
    return fit_power_density(sample, w, config)
