"""Orthonormal compactly supported wavelet filters.

A filter is the low-pass QMF sequence h_0..h_{2N-1} of a Daubechies-type
scaling function supported on [0, 2N-1].  The high-pass sequence is derived
as g_k = (-1)^k h_{2N-1-k}, which keeps the wavelet supported on the same
interval as the scaling function.
"""

from dataclasses import dataclass, field

import numpy as np

from ._tables import LOWPASS

_SUM_TOL = 1e-12
_ORTH_TOL = 1e-12


class UnknownFilterError(ValueError):
    """Raised when a filter name is not in the shipped table."""


@dataclass(frozen=True)
class WaveletFilter:
    name: str
    lowpass: np.ndarray
    n_vanishing_moments: int
    highpass: np.ndarray = field(init=False)

    def __post_init__(self):
        lp = np.asarray(self.lowpass, dtype=float)
        lp.flags.writeable = False
        object.__setattr__(self, "lowpass", lp)
        hp = (-1.0) ** np.arange(lp.size) * lp[::-1]
        hp.flags.writeable = False
        object.__setattr__(self, "highpass", hp)

    @property
    def support_length(self) -> int:
        """Length of the support interval [0, 2N-1]."""
        return self.lowpass.size - 1


def verify_qmf(lowpass, name="<anonymous>"):
    """Check the QMF invariants; raises ValueError on failure."""
    h = np.asarray(lowpass, dtype=float)
    if h.size < 2 or h.size % 2 != 0:
        raise ValueError(f"filter {name!r}: even length >= 2 required, got {h.size}")
    if abs(h.sum() - np.sqrt(2.0)) > _SUM_TOL:
        raise ValueError(f"filter {name!r}: coefficients do not sum to sqrt(2)")
    for m in range(h.size // 2):
        dot = np.dot(h[: h.size - 2 * m], h[2 * m :])
        target = 1.0 if m == 0 else 0.0
        if abs(dot - target) > _ORTH_TOL:
            raise ValueError(f"filter {name!r}: shift-{2 * m} orthonormality fails")


def available_filters():
    return sorted(LOWPASS)


def load_filter(name: str) -> WaveletFilter:
    """Load a shipped filter by name (e.g. "haar", "db4", "sym10")."""
    try:
        n_vm, coeffs = LOWPASS[name]
    except KeyError:
        raise UnknownFilterError(
            f"unknown filter {name!r}; available: {', '.join(available_filters())}"
        ) from None
    verify_qmf(coeffs, name)
    return WaveletFilter(name=name, lowpass=np.array(coeffs), n_vanishing_moments=n_vm)
