"""Pointwise evaluation of compactly supported scaling functions and wavelets.

The scaling function phi is evaluated at arbitrary points through products of
the two transfer matrices T0, T1 selected by the binary digits of the
fractional part of the argument; the wavelet psi follows from the two-scale
relation psi(x) = sqrt(2) * sum_k g_k phi(2x - k).  A cascade refinement of
the integer-point eigenvector provides an independent table of phi on dyadic
grids, used as a test oracle.
"""

from dataclasses import dataclass

import numpy as np

from .filters import WaveletFilter


@dataclass(frozen=True)
class EvalPrecision:
    n_dyadic_digits: int = 30

    def __post_init__(self):
        if self.n_dyadic_digits < 1:
            raise ValueError("n_dyadic_digits must be >= 1")


DEFAULT_PRECISION = EvalPrecision()

_matrix_cache = {}


def _transfer_matrices(filt: WaveletFilter):
    """T0, T1 with T0[i, j] = sqrt(2) h_{2i-j}, T1[i, j] = sqrt(2) h_{2i-j+1} (0-based)."""
    key = filt.lowpass.tobytes()
    cached = _matrix_cache.get(key)
    if cached is not None:
        return cached
    h = filt.lowpass
    s = filt.support_length
    idx = 2 * np.arange(s)[:, None] - np.arange(s)[None, :]
    valid = (idx >= 0) & (idx < h.size)
    t0 = np.where(valid, np.sqrt(2.0) * h[np.clip(idx, 0, h.size - 1)], 0.0)
    idx1 = idx + 1
    valid1 = (idx1 >= 0) & (idx1 < h.size)
    t1 = np.where(valid1, np.sqrt(2.0) * h[np.clip(idx1, 0, h.size - 1)], 0.0)
    _matrix_cache[key] = (t0, t1)
    return t0, t1


def _digit_matrix(t, n_digits):
    # binary digits of t in [0, 1); scaling by powers of two is exact in floats
    t = np.asarray(t, dtype=float)
    scaled = t[:, None] * np.exp2(np.arange(1, n_digits + 1, dtype=float))[None, :]
    return np.floor(scaled).astype(np.int64) & 1


def phi_offset_vectors(filt, t, prec=DEFAULT_PRECISION):
    """phi(t_m + i) for i = 0..2N-2, one row per fractional argument t_m in [0, 1).

    Row m is the row-average vector of the transfer-matrix product selected by
    the binary digits of t_m, applied right-to-left to the uniform vector.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = filt.support_length
    t0, t1 = _transfer_matrices(filt)
    digits = _digit_matrix(t, prec.n_dyadic_digits)
    v = np.full((t.size, s), 1.0 / s)
    t0t, t1t = t0.T.copy(), t1.T.copy()
    for b in range(prec.n_dyadic_digits - 1, -1, -1):
        ones = digits[:, b] == 1
        v[ones] = v[ones] @ t1t
        v[~ones] = v[~ones] @ t0t
    return v


def psi_offset_vectors(filt, t, prec=DEFAULT_PRECISION):
    """psi(t_m + i) for i = 0..2N-2, via the two-scale relation."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = filt.support_length
    g = filt.highpass
    u = 2.0 * t
    carry = np.floor(u)
    t2 = u - carry
    phi2 = phi_offset_vectors(filt, t2, prec)
    # psi(t + i) = sqrt(2) * sum_m g[c + 2i - m] phi(t2 + m), c the carry bit
    out = np.empty((t.size, s))
    idx = 2 * np.arange(s)[:, None] - np.arange(s)[None, :]
    for c in (0, 1):
        rows = carry == c
        if not rows.any():
            continue
        gi = idx + c
        valid = (gi >= 0) & (gi < g.size)
        b = np.where(valid, np.sqrt(2.0) * g[np.clip(gi, 0, g.size - 1)], 0.0)
        out[rows] = phi2[rows] @ b.T
    return out


def eval_phi(filt, x, prec=DEFAULT_PRECISION) -> float:
    """Scaling function phi at a single point; exactly 0 outside [0, 2N-1]."""
    s = filt.support_length
    if not np.isfinite(x) or x < 0.0 or x >= s:
        return 0.0
    m = int(np.floor(x))
    return float(phi_offset_vectors(filt, [x - m], prec)[0, m])


def eval_psi(filt, x, prec=DEFAULT_PRECISION) -> float:
    """Wavelet psi at a single point; 0 outside [0, 2N-1]."""
    s = filt.support_length
    if not np.isfinite(x) or x < 0.0 or x >= s:
        return 0.0
    m = int(np.floor(x))
    return float(psi_offset_vectors(filt, [x - m], prec)[0, m])


def _check_jk(j, k):
    if j < 0:
        raise ValueError("resolution level j must be >= 0")
    if not 0 <= k < (1 << j):
        raise ValueError(f"translation k={k} out of range for level j={j}")


def eval_periodized_phi(filt, j, k, y, prec=DEFAULT_PRECISION) -> float:
    """Periodized atom 2^(j/2) sum_l phi(2^j (y - l) - k) on [0, 1]."""
    _check_jk(j, k)
    s = filt.support_length
    z = np.ldexp(float(y), j) - k
    # support overlap: 0 < z - 2^j l < s
    lmin = int(np.ceil((z - s) / (1 << j)))
    lmax = int(np.floor(z / (1 << j)))
    total = sum(eval_phi(filt, z - (l << j), prec) for l in range(lmin, lmax + 1))
    return np.exp2(j / 2.0) * total


def eval_periodized_psi(filt, j, k, y, prec=DEFAULT_PRECISION) -> float:
    _check_jk(j, k)
    s = filt.support_length
    z = np.ldexp(float(y), j) - k
    lmin = int(np.ceil((z - s) / (1 << j)))
    lmax = int(np.floor(z / (1 << j)))
    total = sum(eval_psi(filt, z - (l << j), prec) for l in range(lmin, lmax + 1))
    return np.exp2(j / 2.0) * total


def _periodized_design(filt, j, y, prec, offsets_fn):
    y = np.atleast_1d(np.asarray(y, dtype=float))
    s = filt.support_length
    two_j = 1 << j
    z = np.ldexp(y, j)
    zf = np.floor(z)
    vec = offsets_fn(filt, z - zf, prec)
    ks = (zf.astype(np.int64)[:, None] - np.arange(s)[None, :]) % two_j
    design = np.zeros((y.size, two_j))
    rows = np.broadcast_to(np.arange(y.size)[:, None], ks.shape)
    np.add.at(design, (rows.ravel(), ks.ravel()), vec.ravel())
    design *= np.exp2(j / 2.0)
    return design


def periodized_phi_design(filt, j, y, prec=DEFAULT_PRECISION):
    """Matrix A with A[m, k] = periodized phi_{jk}(y_m), k = 0..2^j - 1."""
    return _periodized_design(filt, j, y, prec, phi_offset_vectors)


def periodized_psi_design(filt, j, y, prec=DEFAULT_PRECISION):
    """Matrix A with A[m, k] = periodized psi_{jk}(y_m), k = 0..2^j - 1."""
    return _periodized_design(filt, j, y, prec, psi_offset_vectors)


class CascadeError(RuntimeError):
    """Eigenvector solve failed during cascade refinement."""


def cascade_table(filt, levels):
    """phi on the dyadic grid i/2^levels of [0, 2N-1], by two-scale refinement.

    Starts from the eigenvector of the integer-point two-scale matrix and
    refines one dyadic level at a time.  Test oracle, independent of the
    transfer-matrix product evaluation.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    s = filt.support_length
    h = filt.lowpass
    vals = np.zeros(s + 1)
    if s == 1:
        vals[0] = 1.0  # left-endpoint convention for the unit indicator
    else:
        m = np.arange(1, s)
        a = np.sqrt(2.0) * np.where(
            (2 * m[:, None] - m[None, :] >= 0) & (2 * m[:, None] - m[None, :] < h.size),
            h[np.clip(2 * m[:, None] - m[None, :], 0, h.size - 1)],
            0.0,
        )
        eigvals, eigvecs = np.linalg.eig(a)
        i = np.argmin(np.abs(eigvals - 1.0))
        if abs(eigvals[i] - 1.0) > 1e-6:
            raise CascadeError(f"no unit eigenvalue for filter {filt.name!r}")
        v = np.real(eigvecs[:, i])
        vals[1:s] = v / v.sum()
    for level in range(1, levels + 1):
        prev = vals
        n_new = s * (1 << level) + 1
        vals = np.zeros(n_new)
        vals[::2] = prev
        odd = np.arange(1, n_new, 2)
        # phi(j/2^level) = sqrt(2) sum_k h_k phi(j/2^(level-1) - k)
        for k in range(h.size):
            src = odd - k * (1 << (level - 1))
            ok = (src >= 0) & (src < prev.size)
            vals[odd[ok]] += np.sqrt(2.0) * h[k] * prev[src[ok]]
    points = np.arange(s * (1 << levels) + 1) / (1 << levels)
    return points, vals
