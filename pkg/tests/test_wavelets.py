"""Pointwise evaluation of phi/psi against independent oracles."""

import numpy as np
import pytest

from biaswave.filters import available_filters, load_filter
from biaswave.wavelets import (
    DEFAULT_PRECISION,
    CascadeError,
    EvalPrecision,
    cascade_table,
    eval_periodized_phi,
    eval_periodized_psi,
    eval_phi,
    eval_psi,
    periodized_phi_design,
    periodized_psi_design,
    phi_offset_vectors,
)

HAAR = load_filter("haar")
SYM10 = load_filter("sym10")


# ---------------------------------------------------------------- phi and psi

def test_haar_phi_is_indicator():
    assert eval_phi(HAAR, 0.3) == pytest.approx(1.0, abs=1e-12)
    assert eval_phi(HAAR, -0.5) == 0.0
    assert eval_phi(HAAR, 1.0) == 0.0


def test_haar_psi_values():
    assert eval_psi(HAAR, 0.25) == pytest.approx(1.0, abs=1e-12)
    assert eval_psi(HAAR, 0.75) == pytest.approx(-1.0, abs=1e-12)


def test_phi_zero_outside_support():
    for x in (-1.0, -1e-12, 19.0, 25.0):
        assert eval_phi(SYM10, x) == 0.0
        assert eval_psi(SYM10, x) == 0.0


def test_sym10_psi_integrates_to_zero():
    xs = np.linspace(0.0, 19.0, 2**14)
    vals = [eval_psi(SYM10, float(x)) for x in xs]
    assert abs(np.trapezoid(vals, xs)) < 1e-5


def test_sym10_vanishing_moments():
    """Numeric moments of psi up to order 4 vanish."""
    xs = np.linspace(0.0, 19.0, 2**14)
    psi = np.array([eval_psi(SYM10, float(x)) for x in xs])
    for r in range(5):
        assert abs(np.trapezoid(xs**r * psi, xs)) < 1e-4


def test_precision_monotonicity():
    """More dyadic digits converge; the contraction is about a factor 2/digit."""
    rng = np.random.default_rng(12)
    xs = rng.uniform(0.0, 19.0, size=100)
    for x in xs:
        v20 = eval_phi(SYM10, float(x), EvalPrecision(20))
        v40 = eval_phi(SYM10, float(x), EvalPrecision(40))
        v60 = eval_phi(SYM10, float(x), EvalPrecision(60))
        assert abs(v20 - v40) < 1e-5
        assert abs(v40 - v60) < 1e-9


# --------------------------------------------------------------- cascade oracle

def test_cascade_haar():
    pts, vals = cascade_table(HAAR, 3)
    inside = pts < 1.0
    np.testing.assert_allclose(vals[inside], 1.0, atol=1e-12)


def test_cascade_sym10_unit_mass():
    _, vals = cascade_table(SYM10, 8)
    assert abs(vals.sum() / 2**8 - 1.0) < 1e-6


def test_cascade_vs_matrix_product_level10():
    """Two independent algorithms agree on the full level-10 dyadic grid."""
    pts, vals = cascade_table(SYM10, 10)
    frac, whole = np.modf(pts)
    m = whole.astype(np.int64)
    inside = m < SYM10.support_length
    direct = np.zeros_like(pts)
    rows = phi_offset_vectors(SYM10, frac[inside])
    direct[inside] = rows[np.arange(rows.shape[0]), m[inside]]
    assert np.max(np.abs(direct - vals)) < 1e-6


def test_cascade_rejects_bad_level():
    with pytest.raises(ValueError):
        cascade_table(SYM10, 0)


# -------------------------------------------------------------- periodization

def test_haar_periodized_phi_constant():
    for y in (0.0, 0.3, 0.77, 1.0):
        assert eval_periodized_phi(HAAR, 0, 0, y) == pytest.approx(1.0, abs=1e-12)


def test_haar_periodized_psi():
    assert eval_periodized_psi(HAAR, 0, 0, 0.25) == pytest.approx(1.0, abs=1e-12)


def test_partition_of_unity_scalar():
    for y in (0.1, 0.37, 0.9):
        total = sum(eval_periodized_phi(SYM10, 3, k, y) for k in range(8))
        assert abs(total * 2 ** (-1.5) - 1.0) < 1e-8


@pytest.mark.parametrize("name", available_filters())
def test_partition_of_unity_all_filters(name):
    """sum_k 2^(-j/2) phi^p_jk(y) = 1 for j = 0..6 and 100 uniform y."""
    filt = load_filter(name)
    rng = np.random.default_rng(5)
    y = rng.uniform(0.0, 1.0, size=100)
    for j in range(7):
        total = periodized_phi_design(filt, j, y).sum(axis=1) * 2.0 ** (-j / 2.0)
        assert np.max(np.abs(total - 1.0)) < 1e-7


def test_periodized_phi_brute_force_lattice_sum():
    y, j, k = 0.5, 4, 5
    direct = 2.0 ** (j / 2.0) * sum(
        eval_phi(SYM10, 2.0**j * (y - l) - k) for l in range(-3, 4)
    )
    assert eval_periodized_phi(SYM10, j, k, y) == pytest.approx(direct, abs=1e-12)


def test_periodized_psi_brute_force_lattice_sum():
    y, j, k = 0.9, 4, 0
    direct = 2.0 ** (j / 2.0) * sum(
        eval_psi(SYM10, 2.0**j * (y - l) - k) for l in range(-3, 4)
    )
    assert eval_periodized_psi(SYM10, j, k, y) == pytest.approx(direct, abs=1e-12)


def test_periodized_k_out_of_range():
    with pytest.raises(ValueError):
        eval_periodized_phi(SYM10, 3, 8, 0.5)
    with pytest.raises(ValueError):
        eval_periodized_phi(SYM10, 3, -1, 0.5)


def test_phi_psi_orthogonality():
    ys = np.linspace(0.0, 1.0, 2**14)
    a = np.array([eval_periodized_phi(SYM10, 3, 1, float(y)) for y in ys[::8]])
    b = np.array([eval_periodized_psi(SYM10, 3, 2, float(y)) for y in ys[::8]])
    assert abs(np.trapezoid(a * b, ys[::8])) < 1e-5


def test_gram_identity_level4():
    """Numeric Gram matrix of the level-4 periodized family is the identity."""
    ys = (np.arange(2**14) + 0.5) / 2**14
    a = periodized_phi_design(SYM10, 4, ys)
    gram = a.T @ a / 2**14
    assert np.max(np.abs(gram - np.eye(16))) < 5e-4


def test_design_matches_scalar_evaluation():
    rng = np.random.default_rng(9)
    ys = rng.uniform(0.0, 1.0, size=20)
    a = periodized_phi_design(SYM10, 3, ys)
    b = periodized_psi_design(SYM10, 3, ys)
    for i, y in enumerate(ys):
        for k in range(8):
            assert a[i, k] == pytest.approx(eval_periodized_phi(SYM10, 3, k, float(y)), abs=1e-10)
            assert b[i, k] == pytest.approx(eval_periodized_psi(SYM10, 3, k, float(y)), abs=1e-10)
