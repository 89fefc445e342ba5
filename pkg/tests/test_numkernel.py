"""Kernel checks: Jacobi eigensolver, elimination inverse, frames, gaps.

numpy.linalg (eigh, inv, svd) appears here only as an independent oracle;
the package code under test never calls it for these operations.
"""

import math

import numpy as np
import pytest

from jlab.errors import (
    DimensionMismatch,
    DomainError,
    NoConvergence,
    NotHermitian,
    RankDeficient,
    Singular,
)
from jlab.numkernel import (
    CLUSTER_REL_TOL,
    JACOBI_SWEEP_LIMIT,
    as_matrix,
    as_square,
    as_vector,
    frobenius,
    herm_eig,
    herm_fn,
    inverse,
    orth_complement,
    orthonormal_columns,
    resolvent,
    singular_extremes,
    spectral_norm,
    subspace_gap,
)

LN2 = math.log(2.0)


def random_hermitian(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (z + z.conj().T)


def test_shape_coercions_reject_bad_input():
    with pytest.raises(DimensionMismatch):
        as_matrix([1.0, 2.0])
    with pytest.raises(DimensionMismatch):
        as_matrix(np.zeros((0, 2)))
    with pytest.raises(DimensionMismatch):
        as_matrix([[np.inf, 0.0], [0.0, 1.0]])
    with pytest.raises(DimensionMismatch):
        as_square([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    with pytest.raises(DimensionMismatch):
        as_vector([1.0, 2.0], dim=3)
    with pytest.raises(DimensionMismatch):
        as_vector([np.nan])


def test_herm_eig_diagonal_is_sorted_permutation():
    dec = herm_eig(np.diag([3.0, 1.0, 2.0]).astype(complex))
    np.testing.assert_allclose(dec.eigenvalues, [1.0, 2.0, 3.0], atol=1e-14)
    # eigenvectors of a diagonal matrix are (phases of) standard basis vectors
    np.testing.assert_allclose(np.abs(dec.vectors), np.eye(3)[:, [1, 2, 0]], atol=1e-14)


def test_herm_eig_two_by_two_exact():
    m = np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex)
    dec = herm_eig(m)
    np.testing.assert_allclose(dec.eigenvalues, [1.0, 3.0], atol=1e-13)
    for lam, v in zip(dec.eigenvalues, dec.vectors.T):
        assert np.linalg.norm(m @ v - lam * v) < 1e-13


def test_herm_eig_matches_numpy_on_random_hermitians():
    rng = np.random.default_rng(314)
    for n in range(1, 11):
        m = random_hermitian(rng, n)
        dec = herm_eig(m)
        scale = 1.0 + frobenius(m)
        # decomposition properties
        assert frobenius(dec.vectors.conj().T @ dec.vectors - np.eye(n)) < 1e-12
        recon = dec.vectors @ np.diag(dec.eigenvalues) @ dec.vectors.conj().T
        assert frobenius(m - recon) / scale < 1e-12
        # eigenvalues against the LAPACK oracle
        np.testing.assert_allclose(
            dec.eigenvalues, np.linalg.eigh(m)[0], atol=1e-10 * scale
        )


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))


def test_herm_eig_sweep_budget_exhaustion():
    m = np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex)
    with pytest.raises(NoConvergence):
        herm_eig(m, sweep_limit=0)
    assert JACOBI_SWEEP_LIMIT == 60


def test_eigenvalue_clustering_merges_consecutive_near_ties():
    m = np.diag([1.0, 1.0 + 1e-12, 5.0]).astype(complex)
    dec = herm_eig(m)
    assert dec.clusters == ((0, 1), (2,))
    assert abs(dec.cluster_value(0) - (1.0 + 5e-13)) < 1e-15
    np.testing.assert_allclose(
        dec.cluster_projector(0), np.diag([1.0, 1.0, 0.0]), atol=1e-13
    )
    # the split threshold is relative with the pinned constant
    assert CLUSTER_REL_TOL == 1e-8
    wide = herm_eig(np.diag([1.0, 1.0 + 1e-7, 5.0]).astype(complex))
    assert wide.clusters == ((0,), (1,), (2,))


def test_herm_fn_exponential_frozen_value():
    m = np.array([[0.0, 1j * LN2], [-1j * LN2, 0.0]])
    expected = np.array([[1.25, 0.75j], [-0.75j, 1.25]])
    np.testing.assert_allclose(herm_fn(m, math.exp), expected, atol=1e-13)


def test_herm_fn_reciprocal_agrees_with_elimination_inverse():
    rng = np.random.default_rng(5150)
    for n in (1, 3, 6):
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        g = z @ z.conj().T + np.eye(n)
        diff = herm_fn(g, lambda u: 1.0 / u) - inverse(g)
        assert frobenius(diff) / (1.0 + frobenius(g)) < 1e-11


def test_herm_fn_domain_errors():
    with pytest.raises(DomainError):
        herm_fn(np.diag([-1.0, 1.0]).astype(complex), math.sqrt)
    with pytest.raises(DomainError):
        herm_fn(np.diag([0.0, 1.0]).astype(complex), lambda u: 1.0 / u)
    with pytest.raises(DomainError):
        herm_fn(np.eye(2, dtype=complex), lambda u: float("nan"))


def test_inverse_frozen_two_by_two():
    a = np.array([[1.0, 0.5j], [-0.5j, 1.0]])
    expected = (4.0 / 3.0) * np.array([[1.0, -0.5j], [0.5j, 1.0]])
    np.testing.assert_allclose(inverse(a), expected, atol=1e-13)


def test_inverse_matches_numpy_on_random_matrices():
    rng = np.random.default_rng(99)
    for n in range(1, 11):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        got = inverse(a)
        scale = 1.0 + frobenius(np.linalg.inv(a))
        assert frobenius(got - np.linalg.inv(a)) / scale < 1e-10
        assert frobenius(a @ got - np.eye(n)) < 1e-9


def test_inverse_rejects_singular():
    with pytest.raises(Singular):
        inverse(np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex))
    with pytest.raises(Singular):
        inverse(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))


def test_resolvent_values_and_poles():
    m = np.diag([1.0, 2.0]).astype(complex)
    np.testing.assert_allclose(resolvent(m, 3.0), np.diag([-0.5, -1.0]), atol=1e-13)
    with pytest.raises(Singular):
        resolvent(m, 1.0)
    with pytest.raises(DimensionMismatch):
        resolvent(m, complex(np.inf))


def test_orthonormal_columns_properties():
    rng = np.random.default_rng(17)
    b = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    q, r = orthonormal_columns(b)
    assert frobenius(q.conj().T @ q - np.eye(3)) < 1e-13
    assert frobenius(q @ r - b) < 1e-13
    with pytest.raises(RankDeficient):
        orthonormal_columns(np.column_stack([b[:, 0], 2.0 * b[:, 0]]))
    with pytest.raises(RankDeficient):
        orthonormal_columns(np.ones((2, 3), dtype=complex))


def test_orth_complement_spans_and_edges():
    rng = np.random.default_rng(23)
    b = rng.standard_normal((4, 1)) + 1j * rng.standard_normal((4, 1))
    q = orth_complement(b)
    assert q.shape == (4, 3)
    assert frobenius(q.conj().T @ q - np.eye(3)) < 1e-13
    assert np.max(np.abs(q.conj().T @ b)) < 1e-13
    np.testing.assert_allclose(
        orth_complement(np.zeros((3, 0), dtype=complex)), np.eye(3), atol=0
    )
    full = orth_complement(np.eye(3, dtype=complex))
    assert full.shape == (3, 0)
    with pytest.raises(RankDeficient):
        orth_complement(np.column_stack([b, b]))


def test_singular_extremes_match_numpy_svd():
    rng = np.random.default_rng(8)
    for shape in ((3, 3), (5, 2), (2, 5)):
        m = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        lo, hi = singular_extremes(m)
        svals = np.linalg.svd(m, compute_uv=False)
        assert abs(hi - svals[0]) < 1e-10 * (1.0 + svals[0])
        assert abs(spectral_norm(m) - svals[0]) < 1e-10 * (1.0 + svals[0])
        if shape[1] <= shape[0]:
            assert abs(lo - svals[-1]) < 1e-10 * (1.0 + svals[0])
        else:
            # wide matrix: the Gram M*M is rank deficient, so lo reads as 0
            assert lo < 1e-7


def test_subspace_gap_is_the_sine_of_the_angle():
    e0 = np.eye(3, dtype=complex)[:, :1]
    e1 = np.eye(3, dtype=complex)[:, 1:2]
    assert subspace_gap(e0, e0 * 1j) < 1e-14  # same span, different phase
    assert abs(subspace_gap(e0, e1) - 1.0) < 1e-14
    theta = 0.3
    tilted = np.array([[math.cos(theta)], [math.sin(theta)], [0.0]], dtype=complex)
    assert abs(subspace_gap(e0, tilted) - math.sin(theta)) < 1e-12
    assert subspace_gap(np.zeros((3, 0)), np.zeros((3, 0))) == 0.0
    assert subspace_gap(e0, np.eye(3, dtype=complex)[:, :2]) == 1.0
