"""Worked-example family: truncation blocks, resolvent growth, Jacobi restriction."""

import numpy as np
import pytest

from jlab.errors import BadShape, OutOfRange
from jlab.examples import (
    block_a0,
    cayley_v,
    growth_probe,
    jacobi_imag,
    norm_growth,
    resolvent_check,
    truncation_family,
)
from jlab.extension import ranges_defects
from jlab.numkernel import frobenius, herm_eig, inverse


def test_block_a0_frozen_entries_and_range():
    np.testing.assert_allclose(
        block_a0(0.5), np.array([[0.0, 0.5j], [-0.5j, 0.0]]), atol=0
    )
    np.testing.assert_allclose(block_a0(0.0), np.zeros((2, 2)), atol=0)
    for bad in (1.0, -1.0, 2.0, float("nan")):
        with pytest.raises(OutOfRange):
            block_a0(bad)


def test_truncation_family_layout():
    fam = truncation_family(3)
    assert fam.level == 3
    assert fam.conjugation.dim == 6
    for k in (1, 2, 3):
        np.testing.assert_allclose(fam.block(k), block_a0(1.0 - 1.0 / k), atol=0)
    # off-diagonal coupling between blocks is exactly zero
    assert np.max(np.abs(fam.operator[:2, 2:])) == 0.0
    for bad in (0, 4):
        with pytest.raises(OutOfRange):
            fam.block(bad)
    with pytest.raises(OutOfRange):
        truncation_family(0)


def test_resolvent_check_against_closed_form():
    for beta in (0.0, 0.5, 0.9, 0.99):
        rep = resolvent_check(beta, tol=1e-11)
        assert rep.passed, f"beta={beta}: worst {rep.worst():.3e}"
        assert rep.extras["beta"] == beta


def test_resolvent_frozen_half():
    # (A0(1/2) + I)^{-1} in closed form
    got = inverse(block_a0(0.5) + np.eye(2, dtype=complex))
    expected = (4.0 / 3.0) * np.array([[1.0, -0.5j], [0.5j, 1.0]])
    np.testing.assert_allclose(got, expected, atol=1e-13)


def test_growth_probe_frozen_rows():
    rows = growth_probe(4)
    expected = [1.0, 4.0 / 3.0, 9.0 / 5.0, 16.0 / 7.0]
    for (k, computed, formula, rel), want in zip(rows, expected):
        assert formula == want
        assert abs(computed - want) <= 1e-12 * want
        assert rel <= 1e-12
    values = [row[1] for row in rows]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_cayley_v_level_one_is_minus_identity():
    np.testing.assert_allclose(cayley_v(1), -np.eye(2), atol=1e-13)


def test_cayley_v_block_eigenvalues():
    v = cayley_v(2)
    dec = herm_eig(v[2:, 2:])  # second block, beta = 1/2
    np.testing.assert_allclose(dec.eigenvalues, [-3.0, -1.0 / 3.0], atol=1e-12)


def test_cayley_v_two_expressions_agree():
    fam = truncation_family(4)
    eye = np.eye(8, dtype=complex)
    direct = eye + 2.0 * inverse(fam.operator - eye)
    assert frobenius(cayley_v(4) - direct) < 1e-12


def test_norm_growth_frozen():
    rows = norm_growth(3)
    assert [row[2] for row in rows] == [1.0, 3.0, 5.0]
    assert max(row[3] for row in rows) < 1e-11


def test_jacobi_imag_frozen_entries():
    j, t = jacobi_imag(3, 2, alphas=(2.0, 3.0))
    assert j.dim == 3
    assert t.domain_dim == 2
    np.testing.assert_allclose(
        t.action,
        np.array([[0.0, 2.0j], [-2.0j, 0.0], [0.0, -3.0j]], dtype=complex),
        atol=0,
    )
    assert ranges_defects(t).defect_numbers == (1, 1)


def test_jacobi_imag_validation():
    with pytest.raises(BadShape):
        jacobi_imag(1, 1)
    with pytest.raises(BadShape):
        jacobi_imag(3, 0)
    with pytest.raises(BadShape):
        jacobi_imag(3, 3)
    with pytest.raises(BadShape):
        jacobi_imag(3, 1, alphas=(1.0,))
    with pytest.raises(OutOfRange):
        jacobi_imag(3, 1, alphas=(1.0, 0.0))
    with pytest.raises(OutOfRange):
        jacobi_imag(3, 1, alphas=(1.0, -2.0))
