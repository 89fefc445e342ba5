"""Worked examples: a truncation family with unbounded inverse Cayley data,
and a purely imaginary Jacobi matrix restricted to a partial domain.

The truncation family stacks 2 x 2 blocks

    A0(beta) = [[0, beta*i], [-beta*i, 0]],   beta_k = 1 - 1/k,

under the canonical conjugation.  Each block is self-adjoint and
J-skew-self-adjoint with spectrum {-beta, beta}; as k grows the resolvent
at -1 blows up like k^2 / (2k - 1) and the Cayley transform
V = (A + I)(A - I)^{-1} has block norms 2k - 1.  This is the
finite-dimensional shadow of an unbounded multivalued limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conjugation import Conjugation, canonical
from .errors import BadShape, OutOfRange
from .extension import PartialSymmetricOperator
from .numkernel import inverse, spectral_norm
from .report import ResidualReport


def block_a0(beta):
    """2 x 2 block [[0, beta*i], [-beta*i, 0]]; requires -1 < beta < 1."""
    beta = float(beta)
    if not (math.isfinite(beta) and -1.0 < beta < 1.0):
        raise OutOfRange(f"beta must lie strictly inside (-1, 1), got {beta}")
    return np.array([[0.0, beta * 1j], [-beta * 1j, 0.0]], dtype=complex)


@dataclass(frozen=True)
class TruncationFamily:
    """Level-n truncation: 2n-dimensional operator and its conjugation."""

    level: int
    conjugation: Conjugation
    operator: np.ndarray

    def block(self, k):
        """The k-th 2 x 2 block (1-based, beta = 1 - 1/k)."""
        if not 1 <= k <= self.level:
            raise OutOfRange(f"block index {k} outside [1, {self.level}]")
        i = 2 * (k - 1)
        return self.operator[i : i + 2, i : i + 2]


def truncation_family(n):
    """Blocks A0(1 - 1/k) for k = 1..n under the canonical conjugation."""
    n = int(n)
    if n < 1:
        raise OutOfRange(f"level must be at least 1, got {n}")
    op = np.zeros((2 * n, 2 * n), dtype=complex)
    for k in range(1, n + 1):
        i = 2 * (k - 1)
        op[i : i + 2, i : i + 2] = block_a0(1.0 - 1.0 / k)
    return TruncationFamily(n, canonical(2 * n), op)


def resolvent_check(beta, tol=1e-10):
    """Compare elimination inverses of A0(beta) -+ I with the closed form

    (A0(beta) +- I)^{-1} = 1/(1 - beta^2) * [[+-1, -beta*i], [beta*i, +-1]].
    """
    a = block_a0(beta)
    beta = float(beta)
    eye = np.eye(2, dtype=complex)
    factor = 1.0 / (1.0 - beta * beta)
    rep = ResidualReport(extras={"beta": beta})
    for sign, name in ((1.0, "plus"), (-1.0, "minus")):
        closed = factor * np.array(
            [[sign, -beta * 1j], [beta * 1j, sign]], dtype=complex
        )
        got = inverse(a + sign * eye)
        rep.add(f"resolvent_{name}", float(np.max(np.abs(got - closed))), tol)
    return rep


def growth_probe(n):
    """Rows (k, computed, formula, rel_err) for the resolvent growth values.

    computed is ((I + A)^{-1} e_{k,1}, e_{k,1}) through the full-matrix
    elimination inverse at level n; formula is k^2 / (2k - 1).
    """
    fam = truncation_family(n)
    inv = inverse(np.eye(2 * n, dtype=complex) + fam.operator)
    rows = []
    for k in range(1, n + 1):
        i = 2 * (k - 1)
        computed = float(np.real(inv[i, i]))
        formula = k * k / (2.0 * k - 1.0)
        rows.append((k, computed, formula, abs(computed - formula) / formula))
    return rows


def cayley_v(n):
    """V = (A + I)(A - I)^{-1} for the level-n truncation operator."""
    fam = truncation_family(n)
    eye = np.eye(2 * n, dtype=complex)
    return (fam.operator + eye) @ inverse(fam.operator - eye)


def norm_growth(n):
    """Rows (k, computed, formula, rel_err) for per-block norms of V.

    The k-th block of V has spectral norm 2k - 1.
    """
    v = cayley_v(n)
    rows = []
    for k in range(1, n + 1):
        i = 2 * (k - 1)
        computed = spectral_norm(v[i : i + 2, i : i + 2])
        formula = 2.0 * k - 1.0
        rows.append((k, computed, formula, abs(computed - formula) / formula))
    return rows


def jacobi_imag(n, d, alphas=None):
    """Purely imaginary Jacobi matrix restricted to the first d basis vectors.

    The full matrix has entries M[k, k+1] = i*alpha_k, M[k+1, k] = -i*alpha_k
    (alphas defaults to all ones, length n - 1); the restriction to
    span{e_0, .., e_{d-1}} is symmetric and J-imaginary for the canonical
    conjugation, with defect numbers (n - d, n - d).
    """
    n = int(n)
    d = int(d)
    if n < 2:
        raise BadShape(f"ambient dimension must be at least 2, got {n}")
    if not 1 <= d < n:
        raise BadShape(f"domain dimension {d} must lie in [1, {n - 1}]")
    if alphas is None:
        alphas = [1.0] * (n - 1)
    alphas = [float(a) for a in alphas]
    if len(alphas) != n - 1:
        raise BadShape(f"expected {n - 1} couplings, got {len(alphas)}")
    for a in alphas:
        if not (math.isfinite(a) and a > 0.0):
            raise OutOfRange(f"couplings must be positive reals, got {a}")
    m = np.zeros((n, n), dtype=complex)
    for k in range(n - 1):
        m[k, k + 1] = 1j * alphas[k]
        m[k + 1, k] = -1j * alphas[k]
    q = np.eye(n, dtype=complex)[:, :d]
    return canonical(n), PartialSymmetricOperator(n, q, m[:, :d])
