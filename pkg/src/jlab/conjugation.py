"""Antilinear conjugations on C^n and their fixed-vector geometry.

A conjugation J is an antilinear involutive antiunitary map.  It is stored
through its coefficient matrix C: J x = C conj(x), where C must be symmetric
and unitary.  The linear map x -> J M J x then has matrix C conj(M) C*
(``sandwich``), and conjugation-invariant subspaces admit orthonormal bases
of J-fixed vectors (``fixed_basis``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotInvariant, RankLoss
from .numkernel import (
    RANK_REL_TOL,
    as_matrix,
    as_square,
    as_vector,
    frobenius,
    orthonormal_columns,
)
from .report import ResidualReport

FIXED_DISCARD_TOL = 1e-10
INVARIANCE_TOL = 1e-8


@dataclass(frozen=True)
class Conjugation:
    """Conjugation J x = C conj(x) with C symmetric unitary."""

    dim: int
    coeff: np.ndarray

    def __post_init__(self):
        c = as_square(self.coeff, "conjugation coefficient")
        if c.shape[0] != self.dim:
            raise DimensionMismatch(
                f"conjugation: dim {self.dim} does not match coefficient shape {c.shape}"
            )
        object.__setattr__(self, "coeff", c)

    def apply(self, x):
        """J x for a vector, or J applied to each column of a matrix."""
        a = np.asarray(x, dtype=complex)
        if a.ndim == 1:
            v = as_vector(a, self.dim, "conjugation argument")
            return self.coeff @ np.conj(v)
        a = as_matrix(a, "conjugation argument")
        if a.shape[0] != self.dim:
            raise DimensionMismatch(
                f"conjugation argument has {a.shape[0]} rows, expected {self.dim}"
            )
        return self.coeff @ np.conj(a)

    def sandwich(self, m):
        """Matrix of the linear map x -> J (M (J x)), i.e. C conj(M) C*."""
        a = as_square(m, "sandwich argument")
        if a.shape[0] != self.dim:
            raise DimensionMismatch(
                f"sandwich argument is {a.shape[0]}-dimensional, expected {self.dim}"
            )
        return self.coeff @ np.conj(a) @ self.coeff.conj().T


def canonical(dim):
    """Entrywise conjugation: C = I."""
    if dim < 1:
        raise DimensionMismatch(f"conjugation dimension must be positive, got {dim}")
    return Conjugation(int(dim), np.eye(int(dim), dtype=complex))


def verify(j, tol=1e-10):
    """Residuals for the conjugation axioms of J's coefficient matrix."""
    c = j.coeff
    eye = np.eye(j.dim, dtype=complex)
    rep = ResidualReport()
    rep.add("involution", frobenius(c @ np.conj(c) - eye), tol)
    rep.add("unitarity", frobenius(c.conj().T @ c - eye), tol)
    rep.add("symmetry", frobenius(c - c.T), tol)
    return rep


def as_seed_sequence(seed):
    """Coerce an int seed or existing SeedSequence for child spawning."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def random_unitary(dim, rng):
    """Haar-like unitary: QR of a complex Gaussian with phase-fixed diagonal."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_conjugation(dim, seed):
    """Seeded conjugation C = Q Q^T with Q Haar-like unitary."""
    if dim < 1:
        raise DimensionMismatch(f"conjugation dimension must be positive, got {dim}")
    rng = np.random.default_rng(seed)
    q = random_unitary(int(dim), rng)
    return Conjugation(int(dim), q @ q.T)


def direct_sum(j1, j2):
    """Block-diagonal conjugation on the direct sum of the two spaces."""
    n1, n2 = j1.dim, j2.dim
    c = np.zeros((n1 + n2, n1 + n2), dtype=complex)
    c[:n1, :n1] = j1.coeff
    c[n1:, n1:] = j2.coeff
    return Conjugation(n1 + n2, c)


def fixed_basis(
    j,
    basis,
    *,
    invariance_tol=INVARIANCE_TOL,
    discard_tol=FIXED_DISCARD_TOL,
    rank_rel=RANK_REL_TOL,
):
    """Orthonormal basis of J-fixed vectors spanning a J-invariant subspace.

    basis is an n x k matrix whose columns span the subspace (k = 0 allowed,
    returning an n x 0 result).  Candidates are generated deterministically:
    v + Jv for each input column v in order, then i(v - Jv), orthonormalized
    with real coefficients (which preserves J-fixedness) and discarded when
    the residual norm falls below discard_tol.

    Raises NotInvariant when the span is not J-invariant at invariance_tol
    (projector residual ||P - J P J||_F), and RankLoss if fewer than k fixed
    vectors survive, which cannot happen for a genuinely invariant span.
    """
    b = np.asarray(basis, dtype=complex)
    if b.ndim != 2 or b.shape[0] != j.dim:
        raise DimensionMismatch(
            f"fixed_basis: expected an {j.dim} x k basis, got shape {b.shape}"
        )
    n, k = b.shape
    if k == 0:
        return np.zeros((n, 0), dtype=complex)
    q0, _ = orthonormal_columns(b, rank_rel=rank_rel, name="fixed_basis input")
    proj = q0 @ q0.conj().T
    inv_res = frobenius(proj - j.sandwich(proj))
    if inv_res > invariance_tol:
        raise NotInvariant(
            f"span is not conjugation-invariant: projector residual {inv_res:.3e}"
        )
    cols = [b[:, i] / np.linalg.norm(b[:, i]) for i in range(k)]
    candidates = [v + j.apply(v) for v in cols]
    candidates += [1j * (v - j.apply(v)) for v in cols]
    out = []
    for w in candidates:
        w = w.astype(complex, copy=True)
        for _ in range(2):  # one re-orthogonalization pass for stability
            for g in out:
                w = w - np.real(np.vdot(g, w)) * g
        nrm = np.linalg.norm(w)
        if nrm > discard_tol:
            out.append(w / nrm)
        if len(out) == k:
            break
    if len(out) < k:
        raise RankLoss(
            f"extracted {len(out)} fixed vectors from a {k}-dimensional invariant span"
        )
    return np.column_stack(out)
