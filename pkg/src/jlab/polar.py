"""Refined polar decomposition of J-unitary operators.

A J-unitary A factors as A = U B where U is unitary and J-real (commutes
with J) and B = sqrt(A* A) is Hermitian, positive definite and J-unitary.
The factors inherit structure from A: J maps each eigenspace of G = A* A
onto the eigenspace of the reciprocal eigenvalue, J B J = B^{-1}, and
sqrt(G^{-1}) = (sqrt G)^{-1}.  Routines here compute the factorization,
re-synthesize J-unitaries from structured factors, and verify the
structural claims by independent routes.
"""

from __future__ import annotations

import math

from dataclasses import dataclass

import numpy as np

from .conjugation import as_seed_sequence, fixed_basis
from .errors import BadFactor, DimensionMismatch, NotJUnitary
from .jclass import classify, default_tol
from .numkernel import (
    as_square,
    frobenius,
    herm_eig,
    herm_fn,
    inverse,
    spectral_norm,
    subspace_gap,
)
from .report import ResidualReport


@dataclass
class PolarParts:
    """Factors of A = U B together with their structural residuals."""

    u: np.ndarray
    b: np.ndarray
    report: ResidualReport


def _gate_j_unitary(j, a, tol):
    prof = classify(j, a, tol)
    if not prof.passes("J-unitary"):
        r = prof.residual("J-unitary")
        detail = "operator is singular" if r is None else f"residual {r:.3e} > {tol:.1e}"
        raise NotJUnitary(f"J-unitary gate failed: {detail}")
    return prof


def refined_polar(j, a, tol=None):
    """Factor a J-unitary A as U B with U unitary J-real and B = sqrt(A*A).

    Raises NotJUnitary when A fails the classification gate at tol.  Both
    factors come from a single spectral decomposition of G = A* A; the
    report records reconstruction and structure residuals.
    """
    if tol is None:
        tol = default_tol()
    a = as_square(a, "operator")
    prof = _gate_j_unitary(j, a, tol)
    g = a.conj().T @ a
    dec = herm_eig(g)
    b = dec.apply(math.sqrt)
    binv = dec.apply(lambda lam: 1.0 / math.sqrt(lam))
    u = a @ binv
    eye = np.eye(a.shape[0], dtype=complex)
    nb = frobenius(b)
    nbinv = frobenius(binv)
    nu = frobenius(u)
    floor = math.sqrt(max(0.0, float(dec.eigenvalues[0])))
    rep = ResidualReport(extras={"b_floor": floor, "cond": prof.cond})
    rep.add("reconstruct", frobenius(a - u @ b) / (1.0 + frobenius(a)), tol)
    rep.add("u_unitary", frobenius(u.conj().T @ u - eye) / (1.0 + nu), tol)
    rep.add("u_j_real", frobenius(u - j.sandwich(u)) / (1.0 + nu), tol)
    rep.add("b_hermitian", frobenius(b - b.conj().T) / (1.0 + nb), tol)
    rep.add("b_j_unitary", frobenius(j.sandwich(b) - binv) / (1.0 + nb + nbinv), tol)
    rep.add("b_positive", max(0.0, -float(dec.eigenvalues[0])), tol)
    return PolarParts(u=u, b=b, report=rep)


def synthesize(j, u, b, tol=None):
    """Product U B after gating the factor preconditions.

    U must be unitary and J-real, B Hermitian positive definite and
    J-unitary; violations raise BadFactor naming the failed condition.
    The result is then J-unitary by construction.
    """
    if tol is None:
        tol = default_tol()
    u = as_square(u, "U factor")
    b = as_square(b, "B factor")
    if u.shape != b.shape or u.shape[0] != j.dim:
        raise DimensionMismatch(
            f"factors {u.shape} / {b.shape} do not match conjugation dimension {j.dim}"
        )
    eye = np.eye(j.dim, dtype=complex)
    nu = frobenius(u)
    r = frobenius(u.conj().T @ u - eye) / (1.0 + nu)
    if r > tol:
        raise BadFactor(f"U is not unitary: residual {r:.3e}")
    r = frobenius(u - j.sandwich(u)) / (1.0 + nu)
    if r > tol:
        raise BadFactor(f"U is not J-real: residual {r:.3e}")
    nb = frobenius(b)
    r = frobenius(b - b.conj().T) / (1.0 + nb)
    if r > tol:
        raise BadFactor(f"B is not Hermitian: residual {r:.3e}")
    floor = float(herm_eig(b).eigenvalues[0])
    if floor <= 0.0:
        raise BadFactor(f"B is not positive definite: smallest eigenvalue {floor:.3e}")
    prof = classify(j, b, tol)
    if not prof.passes("J-unitary"):
        rb = prof.residual("J-unitary")
        raise BadFactor(
            "B is not J-unitary: "
            + ("singular" if rb is None else f"residual {rb:.3e}")
        )
    return u @ b


def random_j_real_unitary(j, dim, seed):
    """Seeded unitary commuting with J: a real rotation of a J-fixed frame."""
    if dim != j.dim:
        raise DimensionMismatch(f"requested dimension {dim} but conjugation has {j.dim}")
    rng = np.random.default_rng(seed)
    phi = fixed_basis(j, np.eye(dim, dtype=complex))
    z = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    o = q * np.sign(np.diag(r))
    return phi @ o.astype(complex) @ phi.conj().T


def random_positive_j_unitary(j, dim, seed):
    """Seeded Hermitian positive-definite J-unitary B = exp(i Phi K Phi*).

    K is real antisymmetric with entries drawn uniformly from [-2, 2],
    rescaled when needed so its spectral norm stays at or below 2 (keeps
    cond(B) <= e^4 at every dimension); Phi is a J-fixed orthonormal frame.
    """
    if dim != j.dim:
        raise DimensionMismatch(f"requested dimension {dim} but conjugation has {j.dim}")
    rng = np.random.default_rng(seed)
    k = rng.uniform(-2.0, 2.0, (dim, dim))
    k = 0.5 * (k - k.T)
    top = spectral_norm(k.astype(complex))
    if top > 2.0:
        k *= 2.0 / top
    phi = fixed_basis(j, np.eye(dim, dtype=complex))
    h = phi @ (1j * k.astype(complex)) @ phi.conj().T
    return herm_fn(h, math.exp)


def random_j_unitary(j, dim, seed):
    """Seeded generic J-unitary: product of the two structured draws."""
    s_u, s_b = as_seed_sequence(seed).spawn(2)
    u = random_j_real_unitary(j, dim, s_u)
    b = random_positive_j_unitary(j, dim, s_b)
    return u @ b


def check_prop21(j, a, tol=None):
    """Closure checks: inverse, adjoint and Gram matrix stay J-unitary.

    Also verifies A maps onto the whole space (A A^{-1} = I both ways).
    Raises NotJUnitary when A itself fails the gate.
    """
    if tol is None:
        tol = default_tol()
    a = as_square(a, "operator")
    prof = _gate_j_unitary(j, a, tol)
    ainv = inverse(a)
    eye = np.eye(a.shape[0], dtype=complex)
    den = 1.0 + frobenius(a) + frobenius(ainv)
    rep = ResidualReport(extras={"cond": prof.cond})
    rep.add("inverse_j_unitary", classify(j, ainv, tol).residual("J-unitary"), tol)
    rep.add("adjoint_j_unitary", classify(j, a.conj().T, tol).residual("J-unitary"), tol)
    rep.add("gram_j_unitary", classify(j, a.conj().T @ a, tol).residual("J-unitary"), tol)
    rep.add("full_range", frobenius(a @ ainv - eye) / den, tol)
    rep.add("full_domain", frobenius(ainv @ a - eye) / den, tol)
    return rep


def check_unitary_equiv(j, a, tol=None):
    """A A* equals U (A* A) U* with the polar unitary U; spectra must match."""
    if tol is None:
        tol = default_tol()
    a = as_square(a, "operator")
    parts = refined_polar(j, a, tol)
    g = a.conj().T @ a
    gstar = a @ a.conj().T
    sim = frobenius(gstar - parts.u @ g @ parts.u.conj().T) / (1.0 + frobenius(g))
    lam = herm_eig(g).eigenvalues
    mu = herm_eig(gstar).eigenvalues
    spectra_dev = max(abs(l - m) / (1.0 + abs(l)) for l, m in zip(lam, mu))
    rep = ResidualReport()
    rep.add("similarity", sim, tol)
    rep.add("spectra_match", spectra_dev, tol)
    return rep


def check_reciprocity(j, a, tol=None):
    """Spectral reciprocity of G = A* A under J, and both sqrt identities.

    For each eigenvalue cluster lambda of G, J must map its eigenspace onto
    the eigenspace of the cluster nearest 1/lambda (compared as the sine of
    the largest principal angle).  Additionally J B J = B^{-1} for
    B = sqrt(G), and sqrt(G^{-1}) computed spectrally must equal the
    elimination inverse of sqrt(G).
    """
    if tol is None:
        tol = default_tol()
    a = as_square(a, "operator")
    _gate_j_unitary(j, a, tol)
    g = a.conj().T @ a
    dec = herm_eig(g)
    worst_val = 0.0
    worst_gap = 0.0
    for c in range(len(dec.clusters)):
        lam = dec.cluster_value(c)
        target = 1.0 / lam
        cbest = min(
            range(len(dec.clusters)),
            key=lambda cc: abs(dec.cluster_value(cc) - target),
        )
        mu = dec.cluster_value(cbest)
        worst_val = max(worst_val, abs(mu - target) / (1.0 + abs(target)))
        jimage = j.apply(dec.cluster_basis(c))
        worst_gap = max(worst_gap, subspace_gap(jimage, dec.cluster_basis(cbest)))
    b = dec.apply(math.sqrt)
    binv_elim = inverse(b)
    nb = frobenius(b)
    nbi = frobenius(binv_elim)
    sqrt_of_ginv = herm_fn(inverse(g), math.sqrt)
    rep = ResidualReport(extras={"clusters": len(dec.clusters)})
    rep.add("eigenvalue_reciprocity", worst_val, tol)
    rep.add("eigenspace_reciprocity", worst_gap, tol)
    rep.add("sqrt_conjugation", frobenius(j.sandwich(b) - binv_elim) / (1.0 + nb + nbi), tol)
    rep.add("sqrt_inverse_commute", frobenius(sqrt_of_ginv - binv_elim) / (1.0 + nbi), tol)
    return rep
