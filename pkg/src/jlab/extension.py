"""Self-adjoint extensions of J-imaginary symmetric partial operators.

A partial operator T is given by an orthonormal domain basis Q (n x d) and
its image A Q (n x d).  When T is symmetric and anticommutes with a
conjugation J on a J-invariant domain, the Cayley transform of T extends to
a J-real unitary V: on the range of T - i it maps (T - i)f to (T + i)f, and
on the defect space N_i it is completed by a pairing W of J-fixed
orthonormal bases of N_i and N_{-i}.  Inverting the Cayley transform,
A~ = iI + 2i (V - I)^{-1}, yields a self-adjoint J-imaginary extension of T.
When V - I is singular the relation is multivalued; sign flips on the
J-fixed basis of N_{-i} are retried before giving up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conjugation import as_seed_sequence, direct_sum, fixed_basis
from .errors import (
    BadShape,
    DimensionMismatch,
    DomainNotJInvariant,
    MultivaluedRelation,
    NotJImaginary,
    OutOfRange,
    Singular,
)
from .jclass import default_tol
from .numkernel import (
    as_matrix,
    frobenius,
    herm_eig,
    inverse,
    orth_complement,
    orthonormal_columns,
)
from .polar import random_j_real_unitary
from .report import ResidualReport

ORTHO_TOL = 1e-8
# smallest trusted singular value of V - I.  Estimated through the Gram
# matrix, whose eigenvalue noise is ~1e-12, so sigma below ~2e-6 cannot be
# told from zero; and the inverse-Cayley residuals degrade like eps/sigma,
# so anything below 1e-5 would break the 1e-8 diagnostic budget anyway.
SINGULAR_FLOOR = 1e-5


@dataclass(frozen=True)
class PartialSymmetricOperator:
    """Operator defined on a subspace: domain basis Q and image columns A Q."""

    ambient: int
    domain_basis: np.ndarray
    action: np.ndarray

    def __post_init__(self):
        q = as_matrix(self.domain_basis, "domain_basis")
        a = as_matrix(self.action, "action")
        n = int(self.ambient)
        if n < 1:
            raise BadShape(f"ambient dimension must be positive, got {n}")
        if q.shape[0] != n or a.shape[0] != n:
            raise BadShape(
                f"domain_basis {q.shape} / action {a.shape} do not live in dimension {n}"
            )
        if q.shape[1] != a.shape[1]:
            raise BadShape(
                f"domain_basis has {q.shape[1]} columns but action has {a.shape[1]}"
            )
        if not 1 <= q.shape[1] <= n:
            raise BadShape(f"domain dimension {q.shape[1]} must lie in [1, {n}]")
        gram = q.conj().T @ q - np.eye(q.shape[1], dtype=complex)
        if frobenius(gram) > ORTHO_TOL:
            raise BadShape(
                f"domain_basis columns are not orthonormal (residual {frobenius(gram):.3e})"
            )
        object.__setattr__(self, "ambient", n)
        object.__setattr__(self, "domain_basis", q)
        object.__setattr__(self, "action", a)

    @property
    def domain_dim(self):
        return self.domain_basis.shape[1]


@dataclass(frozen=True)
class DefectData:
    """Ranges of T -+ i and orthonormal bases of their complements."""

    m_plus: np.ndarray
    m_minus: np.ndarray
    n_plus: np.ndarray
    n_minus: np.ndarray
    defect_numbers: tuple


@dataclass
class ExtensionResult:
    """J-real unitary V, its inverse Cayley transform, and diagnostics."""

    v: np.ndarray
    a_tilde: np.ndarray
    w: np.ndarray
    report: ResidualReport


def _check_same_space(j, t):
    if t.ambient != j.dim:
        raise DimensionMismatch(
            f"operator lives in dimension {t.ambient}, conjugation in {j.dim}"
        )


def verify_symmetric_jimaginary(j, t, tol=None):
    """Residuals for symmetry and J-anticommutation of T on its domain.

    Raises DomainNotJInvariant when J does not map the domain onto itself
    (the anticommutation residual is undefined in that case).
    """
    if tol is None:
        tol = default_tol()
    _check_same_space(j, t)
    q = t.domain_basis
    act = t.action
    s = q.conj().T @ act
    rep = ResidualReport(extras={"domain_dim": t.domain_dim})
    rep.add("symmetry", frobenius(s - s.conj().T) / (1.0 + frobenius(s)), tol)
    proj = q @ q.conj().T
    inv_res = frobenius(proj - j.sandwich(proj))
    if inv_res > tol:
        raise DomainNotJInvariant(
            f"domain is not conjugation-invariant: projector residual {inv_res:.3e}"
        )
    rep.add("domain_invariance", inv_res, tol)
    coords = q.conj().T @ j.apply(q)
    anti = act @ coords + j.apply(act)
    rep.add("anticommutation", frobenius(anti) / (1.0 + frobenius(act)), tol)
    return rep


def ranges_defects(t):
    """Ranges of T -+ i (as column frames) and their orthogonal complements."""
    m_plus = t.action - 1j * t.domain_basis
    m_minus = t.action + 1j * t.domain_basis
    n_plus = orth_complement(m_plus, name="range of T - i")
    n_minus = orth_complement(m_minus, name="range of T + i")
    k = t.ambient - t.domain_dim
    return DefectData(m_plus, m_minus, n_plus, n_minus, (k, k))


def check_defect_j_invariance(j, t, tol=None):
    """Projector residuals ||P - J P J||_F for both defect spaces."""
    if tol is None:
        tol = default_tol()
    _check_same_space(j, t)
    defect = ranges_defects(t)
    rep = ResidualReport(extras={"defect_numbers": defect.defect_numbers})
    for name, basis in (("n_plus", defect.n_plus), ("n_minus", defect.n_minus)):
        proj = basis @ basis.conj().T
        rep.add(f"{name}_invariance", frobenius(proj - j.sandwich(proj)), tol)
    return rep


def cayley_isometry(t):
    """Partial isometry mapping (T - i)f to (T + i)f, zero on the defect N_i."""
    defect = ranges_defects(t)
    q, r = orthonormal_columns(defect.m_plus, name="range of T - i")
    return (defect.m_minus @ inverse(r)) @ q.conj().T


def build_w(j, defect):
    """Pairing of J-fixed orthonormal defect bases: W = sum f-_k (f+_k)*."""
    f_plus = fixed_basis(j, defect.n_plus)
    f_minus = fixed_basis(j, defect.n_minus)
    return f_minus @ f_plus.conj().T


def extend(j, t, retry_budget=None, tol=None):
    """Self-adjoint J-imaginary extension of T through the Cayley transform.

    Builds V = U + W from the Cayley isometry U and a J-fixed defect pairing
    W, then inverts: A~ = iI + 2i (V - I)^{-1}.  When V - I is singular,
    retries flip signs on columns of the J-fixed basis of N_{-i}: the first
    retry flips exactly the columns whose partner directions in N_i overlap
    ker(V - I) (each such channel feeds the kernel, so all must move at
    once), later retries sweep single columns.  The budget counts attempts
    including the first and defaults to defect + 1.  Raises
    MultivaluedRelation if every attempt leaves V - I singular, reporting
    ker(V - I) of the unflipped attempt.
    """
    if tol is None:
        tol = default_tol()
    _check_same_space(j, t)
    rep0 = verify_symmetric_jimaginary(j, t, tol)
    if not rep0.passed:
        bad = ", ".join(it.name for it in rep0.items if not it.passed)
        raise NotJImaginary(f"operator gate failed: {bad}")
    defect = ranges_defects(t)
    uop = cayley_isometry(t)
    f_plus = fixed_basis(j, defect.n_plus)
    f_minus = fixed_basis(j, defect.n_minus)
    k = f_plus.shape[1]
    budget = k + 1 if retry_budget is None else int(retry_budget)
    if budget < 1:
        raise OutOfRange(f"retry budget must be at least 1, got {budget}")
    n = t.ambient
    eye = np.eye(n, dtype=complex)

    def attempt_v(flips):
        fm = f_minus.copy()
        fm[:, flips] = -fm[:, flips]
        w = fm @ f_plus.conj().T
        v = uop + w
        vm = v - eye
        dec = herm_eig(vm.conj().T @ vm)
        svals = np.sqrt(np.clip(dec.eigenvalues, 0.0, None))
        kernel = dec.vectors[:, svals <= SINGULAR_FLOOR]
        return w, v, float(svals[0]), kernel

    base_kernel = 0
    plan = [()]
    chosen = None
    attempts = 0
    tried = set()
    while plan and attempts < budget:
        flips = plan.pop(0)
        if flips in tried:
            continue
        tried.add(flips)
        attempts += 1
        w, v, smin, kernel = attempt_v(list(flips))
        if not flips:
            base_kernel = kernel.shape[1]
            if kernel.shape[1] and k:
                overlap = np.linalg.norm(f_plus.conj().T @ kernel, axis=1)
                guided = tuple(int(i) for i in np.nonzero(overlap > 1e-8)[0])
                if guided:
                    plan.append(guided)
            plan.extend((i,) for i in range(k))
        if smin > SINGULAR_FLOOR:
            try:
                vm_inv = inverse(v - eye)
            except Singular:
                # the floor screens this out in practice, but elimination
                # has the final word on whether V - I is usable
                continue
            chosen = (flips, attempts, w, v, smin, vm_inv)
            break
    if chosen is None:
        raise MultivaluedRelation(
            f"V - I stayed singular through {attempts} attempt(s); "
            f"kernel dimension {base_kernel} on the unflipped pairing",
            base_kernel,
        )
    flips, attempts, w, v, smin, vm_inv = chosen
    flip = list(flips) if flips else None
    a_tilde = 1j * eye + 2j * vm_inv
    q = t.domain_basis
    act = t.action
    nv = frobenius(v)
    na = frobenius(a_tilde)
    rep = ResidualReport(
        extras={
            "defect_numbers": defect.defect_numbers,
            "flipped_columns": flip,
            "attempts": attempts,
            "min_singular_value": smin,
        }
    )
    rep.add("v_unitary", frobenius(v.conj().T @ v - eye) / (1.0 + nv), tol)
    rep.add("v_j_real", frobenius(v - j.sandwich(v)) / (1.0 + nv), tol)
    rep.add("atilde_hermitian", frobenius(a_tilde - a_tilde.conj().T) / (1.0 + na), tol)
    rep.add("atilde_j_imaginary", frobenius(a_tilde + j.sandwich(a_tilde)) / (1.0 + na), tol)
    rep.add("extends_action", frobenius(a_tilde @ q - act) / (1.0 + frobenius(act)), tol)
    return ExtensionResult(v=v, a_tilde=a_tilde, w=w, report=rep)


def double(j, t):
    """Doubled problem: conjugation J + J and operator T + (-T)."""
    n = t.ambient
    d = t.domain_dim
    j2 = direct_sum(j, j)
    q2 = np.zeros((2 * n, 2 * d), dtype=complex)
    a2 = np.zeros((2 * n, 2 * d), dtype=complex)
    q2[:n, :d] = t.domain_basis
    q2[n:, d:] = t.domain_basis
    a2[:n, :d] = t.action
    a2[n:, d:] = -t.action
    return j2, PartialSymmetricOperator(2 * n, q2, a2)


def random_jimaginary_partial(j, d, seed):
    """Seeded J-imaginary symmetric partial operator with domain dimension d.

    In a J-fixed frame Phi the generator takes S = i [R_sym; R_free] with
    R_sym real antisymmetric d x d (compressed operator, Hermitian and
    purely imaginary there) and R_free real (n-d) x d, then rotates the
    whole picture by a random J-real unitary.
    """
    n = j.dim
    if not 1 <= d <= n:
        raise BadShape(f"domain dimension {d} must lie in [1, {n}]")
    s_gen, s_rot = as_seed_sequence(seed).spawn(2)
    rng = np.random.default_rng(s_gen)
    phi = fixed_basis(j, np.eye(n, dtype=complex))
    r_sym = rng.uniform(-1.0, 1.0, (d, d))
    r_sym = r_sym - r_sym.T
    blocks = [r_sym]
    if n > d:
        blocks.append(rng.uniform(-1.0, 1.0, (n - d, d)))
    s = 1j * np.vstack(blocks).astype(complex)
    rot = random_j_real_unitary(j, n, s_rot)
    return PartialSymmetricOperator(n, rot @ phi[:, :d], rot @ (phi @ s))
