"""Operator classes relative to a conjugation J.

The bilinear form [x, y] = (x, Jy) turns C^n into a space with a symmetric
(not sesquilinear) pairing.  An operator can be symmetric, skew-symmetric or
isometric for that form, self-adjoint / skew-self-adjoint / unitary in the
J-twisted sense (A* replaced by JA*J), or commute / anticommute with J
itself (J-real / J-imaginary).  ``classify`` measures all of these at once,
plus plain self-adjointness; ``definitional_oracle`` recomputes the same
residuals from the definitions, one basis pair at a time, sharing no matrix
algebra with classify.

For the canonical conjugation (C = I) the classes reduce to familiar matrix
conditions: J-symmetric means A = A^T, J-unitary means A^T A = I (complex
orthogonal), J-real means real entries, J-imaginary means purely imaginary
entries.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, DimensionMismatch, Singular
from .numkernel import as_square, as_vector, frobenius, inverse

CLASS_NAMES = (
    "self-adjoint",
    "J-symmetric",
    "J-skew-symmetric",
    "J-isometric",
    "J-self-adjoint",
    "J-skew-self-adjoint",
    "J-unitary",
    "J-real",
    "J-imaginary",
)

ORACLE_DIM_CAP = 8


def default_tol():
    """Verdict tolerance: 1e-8, overridable through the JLAB_TOL env var."""
    raw = os.environ.get("JLAB_TOL")
    if raw is None:
        return 1e-8
    try:
        val = float(raw)
    except ValueError as exc:
        raise ValueError(f"JLAB_TOL is not a number: {raw!r}") from exc
    if not (math.isfinite(val) and val > 0):
        raise ValueError(f"JLAB_TOL must be a positive finite number, got {raw!r}")
    return val


def bilinear_form(j, x, y):
    """[x, y] = (x, Jy); bilinear in both slots, symmetric."""
    xv = as_vector(x, j.dim, "x")
    yv = as_vector(y, j.dim, "y")
    return complex(np.vdot(j.apply(yv), xv))


@dataclass(frozen=True)
class ClassCheck:
    residual: float | None
    passed: bool


@dataclass
class OperatorProfile:
    """Per-class residuals and verdicts for one operator."""

    checks: dict
    invertible: bool
    cond: float | None
    tol: float

    def passes(self, name):
        return self.checks[name].passed

    def residual(self, name):
        return self.checks[name].residual

    def passing_classes(self):
        return tuple(n for n in CLASS_NAMES if self.checks[n].passed)

    def to_dict(self):
        return {
            "tol": self.tol,
            "invertible": self.invertible,
            "cond": self.cond,
            "classes": {
                name: {"residual": c.residual, "passed": c.passed}
                for name, c in self.checks.items()
            },
        }


def _profile_from_residuals(res, invertible, cond, tol):
    checks = {}
    for name in CLASS_NAMES:
        r = res[name]
        if r is None:
            checks[name] = ClassCheck(None, False)
        else:
            checks[name] = ClassCheck(float(r), float(r) <= tol)
    return OperatorProfile(checks, invertible, cond, tol)


def classify(j, a, tol=None):
    """Residuals and verdicts for all nine classes of A relative to J.

    Residuals are Frobenius norms scaled by 1 + ||A||_F (J-unitary adds
    ||A^{-1}||_F to the denominator).  When A is singular the J-unitary
    entry carries residual None and verdict False.
    """
    if tol is None:
        tol = default_tol()
    a = as_square(a, "operator")
    if a.shape[0] != j.dim:
        raise DimensionMismatch(
            f"operator is {a.shape[0]}-dimensional, conjugation is {j.dim}-dimensional"
        )
    eye = np.eye(j.dim, dtype=complex)
    astar = a.conj().T
    sa = j.sandwich(a)
    sastar = j.sandwich(astar)
    na = frobenius(a)
    den = 1.0 + na
    try:
        ainv = inverse(a)
    except Singular:
        ainv = None
    res = {
        "self-adjoint": frobenius(a - astar) / den,
        "J-symmetric": frobenius(sa - astar) / den,
        "J-skew-symmetric": frobenius(sa + astar) / den,
        "J-isometric": frobenius(sa.conj().T @ a - eye) / den,
        "J-self-adjoint": frobenius(a - sastar) / den,
        "J-skew-self-adjoint": frobenius(a + sastar) / den,
        "J-real": frobenius(a - sa) / den,
        "J-imaginary": frobenius(a + sa) / den,
    }
    if ainv is None:
        res["J-unitary"] = None
        invertible = False
        cond = None
    else:
        ninv = frobenius(ainv)
        res["J-unitary"] = frobenius(ainv - sastar) / (den + ninv)
        invertible = True
        cond = na * ninv
    return _profile_from_residuals(res, invertible, cond, tol)


def _rss(values):
    return math.sqrt(sum(float(abs(v)) ** 2 for v in values))


def definitional_oracle(j, a, tol=None, cap=ORACLE_DIM_CAP):
    """Recompute the classify profile straight from the definitions.

    Evaluates each class condition on all standard-basis pairs using the
    bilinear form, J applications and matrix-vector products, aggregating
    deviations in root-sum-square form with the same denominators as
    classify.  The inverse route uses numpy's solver, not the elimination
    code.  Quadratic in basis pairs, so capped: raises CapExceeded above
    dimension ``cap``.
    """
    if tol is None:
        tol = default_tol()
    a = as_square(a, "operator")
    n = a.shape[0]
    if a.shape[0] != j.dim:
        raise DimensionMismatch(
            f"operator is {n}-dimensional, conjugation is {j.dim}-dimensional"
        )
    if n > cap:
        raise CapExceeded(f"definitional oracle is capped at dimension {cap}, got {n}")
    basis = [np.eye(n, dtype=complex)[:, i] for i in range(n)]
    acols = [a @ e for e in basis]
    astar = a.conj().T
    na = _rss(abs(a[i, k]) for i in range(n) for k in range(n))
    den = 1.0 + na

    try:
        ainv = np.linalg.solve(a, np.eye(n, dtype=complex))
        if not np.all(np.isfinite(ainv)):
            ainv = None
    except np.linalg.LinAlgError:
        ainv = None

    dev = {name: [] for name in CLASS_NAMES}
    for i in range(n):
        ei = basis[i]
        aei = acols[i]
        jei = j.apply(ei)
        jaei = j.apply(aei)
        ajei = a @ jei
        jastar_jei = j.apply(astar @ jei)
        # per-column deviations (vector-valued conditions)
        dev["J-self-adjoint"].extend(aei - jastar_jei)
        dev["J-skew-self-adjoint"].extend(aei + jastar_jei)
        dev["J-real"].extend(ajei - jaei)
        dev["J-imaginary"].extend(ajei + jaei)
        if ainv is not None:
            dev["J-unitary"].extend(ainv @ ei - jastar_jei)
        # per-pair deviations (scalar conditions through the forms)
        for k in range(n):
            ek = basis[k]
            aek = acols[k]
            dev["self-adjoint"].append(np.vdot(ek, aei) - np.vdot(aek, ei))
            fwd = bilinear_form(j, aei, ek)
            bwd = bilinear_form(j, ei, aek)
            dev["J-symmetric"].append(fwd - bwd)
            dev["J-skew-symmetric"].append(fwd + bwd)
            dev["J-isometric"].append(
                bilinear_form(j, aei, aek) - bilinear_form(j, ei, ek)
            )

    res = {name: _rss(dev[name]) / den for name in CLASS_NAMES if name != "J-unitary"}
    if ainv is None:
        res["J-unitary"] = None
        invertible = False
        cond = None
    else:
        ninv = _rss(abs(ainv[i, k]) for i in range(n) for k in range(n))
        res["J-unitary"] = _rss(dev["J-unitary"]) / (den + ninv)
        invertible = True
        cond = na * ninv
    return _profile_from_residuals(res, invertible, cond, tol)
