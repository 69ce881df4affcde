"""Structural matrix classification: Z/M-matrix tests and the two
termination certificates, plus the inverse-based diagnostic norms.

Certificate (3a) asks for A - I to be a nonsingular M-matrix.  Certificate
(3b) asks for A - I to be singular with a one-dimensional strictly
positive left kernel and for every nonzero nonnegative diagonal shift of
it to be an M-matrix; the universally quantified clause is decided here by
the sufficient "singular irreducible M-matrix" criterion (Z-matrix +
1-dimensional positive left kernel + irreducibility + M-matrix after a
small positive diagonal shift).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_square_matrix
from .linalg import (
    inverse,
    is_irreducible,
    lu_factor,
    null_space_left,
    spectral_norm,
    spectral_radius_nonneg,
)

# The condition-(3b) shift probe uses eps = EPS_SHIFT_REL * max|entry of A - I|.
EPS_SHIFT_REL = 1e-8


@dataclass(frozen=True)
class Tolerances:
    """The single knob set shared by all classification verdicts.

    zero_tol bounds what counts as a nonpositive off-diagonal entry,
    rank_tol is the relative LU pivot threshold for singularity and kernel
    rank, and entry_tol is the relative slack when testing inverse
    nonnegativity.
    """

    zero_tol: float = 1e-12
    rank_tol: float = 1e-10
    entry_tol: float = 1e-9


DEFAULT_TOLS = Tolerances()


@dataclass(frozen=True)
class ConditionReport:
    """Certificate verdicts with witnesses and inverse-based diagnostics.

    ``v`` is the strictly positive left null vector of A - I when (3b)
    holds (unit max-entry normalization).  ``norm_a_inv`` and
    ``rho_abs_a_inv`` are the spectral norm of A^-1 and the Perron root of
    |A^-1|; both are None when A itself is singular.  They are reported as
    diagnostics only and never decide a certificate.
    """

    is_z: bool
    satisfies_3a: bool
    satisfies_3b: bool
    v: np.ndarray | None
    norm_a_inv: float | None
    rho_abs_a_inv: float | None
    notes: tuple[str, ...]


def is_z_matrix(m, zero_tol: float = DEFAULT_TOLS.zero_tol) -> bool:
    """True iff every off-diagonal entry is <= zero_tol."""
    a = as_square_matrix(m)
    mask = ~np.eye(a.shape[0], dtype=bool)
    return bool(np.all(a[mask] <= zero_tol))


def is_m_matrix(m, tols: Tolerances = DEFAULT_TOLS) -> bool:
    """True iff m is a Z-matrix whose inverse exists and is entrywise
    nonnegative (up to entry_tol relative slack); singular inputs are False."""
    a = as_square_matrix(m)
    if not is_z_matrix(a, tols.zero_tol):
        return False
    if lu_factor(a, tols.rank_tol).singular:
        return False
    inv = inverse(a, tols.rank_tol)
    return bool(inv.min() >= -tols.entry_tol * np.abs(inv).max())


def check_condition_3a(a, tols: Tolerances = DEFAULT_TOLS) -> bool:
    """Certificate (3a): A - I is a nonsingular M-matrix."""
    a = as_square_matrix(a)
    return is_m_matrix(a - np.eye(a.shape[0]), tols)


def check_condition_3b(
    a, tols: Tolerances = DEFAULT_TOLS
) -> tuple[bool, np.ndarray | None]:
    """Certificate (3b) via the singular-irreducible-M-matrix criterion.

    Returns (True, v) with v the strictly positive left null vector of
    A - I when all four clauses hold, else (False, None).  The criterion is
    sufficient; reducible singular matrices are rejected even though the
    underlying condition might admit them.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    ai = a - np.eye(n)
    if not is_z_matrix(ai, tols.zero_tol):
        return False, None
    ns = null_space_left(ai, tols.rank_tol)
    if ns.dimension != 1 or ns.basis_vector is None:
        return False, None
    v = ns.basis_vector
    if not (v > 0).all():
        return False, None
    if not is_irreducible(ai, tols.zero_tol):
        return False, None
    scale = float(np.abs(ai).max())
    eps = EPS_SHIFT_REL * (scale if scale > 0.0 else 1.0)
    if not is_m_matrix(ai + eps * np.eye(n), tols):
        return False, None
    return True, v


def diagnostics(a, tols: Tolerances = DEFAULT_TOLS) -> ConditionReport:
    """Run all certificate checks and attach the inverse-based norms."""
    a = as_square_matrix(a)
    n = a.shape[0]
    ai = a - np.eye(n)
    notes: list[str] = []

    z = is_z_matrix(ai, tols.zero_tol)
    s3a = is_m_matrix(ai, tols)
    s3b, v = check_condition_3b(a, tols)

    if not z:
        notes.append("A - I is not a Z-matrix, so neither certificate can hold")
    if s3a:
        notes.append("A - I is a nonsingular M-matrix (certificate 3a)")
    if s3b:
        notes.append(
            "A - I is a singular irreducible M-matrix with positive left kernel "
            "(certificate 3b); this criterion is sufficient, not proven "
            "equivalent, and rejects reducible singular cases"
        )
    if z and not s3a and not s3b and lu_factor(ai, tols.rank_tol).singular:
        notes.append(
            "A - I is a singular Z-matrix but fails the irreducible-kernel probe"
        )

    norm_a_inv = None
    rho_abs_a_inv = None
    if lu_factor(a, tols.rank_tol).singular:
        notes.append("A is singular; inverse-based diagnostics unavailable")
    else:
        inv = inverse(a, tols.rank_tol)
        rn = spectral_norm(inv)
        rr = spectral_radius_nonneg(np.abs(inv))
        norm_a_inv = rn.value
        rho_abs_a_inv = rr.value
        if not rn.converged:
            notes.append(
                "spectral-norm power iteration hit its cap; ||A^-1|| is a lower estimate"
            )
        if not rr.converged:
            notes.append(
                "spectral-radius power iteration hit its cap; rho(|A^-1|) is an estimate"
            )

    return ConditionReport(z, s3a, s3b, v, norm_a_inv, rho_abs_a_inv, tuple(notes))
