"""Complex linear algebra for small fixed dimensions (2, 4, 8).

Hermitian eigendecomposition, PSD matrix square roots, Kronecker products
and partial traces over qubit factors.  All functions are pure and operate
on plain complex ndarrays.
"""
from __future__ import annotations

import numpy as np

from .errors import (
    BadMaskError,
    DimMismatchError,
    DimOverflowError,
    NoConvergenceError,
    NotHermitianError,
    NotPSDError,
)

# Centralized tolerances; everything downstream imports these.
TOL_HERM = 1e-10        # max |m - m^dagger| accepted as Hermitian
TOL_PSD = 1e-9          # most negative eigenvalue still accepted as PSD
TOL_RECON = 1e-9        # eigendecomposition reconstruction / orthonormality
TOL_SQRT = 1e-8         # psd_sqrt(m) @ psd_sqrt(m) == m, entrywise
TOL_TRACE = 1e-12       # trace bookkeeping (partial traces, normalization)

# Eigenvalues below REL_EIG_ZERO * lambda_max are treated as exact zeros.
# Rank-deficient matrices are everywhere in this toolkit; without the cutoff,
# float noise of order eps on their null modes turns into sqrt(eps) ~ 1e-8
# errors in matrix roots and fidelities, which would blow the 1e-10 budgets.
REL_EIG_ZERO = 1e-13

_ALLOWED_DIMS = (2, 4, 8)


def as_matrix(m) -> np.ndarray:
    """Coerce to a square complex ndarray of dimension 2, 4 or 8."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimMismatchError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] not in _ALLOWED_DIMS:
        raise DimOverflowError(f"dimension {a.shape[0]} not in {_ALLOWED_DIMS}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def require_hermitian(m, tol: float = TOL_HERM) -> np.ndarray:
    """Check Hermiticity and return the exactly symmetrized matrix."""
    a = as_matrix(m)
    dev = float(np.max(np.abs(a - a.conj().T)))
    if dev > tol:
        raise NotHermitianError(f"max |m - m^dagger| = {dev:.3e} exceeds {tol:.1e}")
    return (a + a.conj().T) / 2


def require_psd(m, tol: float = TOL_PSD) -> np.ndarray:
    """Check positive semidefiniteness (within tol) of a Hermitian matrix."""
    a = require_hermitian(m)
    w = np.linalg.eigvalsh(a)
    if w[0] < -tol:
        raise NotPSDError(f"eigenvalue {w[0]:.3e} below -{tol:.1e}")
    return a


def eig_hermitian(m, tol: float = TOL_HERM) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues ascending and
    eigenvectors as orthonormal columns, so that V diag(w) V^dagger == m.
    """
    a = require_hermitian(m, tol)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    # Cheap at dim <= 8; audits every decomposition performed by the toolkit.
    assert float(np.max(np.abs((v * w) @ v.conj().T - a))) <= TOL_RECON
    assert float(np.max(np.abs(v.conj().T @ v - np.eye(a.shape[0])))) <= TOL_RECON
    return w, v


def clamp_spectrum(w: np.ndarray, tol: float = TOL_PSD) -> np.ndarray:
    """Clamp the spectrum of a nominally PSD matrix to exact non-negativity.

    Values in [-tol, 0) become 0; values below REL_EIG_ZERO * max(w) are
    zeroed as numerical null modes; anything below -tol raises NotPSDError.
    """
    w = np.asarray(w, dtype=float)
    if w.size and float(w.min()) < -tol:
        raise NotPSDError(f"eigenvalue {float(w.min()):.3e} below -{tol:.1e}")
    cut = REL_EIG_ZERO * max(float(w.max(initial=0.0)), 0.0)
    return np.where(w < cut, 0.0, w)


def psd_sqrt(m, tol: float = TOL_PSD) -> np.ndarray:
    """Principal square root of a PSD matrix via eigendecomposition."""
    w, v = eig_hermitian(m)
    w = clamp_spectrum(w, tol)
    root = (v * np.sqrt(w)) @ v.conj().T
    return (root + root.conj().T) / 2


def kron(a, b) -> np.ndarray:
    """Kronecker product; row index of the result is i_a * dim_b + i_b."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[0] * b.shape[0] > 8:
        raise DimOverflowError(
            f"kron of dims {a.shape[0]} x {b.shape[0]} exceeds dimension 8"
        )
    return np.kron(a, b)


def partial_trace(m, keep) -> np.ndarray:
    """Trace out every qubit factor not listed in ``keep``.

    ``m`` must act on a register of qubits (dimension 2**k).  ``keep`` lists
    the factor indices that survive (0 = leftmost), must be a non-empty
    subset without duplicates, and the surviving factors keep their order.
    """
    a = as_matrix(m)
    n = int(a.shape[0]).bit_length() - 1
    if 2**n != a.shape[0]:
        raise BadMaskError(f"dimension {a.shape[0]} is not a power of two")
    kept = [int(i) for i in keep]
    if not kept or len(set(kept)) != len(kept):
        raise BadMaskError(f"mask {kept} must be a non-empty set of factor indices")
    if any(i < 0 or i >= n for i in kept):
        raise BadMaskError(f"mask {kept} out of range for {n} factors")
    kept = sorted(kept)

    t = a.reshape((2,) * (2 * n))
    traced = [i for i in range(n) if i not in kept]
    for count, i in enumerate(traced):
        ax = i - count
        t = np.trace(t, axis1=ax, axis2=ax + (n - count))
    d = 2 ** len(kept)
    return t.reshape(d, d)
