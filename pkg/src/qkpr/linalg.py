"""Dense complex matrix helpers.

Everything in this package is at most 27x27, so plain ``numpy`` arrays
are the carrier type. These functions add the validation the rest of the
package relies on (square, finite, matching dimensions).
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a square, finite complex128 array or raise ValueError."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry (i*db + k, j*db + l) is a[i, j] * b[k, l]."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*mats) -> np.ndarray:
    out = as_matrix(mats[0])
    for m in mats[1:]:
        out = np.kron(out, as_matrix(m))
    return out


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def is_unitary(a, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    dev = a.conj().T @ a - np.eye(a.shape[0])
    return bool(np.max(np.abs(dev)) <= tol)


def is_hermitian_psd(a, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``a`` is Hermitian within ``tol`` and its Hermitian part has
    no eigenvalue below ``-tol``."""
    a = as_matrix(a)
    if np.max(np.abs(a - a.conj().T)) > tol:
        return False
    herm = 0.5 * (a + a.conj().T)
    return bool(np.linalg.eigvalsh(herm)[0] >= -tol)
