"""Small dense complex linear algebra.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``;
matrices are stored row-major (C order). The helpers here validate shapes and
finiteness and translate numpy failures into package exceptions.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import DimensionError, NormalizationError, NumericalError

IDENTITY2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

for _m in (IDENTITY2, *PAULI):
    _m.setflags(write=False)


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex128 array (row-major, read-only copy)."""
    arr = np.array(m, dtype=np.complex128, order="C")
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericalError("matrix has non-finite entries")
    arr.setflags(write=False)
    return arr


def as_vector(v, *, normalized: bool = False, tol: float | None = None) -> np.ndarray:
    """Coerce ``v`` to a finite 1-D complex128 array.

    With ``normalized=True`` the squared norm must be 1 within ``tol``.
    """
    arr = np.array(v, dtype=np.complex128).reshape(-1)
    if arr.size < 1:
        raise DimensionError("empty state vector")
    if not np.all(np.isfinite(arr)):
        raise NumericalError("vector has non-finite entries")
    if normalized:
        tol = DEFAULT_TOLERANCES.normalization if tol is None else tol
        norm2 = float(np.vdot(arr, arr).real)
        if abs(norm2 - 1.0) > tol:
            raise NormalizationError(f"squared norm {norm2!r} differs from 1 by more than {tol}")
    arr.setflags(write=False)
    return arr


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry (i*rB + k, j*cB + l) is a[i, j] * b[k, l]."""
    a = as_matrix(a)
    b = as_matrix(b)
    ra, ca = a.shape
    rb, cb = b.shape
    out = (a[:, None, :, None] * b[None, :, None, :]).reshape(ra * rb, ca * cb)
    out.setflags(write=False)
    return out


def adjoint(m) -> np.ndarray:
    return as_matrix(m).conj().T


def inner(u, v) -> complex:
    """<u|v>, conjugate-linear in the first argument."""
    u = as_vector(u)
    v = as_vector(v)
    if u.shape != v.shape:
        raise DimensionError(f"inner product of vectors with dims {u.size} and {v.size}")
    return complex(np.vdot(u, v))


def expectation(m, v) -> complex:
    """Return <v|M|v>."""
    m = as_matrix(m)
    v = as_vector(v)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expectation needs a square matrix, got {m.shape}")
    if m.shape[1] != v.size:
        raise DimensionError(f"matrix of order {m.shape[0]} applied to vector of dim {v.size}")
    return complex(np.vdot(v, m @ v))


def is_hermitian(m, tol: float = 1e-14) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - m.conj().T)) <= tol)


def svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``m = u @ diag(s) @ vh`` with ``s`` non-negative and descending.

    Equal singular values keep the order LAPACK returned them in (stable sort).
    """
    m = as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    order = np.argsort(-s, kind="stable")
    u, s, vh = u[:, order], s[order], vh[order, :]
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(u)) and np.all(np.isfinite(vh))):
        raise NumericalError("SVD produced non-finite factors")
    return u, s, vh
