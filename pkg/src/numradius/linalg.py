"""Dense complex matrix substrate: adjoints, rotated Hermitian parts,
a self-contained Hermitian eigensolver, spectral norm, rank-one builder.

Conventions
-----------
Matrices are numpy ``complex128`` arrays, square, with every entry
finite, and dimension 1 <= n <= 64. The inner product is
``<x, y> = sum_i x[i] * conj(y[i])`` (conjugate-linear in the second
slot), so the quadratic form ``<T x, x>`` is ``x* T x``.

All public functions treat matrices as immutable values: inputs are
never modified and returned arrays are marked read-only, so results can
be shared freely across threads.
"""

from __future__ import annotations

import math
import numbers

import numpy as np

from . import _eig

__all__ = [
    "MatrixError",
    "DimensionError",
    "NonHermitianError",
    "MAX_DIM",
    "as_matrix",
    "adjoint",
    "hermitian_part",
    "herm_eig_max",
    "spectral_norm",
    "rank_one",
]

MAX_DIM = 64


class MatrixError(ValueError):
    """Invalid matrix input."""


class DimensionError(MatrixError):
    """Input is not square, is empty, exceeds the supported size, or
    two operands have mismatched dimensions."""


class NonHermitianError(MatrixError):
    """A Hermitian matrix was required."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_matrix(obj) -> np.ndarray:
    """Validate and canonicalize a matrix-like object.

    Accepts anything ``np.asarray`` understands (nested lists, tuples,
    arrays). Returns a fresh read-only complex128 array.

    Raises
    ------
    DimensionError
        Not 2-D square, or the dimension is 0 or exceeds 64.
    MatrixError
        Any entry is NaN or infinite.
    """
    if isinstance(obj, numbers.Number):
        obj = [[obj]]
    A = np.array(obj, dtype=np.complex128, order="C", copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n == 0:
        raise DimensionError("empty matrix")
    if n > MAX_DIM:
        raise DimensionError(f"dimension {n} exceeds the supported maximum {MAX_DIM}")
    if not np.isfinite(A.view(np.float64)).all():
        raise MatrixError("matrix entries must be finite")
    return _freeze(A)


def _as_vector(obj, *, name: str = "vector") -> np.ndarray:
    v = np.array(obj, dtype=np.complex128, copy=True).reshape(-1)
    if v.size == 0 or v.size > MAX_DIM:
        raise DimensionError(f"{name} length {v.size} outside supported range")
    if not np.isfinite(v.view(np.float64)).all():
        raise MatrixError(f"{name} entries must be finite")
    return v


def adjoint(T) -> np.ndarray:
    """Conjugate transpose. An involution: adjoint(adjoint(T)) == T."""
    T = as_matrix(T)
    return _freeze(np.conj(T.T).copy(order="C"))


def hermitian_part(T, theta: float = 0.0) -> np.ndarray:
    """Rotated Hermitian part H_theta = (e^{i theta} T + e^{-i theta} T*) / 2.

    Satisfies <H_theta x, x> = Re(e^{i theta} <T x, x>) for every x.
    The angle may be any real number; it enters only through e^{i theta}.
    The construction is exactly Hermitian in floating point.
    """
    T = as_matrix(T)
    E = np.exp(1j * float(theta)) * T
    return _freeze(0.5 * (E + np.conj(E.T)))


def herm_eig_max(H) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and a unit eigenvector of a Hermitian matrix.

    Uses self-contained cyclic Jacobi sweeps (unitary 2x2 rotations),
    converged when the off-diagonal Frobenius mass falls below
    1e-14 times the Frobenius norm.

    Raises
    ------
    NonHermitianError
        If ``H`` deviates from its adjoint by more than 1e-12
        (relative to the Frobenius norm for matrices larger than unit scale).
    """
    H = as_matrix(H)
    scale = max(1.0, float(np.linalg.norm(H)))
    dev = float(np.abs(H - np.conj(H.T)).max())
    if dev > 1e-12 * scale:
        raise NonHermitianError(f"matrix deviates from Hermitian by {dev:.3e}")
    w, V = _eig.jacobi_eigh(H)
    vec = np.ascontiguousarray(V[:, -1])
    nrm = float(np.linalg.norm(vec))
    if nrm > 0:
        vec = vec / nrm
    return float(w[-1]), _freeze(vec)


def spectral_norm(T) -> float:
    """Largest singular value, via the top eigenvalue of T*T."""
    T = as_matrix(T)
    lam, _ = herm_eig_max(np.conj(T.T) @ T)
    return math.sqrt(max(lam, 0.0))


def rank_one(x, y) -> np.ndarray:
    """Rank-one matrix M = x (x) y with entries M[i][j] = x[i] * conj(y[j]).

    Acts as M z = <z, y> x.

    Raises
    ------
    DimensionError
        If the two vectors have different lengths.
    """
    x = _as_vector(x, name="x")
    y = _as_vector(y, name="y")
    if x.size != y.size:
        raise DimensionError(f"length mismatch: {x.size} vs {y.size}")
    return _freeze(np.outer(x, np.conj(y)))
