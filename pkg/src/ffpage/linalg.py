"""Dense Hermitian linear algebra and Haar-random unitary sampling.

Everything in this module operates on plain ``numpy`` arrays: a Hermitian
matrix is any square complex array equal to its conjugate transpose within
tolerance, a unitary is any square complex array with ``U† U = I`` within
tolerance.  Matrices are dense; target sizes are a few hundred modes.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

HERMITICITY_ATOL = 1e-12
UNITARITY_ATOL = 1e-10


def as_square_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a complex square 2-d array, validating the shape."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValidationError(f"{name} must have dimension >= 1")
    return a


def require_hermitian(m, atol: float = HERMITICITY_ATOL, name: str = "matrix") -> np.ndarray:
    """Validate Hermiticity within ``atol`` (max entrywise deviation)."""
    a = as_square_matrix(m, name)
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > atol:
        raise ValidationError(f"{name} is not Hermitian: max |M - M†| = {dev:.3e} > {atol:.1e}")
    return a


def require_unitary(u, atol: float = UNITARITY_ATOL, name: str = "matrix") -> np.ndarray:
    """Validate unitarity within ``atol`` (Frobenius norm of ``U†U - I``)."""
    a = as_square_matrix(u, name)
    dev = np.linalg.norm(a.conj().T @ a - np.eye(a.shape[0]))
    if dev > atol:
        raise ValidationError(f"{name} is not unitary: ||U†U - I||_F = {dev:.3e} > {atol:.1e}")
    return a


def eigh(m, atol: float = 1e-10):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    m : array_like
        Hermitian matrix; Hermiticity is validated within ``atol`` and the
        input is symmetrized as ``(M + M†)/2`` before decomposition to absorb
        roundoff.

    Returns
    -------
    eigenvalues : ndarray
        Real, ascending.
    eigenvectors : ndarray
        Unitary matrix whose columns are the eigenvectors, so that
        ``M = V diag(w) V†``.
    """
    a = require_hermitian(m, atol=atol)
    a = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(a)
    return w, v


def conjugate(u, m) -> np.ndarray:
    """Return ``U M U†`` for unitary ``u`` and Hermitian ``m``."""
    uu = as_square_matrix(u, "unitary")
    mm = as_square_matrix(m, "matrix")
    if uu.shape != mm.shape:
        raise ValidationError(f"dimension mismatch: {uu.shape[0]} vs {mm.shape[0]}")
    return uu @ mm @ uu.conj().T


def split_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Independent random stream for one Monte-Carlo sample.

    Built on the counter-based Philox generator: stream ``index`` is the
    base stream jumped forward ``index`` times, so sample ``i`` is
    reproducible regardless of execution order or thread scheduling.
    """
    if index < 0:
        raise ValidationError("stream index must be non-negative")
    bg = np.random.Philox(key=seed & (2**64 - 1))
    if index:
        bg = bg.jumped(index)
    return np.random.Generator(bg)


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """i.i.d. standard complex normal entries."""
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def _qr_orthonormalize(z: np.ndarray) -> np.ndarray:
    """QR factor with the phase convention that makes it unique.

    Column ``j`` of Q is multiplied by the conjugate phase of ``R[j, j]``,
    which makes the factorization independent of LAPACK sign conventions and
    the result exactly Haar-distributed for Gaussian input.
    """
    q, r = np.linalg.qr(z)
    d = r.diagonal()
    return q * (d.conj() / np.abs(d))


def sample_haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a Haar-distributed unitary from U(dim).

    A ``dim x dim`` matrix with i.i.d. standard complex normal entries is
    orthonormalized by QR, with the triangular factor's diagonal phases
    absorbed into the columns (phase fixing).
    """
    if dim < 1:
        raise ValidationError("dim must be >= 1")
    return _qr_orthonormalize(_ginibre(rng, dim, dim))


def sample_haar_isometry(dim: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``cols`` orthonormal columns distributed as the first columns
    of a Haar unitary from U(dim).

    Cheaper than :func:`sample_haar_unitary` when only a slice of the
    unitary enters the result; the marginal distribution is identical.
    """
    if dim < 1 or cols < 1 or cols > dim:
        raise ValidationError(f"need 1 <= cols <= dim, got cols={cols}, dim={dim}")
    return _qr_orthonormalize(_ginibre(rng, dim, cols))
