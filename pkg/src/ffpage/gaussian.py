"""Covariance-matrix representation of fermionic Gaussian states.

A state is represented by the Hermitian matrix ``C[j, j'] = <a_j† a_j'>``
with spectrum in [0, 1]; pure Gaussian states additionally satisfy
``C² = C``.  Subsystem reduction is a principal submatrix, and the
entanglement entropy is the binary entropy summed over the eigenvalues of
the reduced covariance matrix (in bits).
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .linalg import eigh, require_hermitian

# Eigenvalues may leave [0, 1] by this much before we refuse to clamp.
SPECTRUM_CLAMP_ATOL = 1e-8

LN2 = np.log(2.0)


def validate_covariance(c, name: str = "covariance", pure: bool = False) -> np.ndarray:
    """Check Hermiticity, the [0, 1] spectrum window, and optionally purity."""
    a = require_hermitian(c, name=name)
    w = np.linalg.eigvalsh((a + a.conj().T) / 2)
    if w.min() < -SPECTRUM_CLAMP_ATOL or w.max() > 1 + SPECTRUM_CLAMP_ATOL:
        raise ValidationError(
            f"{name} spectrum outside [0,1]: range [{w.min():.3e}, {w.max():.3e}]"
        )
    if pure:
        dev = np.linalg.norm(a @ a - a)
        if dev > 1e-9 * max(1.0, np.linalg.norm(a)):
            raise ValidationError(f"{name} is not a pure-state projector: ||C²-C|| = {dev:.3e}")
    return a


def validate_indices(indices, dim: int) -> np.ndarray:
    idx = np.asarray(indices, dtype=int)
    if idx.ndim != 1 or idx.size < 1:
        raise ValidationError("subsystem selection must be a non-empty 1-d index list")
    if np.any(idx < 0) or np.any(idx >= dim):
        raise ValidationError(f"subsystem index out of range for dimension {dim}")
    if np.any(np.diff(idx) <= 0):
        raise ValidationError("subsystem indices must be strictly increasing")
    return idx


def reduce_covariance(c, indices) -> np.ndarray:
    """Principal submatrix of ``c`` on the selected mode indices."""
    a = np.asarray(c, dtype=complex)
    idx = validate_indices(indices, a.shape[0])
    return a[np.ix_(idx, idx)]


def binary_entropy(p) -> np.ndarray:
    """Elementwise ``H(p) = -p log2 p - (1-p) log2 (1-p)`` with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    out = np.zeros_like(p)
    m = p > 0
    out[m] -= p[m] * np.log2(p[m])
    m = q > 0
    out[m] -= q[m] * np.log2(q[m])
    return out


def entropy_from_spectrum(lam) -> float:
    """Entropy in bits from covariance eigenvalues, clamping tiny excursions.

    Eigenvalues inside ``[-1e-8, 1+1e-8]`` are clamped to [0, 1]; anything
    further out fails loudly rather than being silently truncated.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.size and (lam.min() < -SPECTRUM_CLAMP_ATOL or lam.max() > 1 + SPECTRUM_CLAMP_ATOL):
        raise ValidationError(
            f"covariance eigenvalue outside clamp window: range [{lam.min():.3e}, {lam.max():.3e}]"
        )
    return float(binary_entropy(np.clip(lam, 0.0, 1.0)).sum())


def entropy(c_a) -> float:
    """Entanglement entropy, in bits, of the Gaussian state with reduced
    covariance matrix ``c_a``."""
    a = require_hermitian(c_a, name="covariance")
    return entropy_from_spectrum(np.linalg.eigvalsh((a + a.conj().T) / 2))


def hs_distance(c1, c2) -> float:
    """Hilbert-Schmidt distance ``sqrt(Tr (C1 - C2)²)``."""
    a = np.asarray(c1, dtype=complex)
    b = np.asarray(c2, dtype=complex)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def x_transform(c_a) -> np.ndarray:
    """The centered covariance ``X_A = 2 C_A - I``; spectrum in [-1, 1]."""
    a = np.asarray(c_a, dtype=complex)
    return 2 * a - np.eye(a.shape[0])


def entropy_series(c_a, n_max: int = 30) -> float:
    """Entropy via the Taylor expansion around the maximally mixed point.

    ``S = N_A - sum_{n=1}^{n_max} Tr X_A^{2n} / (2n (2n-1) ln 2)``.  Slowly
    convergent near extremal eigenvalues; used as an independent check of
    :func:`entropy`, never as the production path.
    """
    a = require_hermitian(c_a, name="covariance")
    x = np.linalg.eigvalsh(x_transform((a + a.conj().T) / 2))
    n = np.arange(1, n_max + 1)
    powers = x[None, :] ** (2 * n[:, None])
    terms = powers.sum(axis=1) / (2 * n * (2 * n - 1) * LN2)
    return float(a.shape[0] - terms.sum())
