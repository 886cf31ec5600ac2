"""Brute-force many-body oracle in the full 2^N Fock space.

Ground truth for the covariance-matrix machinery at small system size.
Basis states are occupation bitstrings: bit ``j`` of the integer index is
the occupation of mode ``j``.  Operators follow the standard ordering
convention in which ``a_j†`` acting on a bitstring picks up
``(-1)^(number of occupied modes with index < j)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .gaussian import validate_indices
from .linalg import require_hermitian

MAX_MODES = 12


@dataclass
class FockState:
    """State vector over occupation bitstrings of ``n_modes`` modes."""

    n_modes: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_modes <= MAX_MODES:
            raise ValidationError(f"mode count must be in [1, {MAX_MODES}]")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.n_modes,):
            raise ValidationError("amplitude vector length must be 2^n_modes")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-10:
            raise ValidationError(f"state not normalized: ||psi|| = {norm!r}")


def _sign_below(state: int, mode: int) -> int:
    """(-1)^(number of occupied modes below ``mode``)."""
    return -1 if bin(state & ((1 << mode) - 1)).count("1") % 2 else 1


def build_density_wave(n_modes: int) -> FockState:
    """Product state occupying the even sublattice (modes 0, 2, 4, ...)."""
    if n_modes % 2 != 0:
        raise ValidationError("density wave needs an even mode count")
    if not 2 <= n_modes <= MAX_MODES:
        raise ValidationError(f"mode count must be in [2, {MAX_MODES}]")
    amps = np.zeros(2**n_modes, dtype=complex)
    occupied = sum(1 << j for j in range(0, n_modes, 2))
    amps[occupied] = 1.0
    return FockState(n_modes, amps)


def _hop_terms(n_modes: int, j: int, k: int):
    """Matrix elements of ``a_j† a_k`` as (target, source, sign) triples."""
    for s in range(2**n_modes):
        if not (s >> k) & 1:
            continue
        sgn = _sign_below(s, k)
        s1 = s & ~(1 << k)
        if (s1 >> j) & 1:
            continue
        sgn *= _sign_below(s1, j)
        yield s1 | (1 << j), s, sgn


def build_many_body(h) -> np.ndarray:
    """Dense 2^N x 2^N matrix of ``H = sum_{jk} h[j,k] a_j† a_k``."""
    hm = require_hermitian(h, name="single-particle matrix")
    n = hm.shape[0]
    if n > MAX_MODES:
        raise ValidationError(f"refusing N = {n} > {MAX_MODES} modes")
    big = np.zeros((2**n, 2**n), dtype=complex)
    for j in range(n):
        for k in range(n):
            if hm[j, k] == 0:
                continue
            for t, s, sgn in _hop_terms(n, j, k):
                big[t, s] += sgn * hm[j, k]
    return big


def evolve_fock(psi: FockState, h, t: float) -> FockState:
    """Apply ``exp(-i H t)`` with ``H`` the quadratic Hamiltonian for ``h``.

    The many-body matrix is built once per call and exponentiated via its
    eigendecomposition, restricted to the particle-number sectors the state
    actually occupies (the Hamiltonian conserves particle number).
    """
    hm = require_hermitian(h, name="single-particle matrix")
    if hm.shape[0] != psi.n_modes:
        raise ValidationError("single-particle matrix size must match the state")
    big = build_many_body(hm)
    dim = 2**psi.n_modes
    pops = np.array([bin(s).count("1") for s in range(dim)])
    out = np.zeros(dim, dtype=complex)
    for sector in range(psi.n_modes + 1):
        sel = np.flatnonzero(pops == sector)
        vec = psi.amplitudes[sel]
        if np.linalg.norm(vec) < 1e-15:
            continue
        w, v = np.linalg.eigh(big[np.ix_(sel, sel)])
        out[sel] = v @ (np.exp(-1j * w * t) * (v.conj().T @ vec))
    return FockState(psi.n_modes, out)


def _prefix_permutation(n_modes: int, indices: np.ndarray):
    """Mode relabeling that moves ``indices`` to the front, with the
    fermionic sign of each basis state under the reordering."""
    rest = [j for j in range(n_modes) if j not in set(indices.tolist())]
    new_of_old = np.empty(n_modes, dtype=int)
    for pos, j in enumerate(list(indices) + rest):
        new_of_old[j] = pos
    dim = 2**n_modes
    perm = np.empty(dim, dtype=int)
    sign = np.empty(dim, dtype=int)
    for s in range(dim):
        occ = [j for j in range(n_modes) if (s >> j) & 1]
        imgs = [new_of_old[j] for j in occ]
        # parity of the permutation sorting the occupied images
        swaps = sum(1 for a in range(len(imgs)) for b in range(a + 1, len(imgs)) if imgs[a] > imgs[b])
        perm[s] = sum(1 << p for p in imgs)
        sign[s] = -1 if swaps % 2 else 1
    return perm, sign


def reduced_density_matrix(psi: FockState, indices) -> np.ndarray:
    """Partial trace over the complement of the selected modes."""
    idx = validate_indices(indices, psi.n_modes)
    perm, sign = _prefix_permutation(psi.n_modes, idx)
    reordered = np.zeros_like(psi.amplitudes)
    reordered[perm] = sign * psi.amplitudes
    n_a = idx.size
    # bit i of the reordered index is mode i of the new ordering, so the
    # subsystem bits are the fastest-varying axis
    mat = reordered.reshape(2 ** (psi.n_modes - n_a), 2**n_a).T
    return mat @ mat.conj().T


def fock_entropy(psi: FockState, indices) -> float:
    """Von Neumann entropy, in bits, of the reduced state on ``indices``."""
    rho = reduced_density_matrix(psi, indices)
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-14]
    return float(-(w * np.log2(w)).sum())


def covariance_from_fock(psi: FockState) -> np.ndarray:
    """Covariance matrix ``C[j, j'] = <a_j† a_j'>`` of a Fock state."""
    n = psi.n_modes
    c = np.zeros((n, n), dtype=complex)
    amps = psi.amplitudes
    for j in range(n):
        for k in range(n):
            acc = 0.0 + 0.0j
            for t, s, sgn in _hop_terms(n, j, k):
                acc += sgn * np.conj(amps[t]) * amps[s]
            c[j, k] = acc
    return c


def four_point(psi: FockState, i: int, j: int, k: int, l: int) -> complex:
    """Expectation value ``<a_i† a_j† a_k a_l>`` computed directly."""
    n = psi.n_modes
    amps = psi.amplitudes
    acc = 0.0 + 0.0j
    for s in range(2**n):
        if amps[s] == 0:
            continue
        state, sgn, dead = s, 1, False
        for mode, create in ((l, False), (k, False), (j, True), (i, True)):
            occupied = (state >> mode) & 1
            if create == bool(occupied):
                dead = True
                break
            sgn *= _sign_below(state, mode)
            state ^= 1 << mode
        if not dead:
            acc += sgn * np.conj(amps[state]) * amps[s]
    return acc
