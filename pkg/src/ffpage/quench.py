"""Quench dynamics of period-2 tight-binding chains.

Translation-invariant quadratic Hamiltonians whose hopping amplitudes
depend only on the parity of the departure site (a two-site unit cell),
with periodic boundary conditions.  Provides single-particle construction,
Heisenberg evolution of the covariance matrix, random late-time sampling
for long-time averages, and the conserved eigenmode occupation numbers of
the density-wave initial state, whose balance at 1/2 decides whether the
long-time entropy curve is maximal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .linalg import require_hermitian, split_rng

DEGENERACY_ATOL = 1e-9
BALANCE_ATOL = 1e-9

TIME_GRID_SCHEMES = ("uniform-window",)


@dataclass(frozen=True)
class HamiltonianSpec:
    """Period-2 hopping model on ``n_modes`` sites with periodic wrap.

    Each hopping is a triple ``(r, amp_even, amp_odd)`` adding
    ``amp * a_j† a_{j+r}`` + Hermitian conjugate for every site ``j``, with
    the amplitude chosen by the parity of ``j``.
    """

    n_modes: int
    hoppings: tuple = ()

    def __post_init__(self):
        if self.n_modes < 2 or self.n_modes % 2 != 0:
            raise ValidationError("n_modes must be even and >= 2")
        norm = []
        for hop in self.hoppings:
            if len(hop) != 3:
                raise ValidationError("each hopping must be (range, amp_even, amp_odd)")
            r, even, odd = hop
            r = int(r)
            if not 1 <= r < self.n_modes:
                raise ValidationError(f"hopping range must be in [1, n_modes), got {r}")
            norm.append((r, complex(even), complex(odd)))
        object.__setattr__(self, "hoppings", tuple(norm))

    @classmethod
    def minimal(cls, n_modes: int) -> "HamiltonianSpec":
        """Uniform nearest-neighbor chain with unit hopping."""
        return cls(n_modes, ((1, 1.0, 1.0),))


@dataclass(frozen=True)
class TimeGrid:
    """Random late-time sampling realizing the long-time average.

    The uniform-window scheme draws ``sample_count`` i.i.d. uniform times
    from ``[t_min, t_max]``; a fixed seed fixes the grid exactly.
    """

    t_min: float = 1e3
    t_max: float = 1e4
    sample_count: int = 1024
    seed: int = 0
    scheme: str = "uniform-window"

    def __post_init__(self):
        if self.scheme not in TIME_GRID_SCHEMES:
            raise ValidationError(
                f"unsupported time-grid scheme {self.scheme!r}; "
                f"supported: {TIME_GRID_SCHEMES}"
            )
        if not 0 <= self.t_min < self.t_max:
            raise ValidationError("need 0 <= t_min < t_max")
        if self.sample_count < 1:
            raise ValidationError("sample_count must be >= 1")


@dataclass
class OccupationProfile:
    """Occupations of the conserved eigenmodes for the density-wave quench.

    ``momenta`` holds the N/2 reduced-zone values ``2*pi*n/N``; the first
    eigenmode of each 2x2 momentum block is reported at ``k`` and its
    partner at ``k + pi``, so ``occupations`` has N entries satisfying
    ``n_{k+pi} = 1 - n_k``.
    """

    n_modes: int
    momenta: np.ndarray
    occupations: np.ndarray
    eta: np.ndarray = field(default=None)
    occupations_balanced: bool = field(default=None)

    def __post_init__(self):
        self.momenta = np.asarray(self.momenta, dtype=float)
        occ = np.asarray(self.occupations, dtype=float)
        if occ.shape != (self.n_modes,):
            raise ValidationError("need one occupation per mode")
        if occ.min() < -1e-12 or occ.max() > 1 + 1e-12:
            raise ValidationError("occupations must lie in [0, 1]")
        occ = np.clip(occ, 0.0, 1.0)
        half = self.n_modes // 2
        pair_dev = np.abs(occ[:half] + occ[half:] - 1.0).max()
        if pair_dev > 1e-9:
            raise ValidationError(
                f"half-filling pairing n_k + n_(k+pi) = 1 violated by {pair_dev:.3e}"
            )
        self.occupations = occ
        if self.eta is None:
            self.eta = np.sqrt(occ * (1.0 - occ))
        if self.occupations_balanced is None:
            self.occupations_balanced = bool(np.abs(occ - 0.5).max() < BALANCE_ATOL)

    @classmethod
    def balanced(cls, n_modes: int) -> "OccupationProfile":
        """The all-1/2 profile shared by every balanced-class model."""
        half = n_modes // 2
        return cls(
            n_modes=n_modes,
            momenta=2 * np.pi * np.arange(half) / n_modes,
            occupations=np.full(n_modes, 0.5),
        )


def build_single_particle(spec: HamiltonianSpec) -> np.ndarray:
    """N x N Hermitian single-particle matrix of the hopping model."""
    n = spec.n_modes
    m = np.zeros((n, n), dtype=complex)
    for r, even, odd in spec.hoppings:
        for j in range(n):
            m[j, (j + r) % n] += even if j % 2 == 0 else odd
    h = m + m.conj().T
    return require_hermitian(h, name="single-particle matrix")


def density_wave_covariance(n_modes: int) -> np.ndarray:
    """Covariance matrix of the even-sublattice product state."""
    if n_modes % 2 != 0 or n_modes < 2:
        raise ValidationError("density wave needs an even mode count >= 2")
    return np.diag((np.arange(n_modes) % 2 == 0).astype(complex))


class Propagator:
    """Cached eigendecomposition of ``h`` for repeated time evolution.

    Evolution at any time reuses the one-off diagonalization; instances are
    immutable after construction and safe to share across threads.
    """

    def __init__(self, h):
        hm = require_hermitian(h, name="single-particle matrix")
        self.dim = hm.shape[0]
        self.energies, self.modes = np.linalg.eigh((hm + hm.conj().T) / 2)

    def unitary(self, t: float) -> np.ndarray:
        """``V(t) = exp(+i h t)``."""
        phases = np.exp(1j * self.energies * t)
        return (self.modes * phases) @ self.modes.conj().T

    def evolve(self, c0: np.ndarray, t: float) -> np.ndarray:
        """``C(t) = V(t) C0 V(t)†``."""
        v = self.unitary(t)
        return v @ c0 @ v.conj().T


def evolve_covariance(h, c0, t: float) -> np.ndarray:
    """Heisenberg-evolved covariance matrix ``exp(+iht) C0 exp(-iht)``.

    The sign convention is pinned by the momentum-space check: for the
    uniform nearest-neighbor chain quenched from the density wave, the
    Fourier-transformed correlator couples ``k`` only to ``k + pi`` with
    phase ``t (E_k - E_{k+pi})`` where ``E_k = 2 cos k``.
    """
    c = np.asarray(c0, dtype=complex)
    prop = Propagator(h)
    if c.shape != (prop.dim, prop.dim):
        raise ValidationError(
            f"dimension mismatch: h is {prop.dim}x{prop.dim}, C0 has shape {c.shape}"
        )
    return prop.evolve(c, t)


def sample_times(grid: TimeGrid) -> np.ndarray:
    """The random time vector of a grid; identical across calls."""
    rng = split_rng(grid.seed)
    return rng.uniform(grid.t_min, grid.t_max, size=grid.sample_count)


def _momentum_block_basis(n_modes: int, k: float) -> np.ndarray:
    """N x 2 isometry of the two sublattice plane waves at momentum ``k``.

    Column 0 lives on even sites, column 1 on odd sites, each a normalized
    plane wave ``e^{ikj}`` restricted to its sublattice.
    """
    j = np.arange(n_modes)
    wave = np.exp(1j * k * j) / np.sqrt(n_modes / 2)
    w = np.zeros((n_modes, 2), dtype=complex)
    even = j % 2 == 0
    w[even, 0] = wave[even]
    w[~even, 1] = wave[~even]
    return w


def conserved_occupations(spec: HamiltonianSpec) -> OccupationProfile:
    """Occupations of the conserved eigenmodes in the density-wave quench.

    For each reduced-zone momentum the Hamiltonian closes on the two
    sublattice plane waves; its 2x2 block is diagonalized and the initial
    correlator is projected onto each eigenmode.  The lower-energy mode is
    reported at ``k`` and the other at ``k + pi``.  When the block is
    degenerate (splitting below 1e-9) the eigenvector basis is ambiguous,
    so the two occupations are taken as the eigenvalues of the projected
    correlator instead.
    """
    n = spec.n_modes
    h = build_single_particle(spec)
    c0 = density_wave_covariance(n)
    half = n // 2
    momenta = 2 * np.pi * np.arange(half) / n
    occ_low = np.empty(half)
    occ_high = np.empty(half)
    for i, k in enumerate(momenta):
        w = _momentum_block_basis(n, k)
        h_k = w.conj().T @ h @ w
        leak = np.linalg.norm(h @ w - w @ h_k)
        if leak > 1e-9:
            raise ValidationError(
                f"momentum block at k={k:.6f} not closed (leakage {leak:.3e}); "
                "spec is not period-2 translation invariant"
            )
        c_k = w.conj().T @ c0 @ w
        energies, vecs = np.linalg.eigh((h_k + h_k.conj().T) / 2)
        if energies[1] - energies[0] < DEGENERACY_ATOL:
            vals = np.linalg.eigvalsh((c_k + c_k.conj().T) / 2)
            occ_low[i], occ_high[i] = vals[0], vals[1]
        else:
            occ_low[i] = (vecs[:, 0].conj() @ c_k @ vecs[:, 0]).real
            occ_high[i] = (vecs[:, 1].conj() @ c_k @ vecs[:, 1]).real
    return OccupationProfile(
        n_modes=n,
        momenta=momenta,
        occupations=np.concatenate([occ_low, occ_high]),
    )
