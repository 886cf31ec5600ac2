"""Page-curve assembly and analytic predictions.

Long-time-averaged entanglement curves of quench dynamics, fourth-order
entropy-density series for the random-ensemble and dynamical cases, the
closed-form time-averaged moments of the centered reduced covariance, the
occupation-resolved generalization of the series, and the quasiparticle
lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._parallel import indexed_map
from .errors import ValidationError
from .gaussian import LN2, binary_entropy, entropy_from_spectrum
from .quench import (
    HamiltonianSpec,
    OccupationProfile,
    Propagator,
    TimeGrid,
    build_single_particle,
    sample_times,
)

CURVE_SOURCES = (
    "rfg-montecarlo",
    "dynamical",
    "series-rfg",
    "series-dyn",
    "series-atypical",
    "quasiparticle",
    "interacting-reference",
)


@dataclass(frozen=True)
class PagePoint:
    subsystem_size: int
    mean: float
    stderr: float


@dataclass
class PageCurve:
    """Mean subsystem entropy (bits) against subsystem size."""

    n_modes: int
    points: list
    source: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.source not in CURVE_SOURCES:
            raise ValidationError(f"unknown curve source {self.source!r}")
        sizes = [p.subsystem_size for p in self.points]
        if sizes != sorted(sizes) or len(set(sizes)) != len(sizes):
            raise ValidationError("curve points must be sorted by unique subsystem size")
        for p in self.points:
            if not -1e-9 <= p.mean <= p.subsystem_size + 1e-9:
                raise ValidationError(
                    f"entropy {p.mean!r} outside [0, N_A] at N_A = {p.subsystem_size}"
                )

    @property
    def subsystem_sizes(self) -> np.ndarray:
        return np.array([p.subsystem_size for p in self.points])

    @property
    def means(self) -> np.ndarray:
        return np.array([p.mean for p in self.points])

    @property
    def stderrs(self) -> np.ndarray:
        return np.array([p.stderr for p in self.points])


@dataclass
class MomentSet:
    """Time-averaged ``Tr X_A^{2n}``, n = 1, 2, 3, at one subsystem size."""

    n_modes: int
    subsystem_size: int
    x2: float
    x4: float
    x6: float

    def __post_init__(self):
        # spectrum of X lies in [-1, 1], so even powers are monotone
        if not self.x6 <= self.x4 + 1e-9 or not self.x4 <= self.x2 + 1e-9:
            raise ValidationError("moments must satisfy Tr X^6 <= Tr X^4 <= Tr X^2")


def _evolved_block_factory(spec: HamiltonianSpec, grid: TimeGrid, widest: int):
    """Callable mapping a time index to the evolved widest reduced block.

    The initial state is the density wave; since its covariance projects
    onto the even sublattice, the reduced block at time t is
    ``V[:na, even] V[:na, even]†`` with ``V = exp(+iht)``.
    """
    prop = Propagator(build_single_particle(spec))
    times = sample_times(grid)
    even = np.arange(0, spec.n_modes, 2)

    def block(i: int) -> np.ndarray:
        v = prop.unitary(times[i])[:widest, :][:, even]
        return v @ v.conj().T

    return block


def dynamical_page_curve(
    spec: HamiltonianSpec, grid: TimeGrid, subsystem_sizes, threads: int = 0
) -> PageCurve:
    """Long-time-averaged Page curve of the density-wave quench.

    For each subsystem size, the mean and standard error of the
    entanglement entropy over the sampled times.
    """
    sizes = sorted(set(int(s) for s in subsystem_sizes))
    if not sizes or sizes[0] < 1 or sizes[-1] > spec.n_modes:
        raise ValidationError("subsystem sizes must lie in [1, n_modes]")
    block = _evolved_block_factory(spec, grid, sizes[-1])

    def one(i):
        c = block(i)
        return [entropy_from_spectrum(np.linalg.eigvalsh(c[:na, :na])) for na in sizes]

    ent = np.array(indexed_map(one, grid.sample_count, threads))
    points = []
    for j, na in enumerate(sizes):
        col = ent[:, j]
        var = float(col.var(ddof=1)) if grid.sample_count > 1 else 0.0
        points.append(PagePoint(na, float(col.mean()), float(np.sqrt(var / grid.sample_count))))
    return PageCurve(
        n_modes=spec.n_modes,
        points=points,
        source="dynamical",
        metadata={
            "hoppings": [list(h) for h in spec.hoppings],
            "t_min": grid.t_min,
            "t_max": grid.t_max,
            "sample_count": grid.sample_count,
            "seed": grid.seed,
        },
    )


def time_averaged_moments(
    spec: HamiltonianSpec,
    grid: TimeGrid,
    subsystem_size: int,
    powers=(2, 3, 4, 6),
    threads: int = 0,
) -> dict:
    """Time averages of ``Tr X_A^p`` with ``X_A = 2 C_A(t) - I``."""
    if not 1 <= subsystem_size <= spec.n_modes:
        raise ValidationError("subsystem size out of range")
    powers = tuple(int(p) for p in powers)
    if any(p < 1 for p in powers):
        raise ValidationError("powers must be positive integers")
    block = _evolved_block_factory(spec, grid, subsystem_size)

    def one(i):
        x = np.linalg.eigvalsh(block(i)) * 2 - 1
        return [float((x**p).sum()) for p in powers]

    vals = np.array(indexed_map(one, grid.sample_count, threads))
    return {p: float(vals[:, j].mean()) for j, p in enumerate(powers)}


def series_dyn(f: float) -> float:
    """Long-time-averaged entropy density of balanced quenches at fraction f.

    Fourth-order series ``f - (f²/2 + f³/6 + f⁴/10) / ln 2``; truncation
    error is O(f⁵).  Differs from the random-ensemble series only in the
    quartic coefficient: the gap is exactly ``f⁴ / (60 ln 2)``.
    """
    if not 0.0 <= f <= 0.5:
        raise ValidationError("fraction must lie in [0, 1/2]")
    return f - (f**2 / 2 + f**3 / 6 + f**4 / 10) / LN2


def moment_prediction(n: int, n_modes: int, subsystem_size: int, model_term: bool = False) -> float:
    """Closed-form time-averaged ``Tr X_A^{2n}`` for balanced quenches.

    Thermodynamic-limit diagrammatic results:

    - n=1: ``N_A²/N``; with ``model_term`` the O(1/N) stationary-momentum
      contribution ``N_A/N`` of the reflection-symmetric minimal chain is
      added.
    - n=2: ``2 N_A³/N² - N_A⁴/N³``.
    - n=3: ``(11/2) N_A⁴/N³ - 8 N_A⁵/N⁴ + 4 N_A⁶/N⁵``, valid only for
      subsystem fraction f <= 1/2; at f = 1 the pure-state value ``N`` is
      returned; intermediate fractions are refused because no closed form
      is available there.
    """
    nn, na = int(n_modes), int(subsystem_size)
    if not 1 <= na <= nn:
        raise ValidationError("subsystem size out of range")
    if n == 1:
        return na**2 / nn + (na / nn if model_term else 0.0)
    if model_term:
        raise ValidationError("the finite-size model term is only defined for n = 1")
    if n == 2:
        return 2 * na**3 / nn**2 - na**4 / nn**3
    if n == 3:
        if na == nn:
            return float(nn)
        if 2 * na > nn:
            raise ValidationError(
                "sixth-moment closed form is only available for f <= 1/2 or f = 1"
            )
        return 5.5 * na**4 / nn**3 - 8 * na**5 / nn**4 + 4 * na**6 / nn**5
    raise ValidationError(f"moment order must be 1, 2 or 3, got {n!r}")


def series_atypical(profile: OccupationProfile, n_modes: int, subsystem_size: int) -> float:
    """Occupation-resolved fourth-order entropy prediction, in bits.

    Generalizes the balanced series to arbitrary conserved occupations
    ``n_k`` with ``eta_k = sqrt(n_k (1 - n_k))``:

    ``S ln2 = N_A ln2 + (3/4) N_A
              - (N_A/N)  Σ_k (4 n² - (8/3) n³ + (4/3) n⁴)
              - (N_A/N)² Σ_k (4 η² - 8 n η² + (16/3) n² η² + (8/3) η⁴)
              - (N_A/N)³ (8/3) Σ_k η⁴ + (N_A/N)⁴ (4/3) Σ_k η⁴``

    For all ``n_k = 1/2`` this collapses exactly to
    ``N_A - (Tr X̄²)/(2 ln2) - (Tr X̄⁴)/(12 ln2)`` with the closed-form
    moments.  Truncated at the fourth moment; higher moments also
    contribute at O(f), so the prediction is truncation-limited.
    """
    nn, na = int(n_modes), int(subsystem_size)
    if profile.n_modes != nn:
        raise ValidationError("profile mode count must match n_modes")
    if not 1 <= na <= nn // 2:
        raise ValidationError("subsystem size must lie in [1, N/2]")
    n_k = profile.occupations
    eta2 = n_k * (1.0 - n_k)
    f = na / nn
    s1 = float((4 * n_k**2 - (8 / 3) * n_k**3 + (4 / 3) * n_k**4).sum())
    s2 = float((4 * eta2 - 8 * n_k * eta2 + (16 / 3) * n_k**2 * eta2 + (8 / 3) * eta2**2).sum())
    s4 = float((eta2**2).sum())
    s_ln2 = (
        na * LN2
        + 0.75 * na
        - f * s1
        - f**2 * s2
        - f**3 * (8 / 3) * s4
        + f**4 * (4 / 3) * s4
    )
    return s_ln2 / LN2


def quasiparticle_entropy(profile: OccupationProfile, n_modes: int, subsystem_size: int) -> float:
    """Quasiparticle-pair lower bound on the long-time-averaged entropy.

    Each conserved mode contributes the binary entropy of its occupation,
    weighted by the probability ``f (1 - f)``-style boundary factor:
    ``S_qp = (N_A/N - N_A²/N²) Σ_k H(n_k)``.  For all ``n_k = 1/2`` this is
    ``N_A - N_A²/N``.
    """
    nn, na = int(n_modes), int(subsystem_size)
    if profile.n_modes != nn:
        raise ValidationError("profile mode count must match n_modes")
    if not 0 <= na <= nn:
        raise ValidationError("subsystem size out of range")
    f = na / nn
    return (f - f**2) * float(binary_entropy(profile.occupations).sum())


def interacting_reference(f: float) -> float:
    """Saturated thermodynamic-limit entropy density ``min(f, 1 - f)``.

    The comparison line for generic (non-Gaussian) late-time states, which
    reach the maximal density on both sides of half system size.
    """
    if not 0.0 <= f <= 1.0:
        raise ValidationError("fraction must lie in [0, 1]")
    return min(f, 1.0 - f)


def series_curve(kind: str, n_modes: int, subsystem_sizes) -> PageCurve:
    """Analytic curve of the chosen series evaluated on a size grid."""
    from .rfg import series_rfg

    sizes = sorted(set(int(s) for s in subsystem_sizes))
    densities = {
        "series-rfg": series_rfg,
        "series-dyn": series_dyn,
        "interacting-reference": interacting_reference,
    }
    if kind not in densities:
        raise ValidationError(f"unknown series kind {kind!r}")
    fn = densities[kind]
    points = [PagePoint(na, fn(na / n_modes) * n_modes, 0.0) for na in sizes]
    return PageCurve(n_modes=n_modes, points=points, source=kind)
