"""The random fermionic Gaussian (RFG) ensemble.

Covariance matrices ``C = U C0 U†`` with ``U`` Haar over the unitary group
and ``C0`` a rank-m projector (m particles in N modes).  Provides sampling,
the Monte-Carlo Page curve, closed-form low moments of reduced covariance
matrices, empirical tests of the measure-concentration bounds, and the
entropy-variance scaling fit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._parallel import indexed_map
from .errors import ValidationError
from .gaussian import LN2, entropy_from_spectrum
from .linalg import sample_haar_isometry, sample_haar_unitary, split_rng

BOUND_KINDS = (
    "covariance-typicality",
    "covariance-atypicality",
    "entropy-typicality",
    "entropy-atypicality",
)


@dataclass(frozen=True)
class EnsembleConfig:
    """Sampling parameters for the half-filling (or general-m) ensemble."""

    n_modes: int
    particles: int
    sample_count: int
    seed: int

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValidationError("n_modes must be >= 1")
        if not 0 <= self.particles <= self.n_modes:
            raise ValidationError("particle number must be in [0, n_modes]")
        if self.sample_count < 1:
            raise ValidationError("sample_count must be >= 1")

    @classmethod
    def half_filling(cls, n_modes: int, sample_count: int, seed: int) -> "EnsembleConfig":
        return cls(n_modes, n_modes // 2, sample_count, seed)


@dataclass
class EnsembleStats:
    mean_entropy: float
    variance_entropy: float
    stderr: float
    sample_count: int


@dataclass
class ConcentrationReport:
    """Empirical tail frequencies against one analytic concentration bound."""

    bound_kind: str
    n_modes: int
    subsystem_size: int
    sample_count: int
    epsilon_grid: np.ndarray
    empirical_tail: np.ndarray
    analytic_bound: np.ndarray
    binomial_stderr: np.ndarray
    flagged: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.flagged is None:
            self.flagged = self.empirical_tail > self.analytic_bound + 3 * self.binomial_stderr

    @property
    def violations(self) -> int:
        return int(self.flagged.sum())


def sample_covariance(cfg: EnsembleConfig, sample_index: int) -> np.ndarray:
    """Full N x N covariance matrix for one ensemble member.

    ``C0`` is the diagonal projector with ``particles`` leading ones, so the
    result is ``U[:, :m] U[:, :m]†`` for a fresh Haar unitary drawn from the
    split stream of ``sample_index``.
    """
    rng = split_rng(cfg.seed, sample_index)
    u = sample_haar_unitary(cfg.n_modes, rng)
    cols = u[:, : cfg.particles]
    return cols @ cols.conj().T


def sample_reduced(cfg: EnsembleConfig, subsystem_size: int, sample_index: int) -> np.ndarray:
    """Reduced covariance matrix on the first ``subsystem_size`` modes.

    Uses a Haar isometry instead of a full unitary: the leading N_A x N_A
    block of ``U C0 U†`` only involves the first N_A rows of ``U``, whose
    adjoint is a Haar-distributed N x N_A isometry ``W``, giving
    ``C_A = W[:m]† W[:m]``.  Distribution identical to reducing
    :func:`sample_covariance`, cost much lower for small subsystems.
    """
    if not 1 <= subsystem_size <= cfg.n_modes:
        raise ValidationError("subsystem size out of range")
    rng = split_rng(cfg.seed, sample_index)
    w = sample_haar_isometry(cfg.n_modes, subsystem_size, rng)
    top = w[: cfg.particles, :]
    return top.conj().T @ top


def moment_alpha_beta(n_modes: int, particles: int):
    """Coefficients of ``<Tr C_A²> = alpha N_A² + beta N_A``.

    Exact Haar second-moment result for the rank-m ensemble:
    ``alpha = (N m - m²) / (N (N² - 1))`` and
    ``beta = (N m² - m) / (N (N² - 1))``.
    """
    n, m = n_modes, particles
    if n < 2:
        raise ValidationError("need at least two modes")
    denom = n * (n**2 - 1)
    return (n * m - m**2) / denom, (n * m**2 - m) / denom


def series_rfg(f: float) -> float:
    """Ensemble-averaged entropy density at subsystem fraction ``f``.

    Fourth-order series ``f - (f²/2 + f³/6 + f⁴/12) / ln 2``; truncation
    error is O(f⁵).
    """
    if not 0.0 <= f <= 0.5:
        raise ValidationError("fraction must lie in [0, 1/2]")
    return f - (f**2 / 2 + f**3 / 6 + f**4 / 12) / LN2


def _entropy_samples(cfg: EnsembleConfig, sizes, threads: int = 0) -> np.ndarray:
    """Entropy of every requested prefix subsystem for every sample.

    Samples one isometry of width ``max(sizes)`` per ensemble member; the
    smaller subsystems are its leading blocks.
    """
    sizes = list(sizes)
    widest = max(sizes)

    def one(i):
        c = sample_reduced(cfg, widest, i)
        return [
            entropy_from_spectrum(np.linalg.eigvalsh(c[:na, :na])) for na in sizes
        ]

    return np.array(indexed_map(one, cfg.sample_count, threads))


def rfg_page_curve(cfg: EnsembleConfig, subsystem_sizes, threads: int = 0):
    """Monte-Carlo Page curve: per-size mean entropy with uncertainty.

    Returns a :class:`ffpage.curves.PageCurve` with one point per requested
    subsystem size; deterministic for a fixed seed.
    """
    from .curves import PageCurve, PagePoint

    sizes = sorted(set(int(s) for s in subsystem_sizes))
    if not sizes or sizes[0] < 1 or sizes[-1] > cfg.n_modes:
        raise ValidationError("subsystem sizes must lie in [1, n_modes]")
    ent = _entropy_samples(cfg, sizes, threads)
    points = []
    for j, na in enumerate(sizes):
        col = ent[:, j]
        var = float(col.var(ddof=1)) if cfg.sample_count > 1 else 0.0
        points.append(PagePoint(na, float(col.mean()), float(np.sqrt(var / cfg.sample_count))))
    return PageCurve(
        n_modes=cfg.n_modes,
        points=points,
        source="rfg-montecarlo",
        metadata={
            "particles": cfg.particles,
            "sample_count": cfg.sample_count,
            "seed": cfg.seed,
        },
    )


def analytic_bound(bound_kind: str, n_modes: int, subsystem_size: int, eps: float) -> float:
    """Right-hand side of the chosen concentration inequality at ``eps``.

    All four bounds have the form ``2 exp(-...)`` and may exceed 1, in which
    case they are vacuous.  Half filling is assumed.
    """
    n, na = n_modes, subsystem_size
    if bound_kind == "covariance-typicality":
        eta_p = 12 / n
        return 2 * np.exp(-(eps**2) / eta_p)
    if bound_kind == "covariance-atypicality":
        eta_ap = 12 * na / n
        return 2 * np.exp(-(eps**2) / eta_ap)
    if bound_kind == "entropy-typicality":
        xi = np.sqrt(2 * na**2 / (n - 1))
        xi_p = 192 / n
        if eps <= xi**2:
            raise ValidationError(
                f"entropy-typicality bound only holds for eps > xi² = {xi**2!r}"
            )
        return 2 * np.exp(-((np.sqrt(eps) - xi) ** 2) / xi_p)
    if bound_kind == "entropy-atypicality":
        xi_ap = 192 * na / (LN2**2 * n)
        return 2 * np.exp(-(eps**2) / xi_ap)
    raise ValidationError(f"unknown bound kind {bound_kind!r}; expected one of {BOUND_KINDS}")


def tail_event_count(bound_kind, n_modes, subsystem_size, eps, d_hs, entropies) -> int:
    """Number of samples in the deviation event of the chosen bound."""
    n, na = n_modes, subsystem_size
    if bound_kind == "covariance-typicality":
        eta = np.sqrt(na**2 / (2 * (n - 1)))
        return int(np.count_nonzero(d_hs >= eta + 2 * eps))
    if bound_kind == "covariance-atypicality":
        eta_a = na**2 / (4 * (n + 1))
        return int(np.count_nonzero(d_hs**2 <= eta_a - 2 * eps))
    if bound_kind == "entropy-typicality":
        return int(np.count_nonzero(entropies <= na - eps))
    if bound_kind == "entropy-atypicality":
        xi_a = na**2 / (2 * LN2 * (n + 1))
        return int(np.count_nonzero(entropies >= na - xi_a + eps))
    raise ValidationError(f"unknown bound kind {bound_kind!r}; expected one of {BOUND_KINDS}")


def default_epsilon_grid(bound_kind: str, n_modes: int, subsystem_size: int) -> np.ndarray:
    """Grid spanning the crossover from vacuous (bound >= 1) to binding.

    ``eps*`` solves ``bound = 1``; the grid is ``eps* x {1/2, 1, 2, 4}``,
    shifted past the bound's stated domain where one exists.
    """
    n, na = n_modes, subsystem_size
    scale = {
        "covariance-typicality": np.sqrt(12 / n * LN2),
        "covariance-atypicality": np.sqrt(12 * na / n * LN2),
        "entropy-atypicality": np.sqrt(192 * na / (LN2**2 * n) * LN2),
    }
    factors = np.array([0.5, 1.0, 2.0, 4.0])
    if bound_kind in scale:
        return scale[bound_kind] * factors
    if bound_kind == "entropy-typicality":
        xi = np.sqrt(2 * na**2 / (n - 1))
        xi_p = 192 / n
        eps_star = (xi + np.sqrt(xi_p * LN2)) ** 2
        return xi**2 + (eps_star - xi**2) * factors
    raise ValidationError(f"unknown bound kind {bound_kind!r}; expected one of {BOUND_KINDS}")


def deviation_samples(cfg: EnsembleConfig, subsystem_size: int, threads: int = 0):
    """Per-sample Hilbert-Schmidt distance to I/2 and subsystem entropy."""

    def one(i):
        c = sample_reduced(cfg, subsystem_size, i)
        lam = np.linalg.eigvalsh(c)
        centered = 2 * lam - 1
        d = np.sqrt((centered**2).sum()) / 2
        return d, entropy_from_spectrum(lam)

    pairs = indexed_map(one, cfg.sample_count, threads)
    d_hs = np.array([p[0] for p in pairs])
    ent = np.array([p[1] for p in pairs])
    return d_hs, ent


def concentration_experiment(
    cfg: EnsembleConfig,
    subsystem_size: int,
    epsilon_grid,
    bound_kind: str,
    threads: int = 0,
    _samples=None,
) -> ConcentrationReport:
    """Empirical tail frequency vs. analytic bound on an epsilon grid.

    A grid point is flagged when the empirical frequency exceeds the bound
    by more than three binomial standard errors.  ``_samples`` lets callers
    reuse one set of ``(d_hs, entropies)`` draws across bound kinds.
    """
    eps_grid = np.asarray(epsilon_grid, dtype=float)
    if np.any(eps_grid <= 0):
        raise ValidationError("epsilon grid values must be positive")
    if bound_kind not in BOUND_KINDS:
        raise ValidationError(f"unknown bound kind {bound_kind!r}; expected one of {BOUND_KINDS}")
    d_hs, ent = _samples if _samples is not None else deviation_samples(cfg, subsystem_size, threads)
    n_samp = cfg.sample_count
    emp, bound, err = [], [], []
    for eps in eps_grid:
        count = tail_event_count(bound_kind, cfg.n_modes, subsystem_size, eps, d_hs, ent)
        p_hat = count / n_samp
        emp.append(p_hat)
        bound.append(analytic_bound(bound_kind, cfg.n_modes, subsystem_size, eps))
        err.append(np.sqrt(p_hat * (1 - p_hat) / n_samp))
    return ConcentrationReport(
        bound_kind=bound_kind,
        n_modes=cfg.n_modes,
        subsystem_size=subsystem_size,
        sample_count=n_samp,
        epsilon_grid=eps_grid,
        empirical_tail=np.array(emp),
        analytic_bound=np.array(bound),
        binomial_stderr=np.array(err),
    )


@dataclass
class VarianceScalingFit:
    n_values: list
    variances: np.ndarray
    variance_stderr: np.ndarray
    slope: float
    slope_stderr: float


def variance_scaling(
    n_values, subsystem_size: int, samples_per_n: int, seed: int, threads: int = 0
) -> VarianceScalingFit:
    """Least-squares slope of ``log Var(S_A)`` against ``log N``.

    One half-filled ensemble per N value, all with the same fixed subsystem
    size.  The stderr of each variance estimate uses the asymptotic
    fourth-moment formula; the slope stderr comes from the fit residuals.
    """
    n_values = sorted(int(n) for n in n_values)
    if len(n_values) < 3:
        raise ValidationError("need at least three system sizes for a scaling fit")
    if any(n < 2 * subsystem_size for n in n_values):
        raise ValidationError("every N must be at least twice the subsystem size")
    variances, var_err = [], []
    for pos, n in enumerate(n_values):
        cfg = EnsembleConfig.half_filling(n, samples_per_n, seed + pos)
        ent = _entropy_samples(cfg, [subsystem_size], threads)[:, 0]
        dev = ent - ent.mean()
        var = float((dev**2).sum() / (samples_per_n - 1))
        m4 = float((dev**4).mean())
        variances.append(var)
        var_err.append(np.sqrt(max(m4 - var**2, 0.0) / samples_per_n))
    x = np.log(np.asarray(n_values, dtype=float))
    y = np.log(np.asarray(variances))
    coeffs, cov = np.polyfit(x, y, 1, cov=True)
    return VarianceScalingFit(
        n_values=n_values,
        variances=np.asarray(variances),
        variance_stderr=np.asarray(var_err),
        slope=float(coeffs[0]),
        slope_stderr=float(np.sqrt(cov[0, 0])),
    )
