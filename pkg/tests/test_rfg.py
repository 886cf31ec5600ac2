import numpy as np
import pytest

from ffpage import ValidationError
from ffpage.gaussian import entropy, validate_covariance
from ffpage.rfg import (
    BOUND_KINDS,
    EnsembleConfig,
    analytic_bound,
    concentration_experiment,
    default_epsilon_grid,
    moment_alpha_beta,
    rfg_page_curve,
    sample_covariance,
    sample_reduced,
    series_rfg,
    variance_scaling,
)


def test_ensemble_config_validation():
    with pytest.raises(ValidationError):
        EnsembleConfig(4, 5, 10, 0)
    with pytest.raises(ValidationError):
        EnsembleConfig(4, 2, 0, 0)
    cfg = EnsembleConfig.half_filling(10, 5, 0)
    assert cfg.particles == 5


def test_sample_is_pure_projector_with_correct_rank():
    cfg = EnsembleConfig(8, 3, 1, seed=0)
    c = sample_covariance(cfg, 0)
    validate_covariance(c, pure=True)
    assert np.trace(c).real == pytest.approx(3.0, abs=1e-10)


def test_samples_are_deterministic_and_distinct():
    cfg = EnsembleConfig(6, 3, 2, seed=5)
    np.testing.assert_array_equal(sample_covariance(cfg, 1), sample_covariance(cfg, 1))
    assert not np.allclose(sample_covariance(cfg, 0), sample_covariance(cfg, 1))


def test_reduced_sampler_matches_full_sampler_statistics():
    # the isometry shortcut must reproduce the reduced-moment statistics of
    # the full-unitary route
    cfg = EnsembleConfig(8, 4, 400, seed=7)
    tr2_full = np.mean(
        [
            (np.linalg.eigvalsh(sample_covariance(cfg, i)[:3, :3]) ** 2).sum()
            for i in range(cfg.sample_count)
        ]
    )
    cfg2 = EnsembleConfig(8, 4, 400, seed=8)
    tr2_red = np.mean(
        [
            (np.linalg.eigvalsh(sample_reduced(cfg2, 3, i)) ** 2).sum()
            for i in range(cfg2.sample_count)
        ]
    )
    alpha, beta = moment_alpha_beta(8, 4)
    exact = alpha * 9 + beta * 3
    assert tr2_full == pytest.approx(exact, abs=0.05)
    assert tr2_red == pytest.approx(exact, abs=0.05)


def test_moment_alpha_beta_small_case():
    alpha, beta = moment_alpha_beta(4, 2)
    assert alpha == pytest.approx(1 / 15)
    assert beta == pytest.approx(7 / 30)


def test_mean_reduced_covariance_is_filling_fraction():
    cfg = EnsembleConfig(6, 2, 2000, seed=9)
    acc = np.zeros((2, 2), dtype=complex)
    for i in range(cfg.sample_count):
        acc += sample_reduced(cfg, 2, i)
    np.testing.assert_allclose(acc / cfg.sample_count, np.eye(2) / 3, atol=0.02)


@pytest.mark.parametrize("n,m,na", [(4, 2, 2), (8, 4, 3), (16, 8, 5)])
def test_second_moment_formula_monte_carlo(n, m, na):
    cfg = EnsembleConfig(n, m, 3000, seed=n * 100 + na)
    vals = [
        (np.linalg.eigvalsh(sample_reduced(cfg, na, i)) ** 2).sum()
        for i in range(cfg.sample_count)
    ]
    alpha, beta = moment_alpha_beta(n, m)
    exact = alpha * na**2 + beta * na
    err = 3 * np.std(vals, ddof=1) / np.sqrt(cfg.sample_count)
    assert abs(np.mean(vals) - exact) < max(err, 1e-3)


def test_series_rfg_values_and_domain():
    assert series_rfg(0.0) == 0.0
    assert series_rfg(0.5) == pytest.approx(0.2820929365, abs=1e-9)
    with pytest.raises(ValidationError):
        series_rfg(0.6)


def test_page_curve_shape_and_determinism():
    cfg = EnsembleConfig.half_filling(12, 50, seed=13)
    curve = rfg_page_curve(cfg, [2, 4, 6])
    assert [p.subsystem_size for p in curve.points] == [2, 4, 6]
    assert all(0 <= p.mean <= p.subsystem_size for p in curve.points)
    again = rfg_page_curve(cfg, [2, 4, 6], threads=4)
    np.testing.assert_array_equal(curve.means, again.means)


def test_entropy_from_curve_matches_direct_sampling():
    cfg = EnsembleConfig.half_filling(10, 30, seed=17)
    curve = rfg_page_curve(cfg, [4])
    direct = np.mean(
        [entropy(sample_reduced(cfg, 4, i)) for i in range(cfg.sample_count)]
    )
    assert curve.points[0].mean == pytest.approx(direct, abs=1e-10)


def test_analytic_bounds_are_probabilities_eventually():
    for kind in BOUND_KINDS:
        grid = default_epsilon_grid(kind, 100, 10)
        vals = [analytic_bound(kind, 100, 10, e) for e in grid]
        assert vals == sorted(vals, reverse=True)  # decreasing in eps
        assert vals[-1] < 1.0  # grid reaches the binding regime


def test_entropy_typicality_domain():
    with pytest.raises(ValidationError):
        analytic_bound("entropy-typicality", 100, 10, 1e-6)


def test_concentration_report_small_run():
    cfg = EnsembleConfig.half_filling(40, 200, seed=19)
    grid = default_epsilon_grid("covariance-typicality", 40, 3)
    report = concentration_experiment(cfg, 3, grid, "covariance-typicality")
    assert report.empirical_tail.shape == grid.shape
    assert np.all(report.empirical_tail >= 0) and np.all(report.empirical_tail <= 1)
    assert report.violations == 0


def test_concentration_unknown_kind():
    cfg = EnsembleConfig.half_filling(10, 10, seed=0)
    with pytest.raises(ValidationError):
        concentration_experiment(cfg, 2, [0.1], "no-such-bound")


def test_variance_scaling_interface():
    fit = variance_scaling([20, 40, 80], 2, 400, seed=23)
    assert fit.slope < 0
    assert len(fit.variances) == 3
    with pytest.raises(ValidationError):
        variance_scaling([20, 40], 2, 100, seed=0)
    with pytest.raises(ValidationError):
        variance_scaling([10, 20, 40], 8, 100, seed=0)
