import numpy as np
import pytest

from ffpage import ValidationError
from ffpage.gaussian import (
    binary_entropy,
    entropy,
    entropy_from_spectrum,
    entropy_series,
    hs_distance,
    reduce_covariance,
    validate_covariance,
    x_transform,
)
from ffpage.linalg import sample_haar_unitary, split_rng


def random_pure_covariance(n, m, seed):
    u = sample_haar_unitary(n, split_rng(seed))
    cols = u[:, :m]
    return cols @ cols.conj().T


def test_binary_entropy_endpoints_and_peak():
    np.testing.assert_allclose(binary_entropy([0.0, 0.5, 1.0]), [0.0, 1.0, 0.0])
    assert binary_entropy(0.25) == pytest.approx(-(0.25 * np.log2(0.25) + 0.75 * np.log2(0.75)))


def test_entropy_of_diagonal_covariance():
    c = np.diag([0.25, 0.75])
    # two modes at lambda = 1/4 and 3/4: S = 2 * H(1/4) = 1.622556...
    assert entropy(c) == pytest.approx(1.6225562489182622, abs=1e-12)


def test_entropy_zero_for_pure_reduced_projector():
    assert entropy(np.diag([1.0, 0.0, 1.0])) == pytest.approx(0.0, abs=1e-12)


def test_entropy_maximal_at_half():
    n = 5
    assert entropy(np.eye(n) / 2) == pytest.approx(n)


def test_entropy_matches_series_expansion():
    c = random_pure_covariance(12, 6, seed=8)
    c_a = reduce_covariance(c, range(4))
    # the Taylor-series evaluation is an independent route to the same number
    assert entropy(c_a) == pytest.approx(entropy_series(c_a, n_max=200), abs=1e-6)


def test_entropy_invariant_under_basis_rotation():
    c = random_pure_covariance(10, 5, seed=9)
    c_a = reduce_covariance(c, range(4))
    u = sample_haar_unitary(4, split_rng(10))
    assert entropy(u @ c_a @ u.conj().T) == pytest.approx(entropy(c_a), abs=1e-10)


def test_spectrum_window_enforced():
    entropy_from_spectrum([0.0 - 5e-9, 1.0 + 5e-9, 0.5])  # inside clamp window
    with pytest.raises(ValidationError):
        entropy_from_spectrum([-1e-6, 0.5])
    with pytest.raises(ValidationError):
        entropy_from_spectrum([0.5, 1.0 + 1e-6])


def test_validate_covariance():
    validate_covariance(np.eye(3) / 2)
    validate_covariance(np.diag([1.0, 0.0]), pure=True)
    with pytest.raises(ValidationError):
        validate_covariance(np.diag([1.5, 0.0]))
    with pytest.raises(ValidationError):
        validate_covariance(np.eye(3) / 2, pure=True)


def test_reduce_covariance_indices():
    c = np.arange(16.0).reshape(4, 4)
    sub = reduce_covariance(c, [1, 3])
    np.testing.assert_array_equal(sub, c[np.ix_([1, 3], [1, 3])])
    with pytest.raises(ValidationError):
        reduce_covariance(c, [3, 1])
    with pytest.raises(ValidationError):
        reduce_covariance(c, [0, 0])
    with pytest.raises(ValidationError):
        reduce_covariance(c, [4])


def test_hs_distance():
    assert hs_distance(np.eye(2), np.eye(2)) == 0.0
    assert hs_distance(np.eye(2), np.zeros((2, 2))) == pytest.approx(np.sqrt(2))
    with pytest.raises(ValidationError):
        hs_distance(np.eye(2), np.eye(3))


def test_x_transform():
    c = np.diag([1.0, 0.5, 0.0])
    np.testing.assert_allclose(np.diag(x_transform(c)), [1.0, 0.0, -1.0])


def test_entropy_bounds_for_random_reductions():
    for seed in range(3):
        c = random_pure_covariance(10, 5, seed=20 + seed)
        for na in (2, 5, 8):
            s = entropy(reduce_covariance(c, range(na)))
            assert -1e-10 <= s <= na + 1e-10
