import numpy as np
import pytest

import netpairtest as npt
from netpairtest.estimation import (
    CensoredSpectrumError,
    estimate_k_from_values,
    k_threshold,
    sigma1_matrix,
    sigma2_matrix,
)
from netpairtest.spectra import DegenerateNodeError

from brute import brute_sigma1, brute_sigma2


# ---------------------------------------------------------------- K estimate

def test_k_threshold_formula():
    assert k_threshold(100, 7) == pytest.approx(2.01 * np.log(100) * 7)


def test_estimate_k_complete_graph():
    # complete graph on 20 nodes: eigenvalues 19 and -1 (x19); only 19
    # clears the threshold 2.01 * log(20) * 19
    n = 20
    x = np.ones((n, n)) - np.eye(n)
    spec = npt.top_eigenpairs(x, 10)
    est = npt.estimate_k(x, spec)
    assert est.k_hat == 1
    assert est.k_for_T == 1
    assert est.k_for_G == 2


def test_estimate_k_floors():
    est = estimate_k_from_values(np.array([0.5, 0.1]), n=50, dmax=3)
    assert est.k_hat == 0
    assert est.k_for_T == 1
    assert est.k_for_G == 2


def test_estimate_k_censored():
    with pytest.raises(CensoredSpectrumError):
        estimate_k_from_values(np.array([100.0]), n=100, dmax=1)


def test_estimate_k_on_simulated_block_model():
    params = npt.model1_params(400, 80, 0.2, 0.9)
    x = npt.sample_adjacency(npt.build_mean_matrix(params), seed=0)
    spec = npt.top_eigenpairs(x, 50)
    assert npt.estimate_k(x, spec).k_hat == 3


# ------------------------------------------------------------ refinement

def test_residual_matrix_rank_removal():
    x = np.diag([5.0, 3.0, 1.0])
    spec = npt.top_eigenpairs(x, 3)
    w0 = npt.residual_matrix(x, spec, 2)
    assert np.allclose(w0, np.diag([0.0, 0.0, 1.0]), atol=1e-12)
    assert np.array_equal(npt.residual_matrix(x, spec, 0), x)
    with pytest.raises(ValueError):
        npt.residual_matrix(x, spec, 4)


def test_refine_eigenvalues_closed_form():
    # single eigenvector e1, eigenvalue 2, residual row sum of squares s:
    # refined value is 1 / (1/2 + s/8)
    x = np.diag([2.0, 0.0])
    spec = npt.top_eigenpairs(x, 1)
    w0 = np.array([[1.0, 2.0], [2.0, 0.0]])
    s = 1.0 + 4.0
    d_tilde = npt.refine_eigenvalues(spec, w0, 1)
    assert d_tilde[0] == pytest.approx(1.0 / (0.5 + s / 8.0), rel=1e-12)


def test_refine_shrinks_magnitude():
    rng = np.random.default_rng(0)
    for seed in range(5):
        a = np.random.default_rng(seed).random((12, 12))
        x = ((a + a.T) > 1.0).astype(float)
        np.fill_diagonal(x, 0)
        spec = npt.top_eigenpairs(x, 3)
        if np.any(spec.values[:3] == 0):
            continue
        w0 = npt.residual_matrix(x, spec, 3)
        d_tilde = npt.refine_eigenvalues(spec, w0, 3)
        assert np.all(np.abs(d_tilde) <= np.abs(spec.values[:3]) + 1e-12)
        assert np.all(np.sign(d_tilde) == np.sign(spec.values[:3]))


def test_refined_residual_symmetric_and_squared():
    x = npt.adjacency(npt.load_edge_list(npt.karate_club_path(),
                                         indexing="one_based"))
    spec = npt.top_eigenpairs(x, 3)
    w0 = npt.residual_matrix(x, spec, 2)
    d_tilde = npt.refine_eigenvalues(spec, w0, 2)
    rr = npt.refined_residual(x, spec, d_tilde, 2)
    assert np.array_equal(rr.w_hat, rr.w_hat.T)
    assert np.array_equal(rr.sigma2, rr.w_hat**2)


# ------------------------------------------------- covariance assembly

def _random_case(seed, n, k):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    vectors = q[:, :k]
    values = np.sort(rng.uniform(1.0, 4.0, size=k))[::-1]
    t = values * rng.uniform(0.95, 1.05, size=k)
    s = rng.random((n, n))
    sigma2 = (s + s.T) / 2
    return vectors, values, t, sigma2


@pytest.mark.parametrize("seed", range(6))
def test_sigma1_matches_brute_force(seed):
    n, k = 8, 3
    vectors, values, _, sigma2 = _random_case(seed, n, k)
    i, j = 1, 5
    fast = sigma1_matrix(vectors, values, sigma2, i, j)
    slow = brute_sigma1(vectors, values, sigma2, i, j)
    assert np.allclose(fast, slow, atol=1e-12)
    assert np.allclose(fast, fast.T, atol=1e-12)


@pytest.mark.parametrize("seed", range(6))
def test_sigma2_matches_brute_force(seed):
    n, k = 8, 3
    vectors, values, t, sigma2 = _random_case(seed, n, k)
    i, j = 0, 6
    fast = sigma2_matrix(vectors, values, t, sigma2, i, j)
    slow = brute_sigma2(vectors, values, t, sigma2, i, j)
    assert np.allclose(fast, slow, atol=1e-12)


def test_estimate_sigma_validation(karate, karate_spectrum):
    spec = karate_spectrum
    w0 = npt.residual_matrix(karate, spec, 2)
    rr = npt.refined_residual(karate, spec,
                              npt.refine_eigenvalues(spec, w0, 2), 2)
    with pytest.raises(ValueError):
        npt.estimate_sigma1(spec, rr, 3, 3, 2)
    with pytest.raises(ValueError):
        npt.estimate_sigma1(spec, rr, 0, 1, 0)
    with pytest.raises(ValueError):
        npt.estimate_sigma2(spec, rr, 0, 1, 1)
    cov = npt.estimate_sigma1(spec, rr, 6, 12, 2)
    assert cov.dim == 2
    assert np.isfinite(cov.condition_estimate)


def test_estimate_sigma2_degenerate_node():
    # disconnected graph: leading eigenvector vanishes on the smaller
    # component, so ratio covariances there are undefined
    x = np.zeros((7, 7))
    x[:4, :4] = 1.0 - np.eye(4)
    x[4:, 4:] = 1.0 - np.eye(3)
    spec = npt.top_eigenpairs(x, 3)
    w0 = npt.residual_matrix(x, spec, 2)
    rr = npt.refined_residual(x, spec, npt.refine_eigenvalues(spec, w0, 2), 2)
    with pytest.raises(DegenerateNodeError):
        npt.estimate_sigma2(spec, rr, 4, 5, 2)
