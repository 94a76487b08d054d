import math

import numpy as np
import pytest

import netpairtest as npt
from netpairtest.estimation import CovarianceEstimate
from netpairtest.inference import SingularCovarianceError, _quadratic_form
from netpairtest.spectra import Spectrum


# ---------------------------------------------------------------- chi2_sf

def test_chi2_sf_closed_forms():
    for x in (0.0, 0.5, 1.7, 4.2, 9.0):
        # df=2: exp(-x/2); df=4: (1 + x/2) exp(-x/2); df=1: erfc(sqrt(x/2))
        assert npt.chi2_sf(x, 2) == pytest.approx(math.exp(-x / 2), abs=1e-12)
        assert npt.chi2_sf(x, 4) == pytest.approx(
            (1 + x / 2) * math.exp(-x / 2), abs=1e-12)
        assert npt.chi2_sf(x, 1) == pytest.approx(
            math.erfc(math.sqrt(x / 2)), abs=1e-12)


def test_chi2_sf_bounds_and_errors():
    assert npt.chi2_sf(0.0, 3) == 1.0
    assert npt.chi2_sf(1e6, 3) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        npt.chi2_sf(-1.0, 3)
    with pytest.raises(ValueError):
        npt.chi2_sf(1.0, 0)


def test_quadratic_form_singular():
    cov = CovarianceEstimate(matrix=np.eye(2), condition_estimate=1e13)
    with pytest.raises(SingularCovarianceError):
        _quadratic_form(np.ones(2), cov)


# ----------------------------------------------------------- karate values

def test_karate_T_pair(karate):
    res = npt.test_T(karate, 6, 12, k_override=2)  # nodes 7 and 13, 1-based
    assert res.method == "T"
    assert res.df == 2
    assert res.p_value == pytest.approx(0.6926, abs=2e-3)
    res2 = npt.test_T(karate, 2, 26, k_override=2)  # nodes 3 and 27
    assert res2.p_value < 1e-4


def test_karate_G_pair_runs(karate):
    res = npt.test_G(karate, 6, 12, k_override=2)
    assert res.method == "G"
    assert res.df == 1
    assert 0.0 <= res.p_value <= 1.0
    assert res.statistic >= 0.0


def test_default_k_paths(karate):
    # thresholding on this small network floors to k=1 (T) and k=2 (G)
    res_t = npt.test_T(karate, 6, 12)
    assert res_t.k_used == 1
    res_g = npt.test_G(karate, 6, 12)
    assert res_g.k_used == 2


def test_distinct_nodes_required(karate):
    with pytest.raises(ValueError):
        npt.test_T(karate, 4, 4)
    with pytest.raises(ValueError):
        npt.test_G(karate, 4, 4)
    with pytest.raises(ValueError, match="k >= 2"):
        npt.test_G(karate, 0, 1, k_override=1)


# ------------------------------------------------------------- invariances

def _flip_columns(spec, signs):
    return Spectrum(values=spec.values,
                    vectors=spec.vectors * np.asarray(signs)[None, :],
                    residuals=spec.residuals)


def test_sign_flip_invariance(karate):
    spec = npt.top_eigenpairs(karate, 3)
    for signs in ([-1, 1, 1], [1, -1, 1], [-1, -1, -1]):
        flipped = _flip_columns(spec, signs)
        for runner in (npt.test_T, npt.test_G):
            base = runner(karate, 6, 12, k_override=3, spectrum=spec)
            alt = runner(karate, 6, 12, k_override=3, spectrum=flipped)
            assert alt.statistic == pytest.approx(base.statistic,
                                                  rel=1e-10)


def test_permutation_equivariance(karate):
    rng = np.random.default_rng(5)
    perm = rng.permutation(34)
    xp = karate[np.ix_(perm, perm)]
    inv = np.argsort(perm)
    for runner, k in ((npt.test_T, 2), (npt.test_G, 2)):
        base = runner(karate, 6, 12, k_override=k)
        moved = runner(xp, inv[6], inv[12], k_override=k)
        assert moved.statistic == pytest.approx(base.statistic, rel=1e-8)
        assert moved.p_value == pytest.approx(base.p_value, abs=1e-8)


def test_statistic_symmetric_in_pair(karate):
    for runner in (npt.test_T, npt.test_G):
        a = runner(karate, 6, 12, k_override=2)
        b = runner(karate, 12, 6, k_override=2)
        assert a.statistic == b.statistic
        assert a.p_value == b.p_value


# ------------------------------------------------------------ p-value matrix

def test_pvalue_matrix_structure(karate):
    nodes = [2, 6, 7, 12]
    pm = npt.pvalue_matrix(karate, nodes, method="T", k_override=2)
    assert pm.matrix.shape == (4, 4)
    assert np.array_equal(pm.matrix, pm.matrix.T)
    assert np.array_equal(np.diag(pm.matrix), np.ones(4))
    assert np.all((pm.matrix >= 0) & (pm.matrix <= 1))
    # bit-reproducible
    again = npt.pvalue_matrix(karate, nodes, method="T", k_override=2)
    assert np.array_equal(pm.matrix, again.matrix)


def test_pvalue_matrix_validation(karate):
    with pytest.raises(ValueError):
        npt.pvalue_matrix(karate, [3])
    with pytest.raises(ValueError):
        npt.pvalue_matrix(karate, [3, 3])
    with pytest.raises(ValueError):
        npt.pvalue_matrix(karate, [3, 4], method="z")


def test_pvalue_matrix_nan_for_failed_pairs(karate):
    # append a disconnected triangle: the ratio test is undefined on it
    # (the leading eigenvector vanishes there), but pairs inside the main
    # component still work
    x = np.zeros((37, 37))
    x[:34, :34] = karate
    x[34:, 34:] = 1.0 - np.eye(3)
    pm = npt.pvalue_matrix(x, [6, 12, 34], method="G", k_override=2)
    assert np.isnan(pm.matrix[0, 2]) and np.isnan(pm.matrix[2, 0])
    assert np.isfinite(pm.matrix[0, 1])
    assert pm.matrix[2, 2] == 1.0


def test_pvalue_matrix_csv(tmp_path, karate):
    pm = npt.pvalue_matrix(karate, [2, 6, 12], method="T", k_override=2)
    path = tmp_path / "pm.csv"
    pm.to_csv(path, labels=[3, 7, 13])
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "node,3,7,13"
    assert len(lines) == 4


def test_reject():
    res = npt.TestResult(method="T", statistic=6.0, df=2, p_value=0.0498,
                         k_used=2, condition_estimate=1.0)
    assert npt.reject(res, 0.05)
    res2 = npt.TestResult(method="T", statistic=5.0, df=2, p_value=0.0821,
                          k_used=2, condition_estimate=1.0)
    assert not npt.reject(res2, 0.05)
    with pytest.raises(ValueError):
        npt.reject(res, 0.0)
