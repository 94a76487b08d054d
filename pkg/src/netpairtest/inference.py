"""Pairwise membership-profile tests and chi-square p-values.

Two Hotelling-type statistics are provided for the null hypothesis that two
nodes share the same membership profile:

* ``T``: quadratic form in the difference of eigenvector rows, null limit
  chi-square with K degrees of freedom (equal-degree models).
* ``G``: quadratic form in the difference of componentwise eigenvector
  ratios, null limit chi-square with K-1 degrees of freedom (degree-corrected
  models).

Covariance matrices are plugged in from the one-step refined noise estimate;
a numerically singular plug-in raises instead of being silently regularized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.special
import scipy.stats

from .estimation import (
    CovarianceEstimate,
    DEFAULT_EIGENVALUE_BUDGET,
    estimate_k,
    estimate_sigma1,
    estimate_sigma2,
    refine_eigenvalues,
    refined_residual,
    residual_matrix,
)
from .spectra import DegenerateNodeError, Spectrum, ratio_rows, top_eigenpairs

__all__ = [
    "TestResult",
    "PValueMatrix",
    "SingularCovarianceError",
    "test_T",
    "test_G",
    "reject",
    "pvalue_matrix",
    "chi2_sf",
]

CONDITION_LIMIT = 1e12


class SingularCovarianceError(np.linalg.LinAlgError):
    """Plug-in covariance too ill-conditioned to invert meaningfully."""


@dataclass(frozen=True)
class TestResult:
    method: str
    statistic: float
    df: int
    p_value: float
    k_used: int
    condition_estimate: float


@dataclass(frozen=True)
class PValueMatrix:
    """Symmetric matrix of pairwise p-values with unit diagonal.

    Failed pairs (degenerate node, singular covariance) are NaN.
    """

    nodes: tuple
    matrix: np.ndarray
    method: str

    def to_csv(self, path, labels=None) -> None:
        labels = labels if labels is not None else list(self.nodes)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("node," + ",".join(str(l) for l in labels) + "\n")
            for label, row in zip(labels, self.matrix):
                fh.write(str(label) + "," +
                         ",".join(f"{p:.6f}" for p in row) + "\n")


def chi2_sf(x: float, df: int) -> float:
    """Chi-square survival function, the regularized upper incomplete gamma
    Q(df/2, x/2)."""
    if x < 0:
        raise ValueError("statistic must be nonnegative")
    if df < 1:
        raise ValueError("degrees of freedom must be positive")
    return float(scipy.special.gammaincc(df / 2.0, x / 2.0))


def _quadratic_form(diff: np.ndarray, cov: CovarianceEstimate) -> float:
    if not np.isfinite(cov.condition_estimate) or \
            cov.condition_estimate > CONDITION_LIMIT:
        raise SingularCovarianceError(
            f"covariance condition estimate {cov.condition_estimate:.3g} "
            f"exceeds {CONDITION_LIMIT:.0e}"
        )
    sol = scipy.linalg.solve(cov.matrix, diff, assume_a="sym")
    return float(diff @ sol)


def _prepare(x: np.ndarray, spectrum: Spectrum | None) -> Spectrum:
    if spectrum is not None:
        return spectrum
    n = x.shape[0]
    return top_eigenpairs(x, min(n, DEFAULT_EIGENVALUE_BUDGET))


def test_T(x: np.ndarray, i: int, j: int, k_override: int | None = None,
           spectrum: Spectrum | None = None) -> TestResult:
    """Row-difference test of whether nodes ``i`` and ``j`` share a
    membership profile.

    When ``k_override`` is omitted, K is estimated from the spectrum by
    thresholding (floored at 1). A precomputed ``spectrum`` of ``x`` may be
    supplied to amortize the eigendecomposition across pairs.
    """
    if i == j:
        raise ValueError("nodes must be distinct")
    spec = _prepare(x, spectrum)
    k = k_override if k_override is not None else estimate_k(x, spec).k_for_T
    w0 = residual_matrix(x, spec, k)
    d_tilde = refine_eigenvalues(spec, w0, k)
    rr = refined_residual(x, spec, d_tilde, k)
    cov = estimate_sigma1(spec, rr, i, j, k)
    diff = spec.vectors[i, :k] - spec.vectors[j, :k]
    stat = _quadratic_form(diff, cov)
    return TestResult(method="T", statistic=stat, df=k,
                      p_value=chi2_sf(max(stat, 0.0), k), k_used=k,
                      condition_estimate=cov.condition_estimate)


def test_G(x: np.ndarray, i: int, j: int, k_override: int | None = None,
           spectrum: Spectrum | None = None) -> TestResult:
    """Ratio-difference test of whether nodes ``i`` and ``j`` share a
    membership profile under degree heterogeneity.

    K defaults to the thresholding estimate floored at 2; degrees of freedom
    are K-1.
    """
    if i == j:
        raise ValueError("nodes must be distinct")
    spec = _prepare(x, spectrum)
    k = k_override if k_override is not None else estimate_k(x, spec).k_for_G
    if k < 2:
        raise ValueError("the ratio test needs k >= 2")
    w0 = residual_matrix(x, spec, k)
    d_tilde = refine_eigenvalues(spec, w0, k)
    rr = refined_residual(x, spec, d_tilde, k)
    cov = estimate_sigma2(spec, rr, i, j, k)
    diff = ratio_rows(spec, i, k) - ratio_rows(spec, j, k)
    stat = _quadratic_form(diff, cov)
    return TestResult(method="G", statistic=stat, df=k - 1,
                      p_value=chi2_sf(max(stat, 0.0), k - 1), k_used=k,
                      condition_estimate=cov.condition_estimate)


def reject(result: TestResult, alpha: float) -> bool:
    """True iff the statistic exceeds the upper-alpha chi-square quantile
    (strict inequality), equivalently p-value < alpha."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    quantile = scipy.stats.chi2.ppf(1.0 - alpha, result.df)
    return bool(result.statistic > quantile)


def pvalue_matrix(x: np.ndarray, nodes, method: str = "T",
                  k_override: int | None = None) -> PValueMatrix:
    """Pairwise p-value matrix over ``nodes``; the spectral decomposition is
    computed once and shared across pairs."""
    nodes = list(nodes)
    if len(nodes) < 2 or len(set(nodes)) != len(nodes):
        raise ValueError("need at least two distinct nodes")
    method = method.upper()
    if method not in ("T", "G"):
        raise ValueError(f"unknown method {method!r}")
    spec = _prepare(x, None)
    runner = test_T if method == "T" else test_G
    m = len(nodes)
    out = np.ones((m, m))
    for s in range(m):
        for t in range(s + 1, m):
            try:
                res = runner(x, nodes[s], nodes[t], k_override=k_override,
                             spectrum=spec)
                out[s, t] = out[t, s] = res.p_value
            except (SingularCovarianceError, DegenerateNodeError):
                out[s, t] = out[t, s] = np.nan
    return PValueMatrix(nodes=tuple(nodes), matrix=out, method=method)
