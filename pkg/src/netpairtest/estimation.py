"""Estimation of the community count, refined noise matrix, and plug-in
covariance matrices for the pair tests.

The community count is estimated by counting eigenvalues whose square exceeds
2.01 * log(n) * (maximum degree). Noise variances come from a one-step
refinement: deflate the adjacency matrix by its leading eigenpairs, shrink the
eigenvalues using the diagonal of the squared residual, deflate again with the
shrunken eigenvalues, and square the result entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_io import max_degree
from .spectra import Spectrum, degeneracy_threshold, DegenerateNodeError

__all__ = [
    "KEstimate",
    "RefinedResidual",
    "CovarianceEstimate",
    "CensoredSpectrumError",
    "estimate_k",
    "residual_matrix",
    "refine_eigenvalues",
    "refined_residual",
    "estimate_sigma1",
    "estimate_sigma2",
]

K_THRESHOLD_CONSTANT = 2.01
DEFAULT_EIGENVALUE_BUDGET = 50


class CensoredSpectrumError(RuntimeError):
    """All retained eigenvalues exceed the counting threshold, so the
    community-count estimate would be censored; retry with a larger m."""


@dataclass(frozen=True)
class KEstimate:
    k_hat: int
    threshold: float
    eigenvalues: np.ndarray

    @property
    def k_for_T(self) -> int:
        return max(self.k_hat, 1)

    @property
    def k_for_G(self) -> int:
        return max(self.k_hat, 2)


@dataclass(frozen=True)
class RefinedResidual:
    """Refined noise-matrix estimate and entrywise variance estimates."""

    w_hat: np.ndarray
    d_tilde: np.ndarray
    sigma2: np.ndarray


@dataclass(frozen=True)
class CovarianceEstimate:
    matrix: np.ndarray
    condition_estimate: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def k_threshold(n: int, dmax: int) -> float:
    return K_THRESHOLD_CONSTANT * np.log(n) * dmax


def estimate_k_from_values(values: np.ndarray, n: int, dmax: int) -> KEstimate:
    """Count eigenvalues with square above the degree-based threshold.

    ``values`` are the retained largest-magnitude eigenvalues; if every one
    of them clears the threshold the count is censored and an error is
    raised so the caller can retain more pairs.
    """
    thr = k_threshold(n, dmax)
    above = np.abs(values) ** 2 > thr
    k_hat = int(np.sum(above))
    if k_hat == len(values) and k_hat < n:
        raise CensoredSpectrumError(
            f"all {len(values)} retained eigenvalues exceed the threshold "
            f"{thr:.4g}; raise the eigenvalue budget"
        )
    return KEstimate(k_hat=k_hat, threshold=thr, eigenvalues=np.asarray(values))


def estimate_k(x: np.ndarray, spec: Spectrum) -> KEstimate:
    """Community-count estimate from a matrix and its retained spectrum."""
    return estimate_k_from_values(spec.values, x.shape[0], max_degree(x))


def residual_matrix(x: np.ndarray, spec: Spectrum, k: int) -> np.ndarray:
    """X minus its rank-``k`` spectral truncation."""
    if k > spec.m:
        raise ValueError(f"k={k} exceeds retained spectrum size {spec.m}")
    if k == 0:
        return np.asarray(x, dtype=float).copy()
    v = spec.vectors[:, :k]
    return x - (v * spec.values[:k][None, :]) @ v.T


def refine_eigenvalues(spec: Spectrum, w0: np.ndarray, k: int) -> np.ndarray:
    """Shrink the leading eigenvalues using the diagonal of the squared
    initial residual: d~ = [1/d + v^T diag(W0^2) v / d^3]^(-1).

    diag(W0^2) is the diagonal of the full matrix square, i.e. the row sums
    of squared residual entries.
    """
    d = spec.values[:k]
    if np.any(d == 0):
        raise ZeroDivisionError("cannot refine a zero eigenvalue")
    diag_w0sq = np.sum(w0 * w0, axis=1)
    v = spec.vectors[:, :k]
    quad = np.einsum("ik,i,ik->k", v, diag_w0sq, v)
    return 1.0 / (1.0 / d + quad / d**3)


def refined_residual(x: np.ndarray, spec: Spectrum, d_tilde: np.ndarray,
                     k: int) -> RefinedResidual:
    """Deflate with the shrunken eigenvalues and square entrywise to get
    variance estimates."""
    v = spec.vectors[:, :k]
    w_hat = x - (v * np.asarray(d_tilde)[None, :]) @ v.T
    w_hat = (w_hat + w_hat.T) / 2.0
    return RefinedResidual(w_hat=w_hat, d_tilde=np.asarray(d_tilde),
                           sigma2=w_hat * w_hat)


def _condition(mat: np.ndarray) -> float:
    try:
        return float(np.linalg.cond(mat, 2))
    except np.linalg.LinAlgError:
        return np.inf


def sigma1_matrix(vectors: np.ndarray, values: np.ndarray, sigma2: np.ndarray,
                  i: int, j: int) -> np.ndarray:
    """Covariance of the difference of eigenvector rows i and j, evaluated
    from eigenpairs and an entrywise variance matrix.

    Entry (a, b) is [ sum_{t in {i,j}} sum_l sigma2[t,l] v_a(l) v_b(l)
    - sigma2[i,j] (v_a(j) v_b(i) + v_a(i) v_b(j)) ] / (d_a d_b).
    """
    v = vectors
    d = values
    w = sigma2[i] + sigma2[j]
    core = (v * w[:, None]).T @ v
    cross = sigma2[i, j] * (np.outer(v[j], v[i]) + np.outer(v[i], v[j]))
    return (core - cross) / np.outer(d, d)


def estimate_sigma1(spec: Spectrum, rr: RefinedResidual, i: int, j: int,
                    k: int) -> CovarianceEstimate:
    """Plug-in estimate of the row-difference covariance, dimensions k x k."""
    if i == j:
        raise ValueError("nodes must be distinct")
    if k < 1:
        raise ValueError("k must be >= 1")
    d = spec.values[:k]
    if np.any(d == 0):
        raise ZeroDivisionError("zero eigenvalue in covariance plug-in")
    mat = sigma1_matrix(spec.vectors[:, :k], d, rr.sigma2, i, j)
    return CovarianceEstimate(matrix=mat, condition_estimate=_condition(mat))


def sigma2_matrix(vectors: np.ndarray, values: np.ndarray, t: np.ndarray,
                  sigma2: np.ndarray, i: int, j: int) -> np.ndarray:
    """Covariance of the difference of componentwise-ratio vectors, evaluated
    from eigenpairs, eigenvalue locations ``t``, and entrywise variances.

    ``values`` and ``t`` coincide for the plug-in estimator; the exact
    population version passes the deterministic eigenvalue locations as
    ``t``. Indices a, b range over the k-1 ratio components (eigenvectors
    2..k). The first sum skips l = j, the second skips l = i, and the
    (i, j) variance enters through a rank-one cross term.
    """
    k = len(values)
    t1 = t[0]
    trest = t[1:]
    v1i, v1j = vectors[i, 0], vectors[j, 0]
    vrest = vectors[:, 1:k]
    v1 = vectors[:, 0]

    a = (t1 / trest)[None, :] * vrest / v1i - np.outer(v1, vectors[i, 1:k]) / v1i**2
    b = (t1 / trest)[None, :] * vrest / v1j - np.outer(v1, vectors[j, 1:k]) / v1j**2

    s2i = sigma2[i].copy()
    s2i[j] = 0.0
    s2j = sigma2[j].copy()
    s2j[i] = 0.0
    term_i = (a * s2i[:, None]).T @ a
    term_j = (b * s2j[:, None]).T @ b
    c = a[j] - b[i]
    return (term_i + term_j + sigma2[i, j] * np.outer(c, c)) / t1**2


def estimate_sigma2(spec: Spectrum, rr: RefinedResidual, i: int, j: int,
                    k: int) -> CovarianceEstimate:
    """Plug-in estimate of the ratio-difference covariance, dimensions
    (k-1) x (k-1); eigenvalue locations are estimated by the empirical
    eigenvalues themselves."""
    if i == j:
        raise ValueError("nodes must be distinct")
    if k < 2:
        raise ValueError("k must be >= 2 for the ratio covariance")
    d = spec.values[:k]
    if np.any(d == 0):
        raise ZeroDivisionError("zero eigenvalue in covariance plug-in")
    eps = degeneracy_threshold(spec)
    for node in (i, j):
        if abs(spec.vectors[node, 0]) < eps:
            raise DegenerateNodeError(
                f"leading-eigenvector entry at node {node} is degenerate"
            )
    mat = sigma2_matrix(spec.vectors[:, :k], d, d, rr.sigma2, i, j)
    return CovarianceEstimate(matrix=mat, condition_estimate=_condition(mat))
