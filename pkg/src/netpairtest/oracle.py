"""Ground-truth quantities available only in simulation.

Given known model parameters this module exposes the exact eigenstructure of
the mean matrix, the true Bernoulli noise variances, the population
covariance matrices of the two test statistics, and the deterministic
locations of the leading empirical eigenvalues (roots of a truncated
resolvent-series equation). These are consumed by verification code, not by
end users analyzing observed networks.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.optimize

from .estimation import CovarianceEstimate, sigma1_matrix, sigma2_matrix
from .models import DCMMParams, build_mean_matrix, sample_adjacency
from .spectra import top_eigenpairs

__all__ = [
    "GroundTruth",
    "ground_truth",
    "true_sigma1",
    "true_sigma2",
    "compute_tk",
    "expansion_residual",
]

RANK_REL_TOL = 1e-8
DEFAULT_MOMENT_SAMPLES = 200
SERIES_LENGTH_CAP = 12


@dataclass(frozen=True)
class GroundTruth:
    """Exact eigenstructure and noise variances of a simulation model.

    ``t`` holds the deterministic eigenvalue locations once computed (None
    until :func:`compute_tk` results are attached via :func:`with_tk`).
    """

    h: np.ndarray
    v: np.ndarray
    d: np.ndarray
    var_w: np.ndarray
    self_loops: bool
    t: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.h.shape[0]

    @property
    def k(self) -> int:
        return len(self.d)


def ground_truth(params: DCMMParams, self_loops: bool = False) -> GroundTruth:
    """Exact eigendecomposition of the mean matrix restricted to its nonzero
    eigenvalues, plus the Bernoulli variance of every noise entry.

    Raises if the mean matrix has numerical rank below the declared community
    count.
    """
    h = build_mean_matrix(params)
    vals, vecs = np.linalg.eigh(h)
    order = np.argsort(-np.abs(vals), kind="stable")
    nonzero = np.abs(vals[order]) > RANK_REL_TOL * np.abs(vals[order[0]])
    rank = int(np.sum(nonzero))
    if rank < params.K:
        raise ValueError(
            f"mean matrix has numerical rank {rank} < K={params.K}"
        )
    keep = order[:params.K]
    var_w = h * (1.0 - h)
    if not self_loops:
        # diagonal noise is deterministic (-h_ii) without self loops
        np.fill_diagonal(var_w, 0.0)
    return GroundTruth(h=h, v=vecs[:, keep], d=vals[keep], var_w=var_w,
                       self_loops=self_loops)


def with_tk(gt: GroundTruth, moment_samples: int = DEFAULT_MOMENT_SAMPLES,
            seed=0, c0: float | None = None) -> GroundTruth:
    """Return a copy of ``gt`` with all deterministic eigenvalue locations
    attached."""
    moments = noise_moment_tables(gt, moment_samples, seed,
                                  series_length(gt, c0))
    t = np.array([compute_tk(gt, k, moment_samples, c0, _moments=moments)
                  for k in range(gt.k)])
    return replace(gt, t=t)


def true_sigma1(gt: GroundTruth, i: int, j: int) -> CovarianceEstimate:
    """Exact covariance of the difference of eigenvector rows i and j."""
    if i == j:
        raise ValueError("nodes must be distinct")
    mat = sigma1_matrix(gt.v, gt.d, gt.var_w, i, j)
    return CovarianceEstimate(matrix=mat,
                              condition_estimate=float(np.linalg.cond(mat)))


def true_sigma2(gt: GroundTruth, i: int, j: int) -> CovarianceEstimate:
    """Exact covariance of the difference of componentwise-ratio vectors,
    using the deterministic eigenvalue locations ``gt.t``."""
    if i == j:
        raise ValueError("nodes must be distinct")
    if gt.t is None:
        raise ValueError("attach eigenvalue locations first (with_tk)")
    if gt.v[i, 0] == 0.0 or gt.v[j, 0] == 0.0:
        raise ZeroDivisionError("zero leading-eigenvector entry")
    mat = sigma2_matrix(gt.v, gt.d, gt.t, gt.var_w, i, j)
    return CovarianceEstimate(matrix=mat,
                              condition_estimate=float(np.linalg.cond(mat)))


def eigen_gap_constant(gt: GroundTruth) -> float:
    """Ratio-gap constant implied by the instance's eigenvalues: the smallest
    magnitude ratio between consecutive-in-magnitude eigenvalues (skipping
    exact +/- pairs), minus one."""
    d = gt.d
    best = np.inf
    for i in range(gt.k):
        for j in range(i + 1, gt.k):
            if abs(d[i] + d[j]) < 1e-12 * abs(d[i]):
                continue
            best = min(best, abs(d[i]) / abs(d[j]))
    if not np.isfinite(best):
        return 1.0  # single eigenvalue (or only +/- pairs); any bracket works
    if best <= 1.0 + 1e-12:
        raise ValueError("eigenvalue magnitudes too close; no ratio gap")
    return best - 1.0


def _bracket(d_k: float, c0: float) -> tuple[float, float]:
    if d_k > 0:
        return d_k / (1.0 + c0 / 2.0), (1.0 + c0 / 2.0) * d_k
    return (1.0 + c0 / 2.0) * d_k, d_k / (1.0 + c0 / 2.0)


def noise_amplitude(gt: GroundTruth) -> float:
    """Maximum standard deviation of a noise-matrix column sum."""
    return float(np.sqrt(gt.var_w.sum(axis=0).max()))


def series_length(gt: GroundTruth, c0: float | None = None) -> int:
    """Truncation length of the resolvent moment series: the smallest L with
    (alpha/|z|)^L below min(n^-4, |z|^-4) over every bracket, capped at
    ``SERIES_LENGTH_CAP`` for small instances."""
    c0 = eigen_gap_constant(gt) if c0 is None else c0
    alpha = noise_amplitude(gt)
    if alpha == 0.0:
        return 2
    zmin = np.inf
    zmax = 0.0
    for d_k in gt.d:
        a, b = _bracket(d_k, c0)
        zmin = min(zmin, min(abs(a), abs(b)))
        zmax = max(zmax, max(abs(a), abs(b)))
    if alpha >= zmin:
        return SERIES_LENGTH_CAP
    rhs = min(gt.n ** -4.0, zmax ** -4.0)
    l = int(np.ceil(np.log(rhs) / np.log(alpha / zmin)))
    return max(2, min(l, SERIES_LENGTH_CAP))


def noise_moment_tables(gt: GroundTruth, moment_samples: int, seed,
                        length: int) -> dict[int, np.ndarray]:
    """Monte Carlo estimates of V^T E[W^l] V for l = 2..length.

    Each sample draws a full noise matrix W = X - H and accumulates the
    projected powers by repeated matrix-vector products against V, so the
    cost per sample is O(length * n^2 * K).
    """
    if moment_samples < 1:
        raise ValueError("need at least one moment sample")
    rng = np.random.default_rng(seed)
    acc = {l: np.zeros((gt.k, gt.k)) for l in range(2, length + 1)}
    for _ in range(moment_samples):
        w = sample_adjacency(gt.h, rng, self_loops=gt.self_loops) - gt.h
        y = gt.v
        for l in range(1, length + 1):
            y = w @ y
            if l >= 2:
                acc[l] += gt.v.T @ y
    return {l: m / moment_samples for l, m in acc.items()}


def _resolvent_series(moments: dict[int, np.ndarray], k_dim: int, z: float
                      ) -> np.ndarray:
    """R(V, V, z) as a K x K matrix: -I/z - sum_l z^-(l+1) V^T E[W^l] V."""
    r = -np.eye(k_dim) / z
    for l, c in moments.items():
        r = r - c / z ** (l + 1)
    return r


def compute_tk(gt: GroundTruth, k: int, moment_samples: int = DEFAULT_MOMENT_SAMPLES,
               c0: float | None = None, seed=0,
               _moments: dict[int, np.ndarray] | None = None) -> float:
    """Deterministic location of the k-th empirical eigenvalue: the root of
    the truncated resolvent-series equation on the bracket around d_k.

    Noise-moment terms are estimated by Monte Carlo averaging of matrix
    powers (``moment_samples`` draws). With zero noise the equation reduces
    to 1 - d_k/z = 0 and the root is d_k itself.
    """
    if gt.d[k] == 0:
        raise ZeroDivisionError("zero population eigenvalue")
    c0 = eigen_gap_constant(gt) if c0 is None else c0
    if _moments is None:
        _moments = noise_moment_tables(gt, moment_samples, seed,
                                       series_length(gt, c0))
    a, b = _bracket(gt.d[k], c0)
    rest = [m for m in range(gt.k) if m != k]
    d_rest = gt.d[rest]

    def objective(z: float) -> float:
        r = _resolvent_series(_moments, gt.k, z)
        r_kk = r[k, k]
        if rest:
            r_kr = r[k, rest]
            r_rr = r[np.ix_(rest, rest)]
            inner = np.linalg.solve(np.diag(1.0 / d_rest) + r_rr, r_kr)
            r_kk = r_kk - r_kr @ inner
        return 1.0 + gt.d[k] * r_kk

    fa, fb = objective(a), objective(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if np.sign(fa) == np.sign(fb):
        raise RuntimeError(
            f"no sign change on bracket [{a:.6g}, {b:.6g}] for eigenvalue "
            f"{k}; f(a)={fa:.3g}, f(b)={fb:.3g}"
        )
    return float(scipy.optimize.brentq(objective, a, b,
                                       xtol=1e-12 * abs(gt.d[k]),
                                       rtol=8.9e-16))


def expansion_residual(gt: GroundTruth, x_samples, k: int, i: int) -> dict:
    """Empirical check of the first-order eigenvector expansion.

    For each sampled adjacency matrix the residual is
    t_k (vhat_k(i) - v_k(i)) - (W v_k)(i), with vhat_k sign-aligned to the
    population eigenvector. Returns the median and 95th percentile of
    |residual| * sqrt(n) across samples.
    """
    if gt.t is None:
        raise ValueError("attach eigenvalue locations first (with_tk)")
    t_k = gt.t[k]
    v_k = gt.v[:, k]
    scaled = []
    for x in x_samples:
        w = x - gt.h
        spec = top_eigenpairs(x, k + 1)
        vhat = spec.vectors[:, k]
        if vhat @ v_k < 0:
            vhat = -vhat
        r = t_k * (vhat[i] - v_k[i]) - (w @ v_k)[i]
        scaled.append(abs(r) * np.sqrt(gt.n))
    scaled = np.asarray(scaled)
    return {
        "median": float(np.median(scaled)),
        "p95": float(np.percentile(scaled, 95)),
        "samples": scaled,
    }
