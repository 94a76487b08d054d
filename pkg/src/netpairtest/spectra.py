"""Leading eigenpairs of the adjacency matrix and componentwise ratios.

Eigenpairs are sorted by eigenvalue magnitude and carry a deterministic,
data-only sign convention: in every eigenvector the entry of largest absolute
value is positive (ties broken by smallest index). Both downstream test
statistics are invariant to column sign flips, so any fixed convention works;
this one needs no ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Spectrum",
    "DegenerateNodeError",
    "top_eigenpairs",
    "orient_signs",
    "ratio_rows",
]

ORTHONORMALITY_TOL = 1e-8
RESIDUAL_TOL = 1e-6
DEGENERACY_REL_TOL = 1e-10


class DegenerateNodeError(ValueError):
    """Leading-eigenvector entry too close to zero for a ratio statistic."""


@dataclass(frozen=True)
class Spectrum:
    """Top-m eigenpairs of a symmetric matrix.

    ``values`` is sorted by nonincreasing magnitude, ``vectors`` holds the
    matching orthonormal eigenvectors as columns, ``residuals`` the per-pair
    norms ||X v - d v|| recorded at construction time.
    """

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray

    @property
    def m(self) -> int:
        return len(self.values)

    def check(self) -> None:
        """Assert the structural invariants (ordering, orthonormality,
        residual bounds, sign convention)."""
        mags = np.abs(self.values)
        if np.any(np.diff(mags) > 1e-12):
            raise AssertionError("eigenvalue magnitudes not nonincreasing")
        gram = self.vectors.T @ self.vectors
        if np.max(np.abs(gram - np.eye(self.m))) > ORTHONORMALITY_TOL:
            raise AssertionError("eigenvectors not orthonormal")
        bound = RESIDUAL_TOL * max(1.0, mags[0] if self.m else 1.0)
        if np.any(self.residuals > bound):
            raise AssertionError("eigen-residual exceeds tolerance")
        for k in range(self.m):
            col = self.vectors[:, k]
            lead = int(np.argmax(np.abs(col)))
            if col[lead] < 0:
                raise AssertionError(f"column {k} violates sign convention")


def _sort_order(values: np.ndarray, m: int) -> np.ndarray:
    # magnitude descending, ties by descending signed value, then index
    idx = np.arange(len(values))
    order = np.lexsort((idx, -values, -np.abs(values)))
    return order[:m]


def top_eigenpairs(x: np.ndarray, m: int) -> Spectrum:
    """The ``m`` eigenpairs of largest eigenvalue magnitude of symmetric ``x``.

    Uses a full dense symmetric eigendecomposition, which is robust at the
    matrix sizes this library targets (n up to a few thousand).
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, {n}], got {m}")
    vals, vecs = np.linalg.eigh(x)
    order = _sort_order(vals, m)
    values = vals[order]
    vectors = vecs[:, order]
    residuals = np.linalg.norm(x @ vectors - vectors * values[None, :], axis=0)
    return orient_signs(Spectrum(values=values, vectors=vectors,
                                 residuals=residuals))


def orient_signs(spec: Spectrum) -> Spectrum:
    """Flip eigenvector columns so the largest-magnitude entry is positive.

    Idempotent; ties resolve to the smallest index (first argmax).
    """
    vectors = spec.vectors.copy()
    for k in range(spec.m):
        col = vectors[:, k]
        lead = int(np.argmax(np.abs(col)))
        if col[lead] < 0:
            vectors[:, k] = -col
    return Spectrum(values=spec.values, vectors=vectors,
                    residuals=spec.residuals)


def degeneracy_threshold(spec: Spectrum) -> float:
    """Magnitude below which a leading-eigenvector entry counts as zero."""
    return DEGENERACY_REL_TOL * np.max(np.abs(spec.vectors[:, 0]))


def ratio_rows(spec: Spectrum, i: int, K: int) -> np.ndarray:
    """Componentwise eigenvector ratios (v_2(i)/v_1(i), ..., v_K(i)/v_1(i)).

    A component where numerator and denominator are both exactly zero is 1 by
    convention. A near-zero denominator with nonzero numerator raises
    :class:`DegenerateNodeError` rather than dividing.
    """
    if K < 2:
        raise ValueError("ratio rows need K >= 2")
    if spec.m < K:
        raise ValueError(f"spectrum holds {spec.m} pairs, need {K}")
    denom = spec.vectors[i, 0]
    numer = spec.vectors[i, 1:K]
    if denom == 0.0:
        if np.any(numer != 0.0):
            _degenerate(i, denom)
        return np.ones(K - 1)
    if abs(denom) < degeneracy_threshold(spec) and np.any(numer != 0.0):
        _degenerate(i, denom)
    return numer / denom


def _degenerate(i: int, denom: float):
    raise DegenerateNodeError(
        f"leading-eigenvector entry {denom!r} at node {i} is degenerate"
    )
