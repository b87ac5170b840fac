"""Squared-L2 vector math and a deterministic Lloyd clustering engine.

Everything here is a pure function of its arguments: fixed inputs and a
fixed seed reproduce bit-identical output, which the rest of the pipeline
relies on for reproducible dictionaries, clusterings, and index artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Centroids",
    "as_feature_matrix",
    "l2_distance_sq",
    "pairwise_sq_distances",
    "kmeans_fit",
    "kmeans_assign",
]


def as_feature_matrix(points) -> np.ndarray:
    """Coerce a sequence of feature vectors to a finite (n, dim) float64 matrix."""
    matrix = np.asarray(points, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
        raise ValueError(f"expected a non-empty (n, dim) point set, got shape {matrix.shape}")
    if not np.isfinite(matrix).all():
        raise ValueError("feature vectors must be finite (no NaN/Inf)")
    return matrix


def l2_distance_sq(a, b) -> float:
    """Squared L2 distance between two equal-dimension feature vectors."""
    va = as_feature_matrix(a)[0]
    vb = as_feature_matrix(b)[0]
    if va.shape != vb.shape:
        raise ValueError(f"dimension mismatch: {va.shape[0]} vs {vb.shape[0]}")
    diff = va - vb
    return float(np.dot(diff, diff))


def pairwise_sq_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """All squared distances between rows of `points` and rows of `centers`.

    Uses the expansion |x-c|^2 = |x|^2 - 2 x.c + |c|^2 so large inputs avoid an
    (n, k, dim) temporary; tiny negatives from cancellation are clipped to 0.
    """
    p_sq = np.einsum("ij,ij->i", points, points)
    c_sq = np.einsum("ij,ij->i", centers, centers)
    d2 = p_sq[:, None] - 2.0 * (points @ centers.T) + c_sq[None, :]
    np.maximum(d2, 0.0, out=d2)
    return d2


@dataclass(frozen=True)
class Centroids:
    """Result of a k-means fit: the mean vectors plus the final objective value.

    Attributes:
        vectors: (k, dim) float64 centroid matrix.
        inertia: sum of squared distances of every point to its nearest centroid.
        inertia_history: per-iteration inertia values, non-increasing.
    """

    vectors: np.ndarray
    inertia: float
    inertia_history: tuple[float, ...]

    @property
    def k(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def _kmeans_pp_init(matrix: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Seeded k-means++ seeding: spread initial centers by squared distance."""
    n = matrix.shape[0]
    centers = np.empty((k, matrix.shape[1]), dtype=np.float64)
    centers[0] = matrix[int(rng.integers(n))]
    best_d2 = pairwise_sq_distances(matrix, centers[:1])[:, 0]
    for i in range(1, k):
        total = float(best_d2.sum())
        if total > 0.0:
            idx = int(rng.choice(n, p=best_d2 / total))
        else:
            # all remaining mass is on duplicate points; any choice is equivalent
            idx = int(rng.integers(n))
        centers[i] = matrix[idx]
        np.minimum(best_d2, pairwise_sq_distances(matrix, centers[i : i + 1])[:, 0], out=best_d2)
    return centers


def _update_means(matrix: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    """Mean of each cluster; empty clusters are reseeded from the point farthest
    from its own centroid (distinct point per repaired cluster)."""
    dim = matrix.shape[1]
    sums = np.zeros((k, dim), dtype=np.float64)
    np.add.at(sums, labels, matrix)
    counts = np.bincount(labels, minlength=k)
    nonempty = counts > 0
    centers = sums
    centers[nonempty] /= counts[nonempty, None]
    empty = np.flatnonzero(~nonempty)
    if empty.size:
        own_d2 = np.einsum("ij,ij->i", matrix - centers[labels], matrix - centers[labels])
        order = np.argsort(-own_d2, kind="stable")
        for slot, cluster in enumerate(empty):
            centers[cluster] = matrix[order[slot]]
    return centers


def kmeans_fit(points, k: int, seed: int = 0, max_iters: int = 100, tol: float = 1e-4) -> Centroids:
    """Lloyd's algorithm with seeded k-means++ initialization.

    Stops when the assignment becomes stable (exact fixed point), when the
    inertia improvement drops below `tol`, or after `max_iters` assignment
    rounds. Deterministic for fixed (points, k, seed, max_iters, tol).
    Pass tol=0 to disable the improvement cutoff and run to a fixed point.
    """
    matrix = as_feature_matrix(points)
    n = matrix.shape[0]
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > n:
        raise ValueError(f"k ({k}) exceeds number of points ({n})")
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    if max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {max_iters}")

    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_init(matrix, k, rng)
    history: list[float] = []
    prev_labels: np.ndarray | None = None
    row = np.arange(n)
    for iteration in range(max_iters):
        d2 = pairwise_sq_distances(matrix, centers)
        labels = np.argmin(d2, axis=1)
        history.append(float(d2[row, labels].sum()))
        stable = prev_labels is not None and np.array_equal(labels, prev_labels)
        converged = len(history) >= 2 and history[-2] - history[-1] < tol
        if stable or converged or iteration == max_iters - 1:
            break
        centers = _update_means(matrix, labels, k)
        prev_labels = labels
    return Centroids(vectors=centers, inertia=history[-1], inertia_history=tuple(history))


def kmeans_assign(v, centroids: Centroids) -> int:
    """Index of the nearest centroid; ties break toward the lowest index."""
    vec = as_feature_matrix(v)
    if vec.shape[1] != centroids.dim:
        raise ValueError(f"dimension mismatch: vector has {vec.shape[1]}, centroids have {centroids.dim}")
    d2 = pairwise_sq_distances(vec, centroids.vectors)[0]
    return int(np.argmin(d2))
