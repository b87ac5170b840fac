"""Independent reference implementations used to check the package.

Everything here is deliberately written the slow, obvious way (plain loops,
no shared code with the package) so a bug in the implementation cannot hide
in its own oracle.
"""

from __future__ import annotations

import math


def naive_l2_sq(a, b) -> float:
    assert len(a) == len(b)
    return math.fsum((x - y) ** 2 for x, y in zip(a, b))


def distances_to_centers(v, centers) -> list[tuple[float, int]]:
    """(distance, index) pairs sorted nearest-first, ties by lower index."""
    return sorted((naive_l2_sq(v, c), i) for i, c in enumerate(centers))


def nearest_center(v, centers) -> int:
    return distances_to_centers(v, centers)[0][1]


def kmeans_objective(points, centers) -> float:
    """Sum over points of the squared distance to the nearest center."""
    return math.fsum(distances_to_centers(p, centers)[0][0] for p in points)


def lloyd_reference(points, init_centers, max_rounds: int = 200):
    """Plain-loop Lloyd iteration from explicit initial centers.

    Assignment ties break toward the lower center index; empty clusters are
    reseeded from the point currently farthest from its own center (distinct
    point per empty cluster, stable order). Runs until the assignment is
    stable or max_rounds pass. Returns (centers, labels).
    """
    n = len(points)
    dim = len(points[0])
    centers = [list(c) for c in init_centers]
    k = len(centers)
    labels = [-1] * n
    for _ in range(max_rounds):
        new_labels = [nearest_center(p, centers) for p in points]
        if new_labels == labels:
            break
        labels = new_labels
        sums = [[0.0] * dim for _ in range(k)]
        counts = [0] * k
        for p, lab in zip(points, labels):
            counts[lab] += 1
            for d in range(dim):
                sums[lab][d] += p[d]
        for j in range(k):
            if counts[j] > 0:
                centers[j] = [s / counts[j] for s in sums[j]]
        empties = [j for j in range(k) if counts[j] == 0]
        if empties:
            own = sorted(
                ((-naive_l2_sq(p, centers[labels[i]]), i) for i, p in enumerate(points)),
            )
            for slot, j in enumerate(empties):
                centers[j] = list(points[own[slot][1]])
    return centers, labels


def naive_vis_sim(qw: dict, dw: dict) -> float:
    """Direct evaluation: min-sum over the intersection, max-sum over the union."""
    union = set(qw) | set(dw)
    num = math.fsum(min(qw[w], dw[w]) for w in union if w in qw and w in dw)
    den = math.fsum(max(qw.get(w, 0.0), dw.get(w, 0.0)) for w in union)
    if den == 0.0:
        return 0.0
    return num / den


def naive_word_weight(tf: int, n_frames: int, df: int) -> float:
    return tf * (math.log((n_frames + 1) / (df + 1)) + 1.0)
