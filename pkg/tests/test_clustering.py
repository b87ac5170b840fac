"""Vector math and k-means engine tests."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from vwsearch.clustering import (
    _kmeans_pp_init,
    kmeans_assign,
    kmeans_fit,
    l2_distance_sq,
    pairwise_sq_distances,
)

from oracles import kmeans_objective, lloyd_reference, nearest_center


def blobs(n_blobs: int, per_blob: int, dim: int, seed: int, spread: float = 8.0, noise: float = 0.3):
    rng = np.random.default_rng(seed)
    centers = rng.normal(0.0, spread, size=(n_blobs, dim))
    points = np.concatenate(
        [center + rng.normal(0.0, noise, size=(per_blob, dim)) for center in centers]
    )
    return points


class TestL2DistanceSq:
    def test_identity(self):
        assert l2_distance_sq([0.0, 0.0], [0.0, 0.0]) == 0.0

    def test_unit_square_diagonal(self):
        assert l2_distance_sq([1.0, 0.0], [0.0, 1.0]) == 2.0

    def test_three_four_five(self):
        assert l2_distance_sq([3.0, 4.0], [0.0, 0.0]) == 25.0

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            l2_distance_sq([1.0, 2.0], [1.0, 2.0, 3.0])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            l2_distance_sq([np.nan, 0.0], [0.0, 0.0])

    @given(
        hnp.arrays(np.float64, 5, elements=st.floats(-100, 100)),
        hnp.arrays(np.float64, 5, elements=st.floats(-100, 100)),
    )
    def test_matches_naive_sum(self, a, b):
        from oracles import naive_l2_sq

        assert l2_distance_sq(a, b) == pytest.approx(naive_l2_sq(a, b), rel=1e-12, abs=1e-12)


class TestPairwiseDistances:
    def test_matches_elementwise(self):
        rng = np.random.default_rng(7)
        points = rng.normal(size=(20, 6))
        centers = rng.normal(size=(5, 6))
        d2 = pairwise_sq_distances(points, centers)
        for i in range(20):
            for j in range(5):
                assert d2[i, j] == pytest.approx(l2_distance_sq(points[i], centers[j]), rel=1e-10, abs=1e-10)

    def test_never_negative(self):
        rng = np.random.default_rng(11)
        points = rng.normal(size=(50, 4)) * 1e6
        assert (pairwise_sq_distances(points, points) >= 0.0).all()


class TestKmeansFit:
    def test_two_points_two_clusters(self):
        result = kmeans_fit([[0.0, 0.0], [10.0, 10.0]], k=2, seed=0)
        got = {tuple(v) for v in result.vectors}
        assert got == {(0.0, 0.0), (10.0, 10.0)}
        assert result.inertia == 0.0

    def test_unit_square_single_cluster(self):
        corners = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]
        result = kmeans_fit(corners, k=1, seed=3)
        assert result.vectors[0] == pytest.approx([0.5, 0.5])
        # confirmed against the brute-force objective: four corners at squared
        # distance 0.5 each from the center
        assert result.inertia == pytest.approx(kmeans_objective(corners, result.vectors))
        assert result.inertia == pytest.approx(2.0)

    def test_deterministic_for_fixed_arguments(self):
        points = blobs(4, 30, 8, seed=5)
        a = kmeans_fit(points, k=4, seed=42)
        b = kmeans_fit(points, k=4, seed=42)
        assert np.array_equal(a.vectors, b.vectors)
        assert a.inertia == b.inertia
        assert a.inertia_history == b.inertia_history

    def test_rejects_k_larger_than_points(self):
        with pytest.raises(ValueError):
            kmeans_fit([[0.0], [1.0]], k=3, seed=0)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            kmeans_fit([[0.0], [np.inf]], k=1, seed=0)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_inertia_non_increasing(self, seed):
        points = blobs(5, 40, 6, seed=seed)
        result = kmeans_fit(points, k=5, seed=seed)
        history = result.inertia_history
        assert all(history[i] >= history[i + 1] for i in range(len(history) - 1))

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_final_assignment_is_nearest_and_centers_are_means(self, seed):
        points = blobs(3, 25, 4, seed=seed)
        result = kmeans_fit(points, k=3, seed=seed, tol=0.0)
        labels = [kmeans_assign(p, result) for p in points]
        for p, lab in zip(points, labels):
            assert lab == nearest_center(p, result.vectors)
        for j in range(result.k):
            member = points[[i for i, lab in enumerate(labels) if lab == j]]
            if len(member):
                mean = member.mean(axis=0)
                np.testing.assert_allclose(result.vectors[j], mean, rtol=1e-9, atol=1e-12)

    def test_inertia_matches_brute_force_objective(self):
        points = blobs(4, 50, 5, seed=9)
        result = kmeans_fit(points, k=4, seed=9, tol=0.0)
        assert result.inertia == pytest.approx(kmeans_objective(points, result.vectors), rel=1e-9)

    def test_matches_independent_lloyd_from_same_init(self):
        points = blobs(4, 40, 4, seed=13)
        rng = np.random.default_rng(13)
        init = _kmeans_pp_init(points, 4, rng)
        result = kmeans_fit(points, k=4, seed=13, tol=0.0)
        ref_centers, _ = lloyd_reference([list(p) for p in points], [list(c) for c in init])
        np.testing.assert_allclose(np.sort(result.vectors, axis=0), np.sort(np.array(ref_centers), axis=0), rtol=1e-9)

    def test_duplicate_points_with_extra_clusters_terminates(self):
        points = [[1.0, 1.0]] * 6
        result = kmeans_fit(points, k=3, seed=0)
        assert result.inertia == 0.0

    def test_empty_cluster_repair_keeps_k(self):
        # two far blobs, k=3: one init layout will strand a center
        points = blobs(2, 30, 3, seed=21)
        result = kmeans_fit(points, k=3, seed=21)
        assert result.vectors.shape == (3, 3)


class TestKmeansAssign:
    def test_exact_centroid_hit(self):
        result = kmeans_fit(blobs(5, 10, 3, seed=2), k=5, seed=2)
        for idx in range(5):
            assert kmeans_assign(result.vectors[idx], result) == idx

    def test_tie_breaks_to_lowest_index(self):
        import vwsearch.clustering as clustering

        centroids = clustering.Centroids(
            vectors=np.array([[1.0, 0.0], [-1.0, 0.0]]), inertia=0.0, inertia_history=()
        )
        assert kmeans_assign([0.0, 5.0], centroids) == 0

    def test_dimension_mismatch_rejected(self):
        result = kmeans_fit([[0.0, 0.0]], k=1, seed=0)
        with pytest.raises(ValueError):
            kmeans_assign([0.0, 0.0, 0.0], result)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_matches_exhaustive_scan(self, seed):
        rng = np.random.default_rng(seed)
        points = rng.normal(size=(30, 4))
        result = kmeans_fit(points, k=6, seed=seed % 1000)
        v = rng.normal(size=4)
        assert kmeans_assign(v, result) == nearest_center(v, result.vectors)
