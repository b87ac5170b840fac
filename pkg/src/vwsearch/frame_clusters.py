"""Per-video frame clustering and cluster document construction.

Each video's sampled frames are grouped by visual similarity (k-means over
their feature vectors); a cluster's word set is the union of its members'
word sets and becomes the unit document of the index.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bovw import CorpusStats, VisualWordSet, WeightedWordDoc, WeightingMode, weigh_doc
from .clustering import as_feature_matrix, kmeans_fit, pairwise_sq_distances

__all__ = [
    "FrameRef",
    "FrameCluster",
    "default_clusters_per_video",
    "cluster_frames",
    "cluster_doc",
]

MAX_AUTO_CLUSTERS = 64


@dataclass(frozen=True)
class FrameRef:
    """Identity of one sampled frame inside a video."""

    video_id: int
    frame_index: int
    timestamp: float


@dataclass
class FrameCluster:
    """A group of visually similar frames of one video.

    `doc` is attached after the cluster skeleton is built, once corpus-wide
    statistics are available to weigh the union word set.
    """

    video_id: int
    cluster_id: int
    members: tuple[FrameRef, ...]
    doc: WeightedWordDoc | None = None


def default_clusters_per_video(n_frames: int) -> int:
    """Auto policy: one cluster per ~20 frames, capped so indexes stay small."""
    return min(math.ceil(n_frames / 20), MAX_AUTO_CLUSTERS)


def cluster_frames(
    video_id: int,
    frames: Sequence[tuple[FrameRef, object]],
    k_v: int,
    seed: int = 0,
) -> list[FrameCluster]:
    """Partition one video's frames into at most k_v clusters by feature similarity.

    Returns cluster skeletons (members only, no documents). Cluster ids are
    assigned in ascending order of each cluster's smallest member frame_index,
    so the output is stable for fixed inputs and seed. Every frame lands in
    exactly one cluster; k_v is clamped to the frame count.
    """
    if not frames:
        raise ValueError(f"video {video_id} has no frames to cluster")
    if k_v < 1:
        raise ValueError(f"k_v must be >= 1, got {k_v}")
    refs = [ref for ref, _ in frames]
    for ref in refs:
        if ref.video_id != video_id:
            raise ValueError(f"frame {ref} does not belong to video {video_id}")
    if len({ref.frame_index for ref in refs}) != len(refs):
        raise ValueError(f"video {video_id} has duplicate frame indexes")

    matrix = as_feature_matrix([vec for _, vec in frames])
    k = min(k_v, len(frames))
    centroids = kmeans_fit(matrix, k, seed=seed)
    labels = np.argmin(pairwise_sq_distances(matrix, centroids.vectors), axis=1)

    groups: dict[int, list[FrameRef]] = {}
    for ref, label in zip(refs, labels):
        groups.setdefault(int(label), []).append(ref)
    ordered = sorted(groups.values(), key=lambda members: min(m.frame_index for m in members))
    return [
        FrameCluster(video_id=video_id, cluster_id=cid, members=tuple(members))
        for cid, members in enumerate(ordered)
    ]


def cluster_doc(
    member_word_sets: Sequence[VisualWordSet],
    stats: CorpusStats,
    mode: WeightingMode = "per_document",
    doc_id: object = None,
) -> WeightedWordDoc:
    """Weigh a cluster: word set is the union over members, tf counts members.

    A word's cluster term frequency is the number of member frames whose word
    set contains it (1 <= tf <= number of members), then weights follow the
    usual document weighting semantics.
    """
    if not member_word_sets:
        raise ValueError("a cluster document needs at least one member frame")
    tf: Counter[int] = Counter()
    for word_set in member_word_sets:
        tf.update(word_set.multiplicity.keys())
    return weigh_doc(VisualWordSet(multiplicity=dict(tf)), stats, mode=mode, doc_id=doc_id)
