"""Synthetic corpora: feature-level scene corpora and word-level index stress sets.

The feature-level generator writes real corpus artifacts (feature files,
manifest, planted ground truth) so the whole pipeline can be exercised
without any video decoding. The word-level helpers skip feature space
entirely and build indexes straight from frame word sets, which is what the
search stress tests and benchmarks want.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .bovw import CorpusStats, Dictionary, VisualWordSet, accumulate_stats
from .clustering import Centroids
from .features_io import FILE_SUFFIX, FrameRecord, Manifest, write_feature_file
from .frame_clusters import FrameCluster, FrameRef, cluster_doc
from .index import InvertedIndex, build_index

__all__ = [
    "SynthConfig",
    "PlantedQuery",
    "generate_corpus",
    "index_from_word_sets",
    "zipf_word_groups",
]


@dataclass(frozen=True)
class SynthConfig:
    """Scene-based synthetic corpus layout.

    Every video gets `scenes_per_video` private Gaussian prototypes; each
    frame is its scene prototype plus isotropic noise, so frames of one scene
    stay tightly grouped and scenes of different videos stay far apart.
    """

    videos: int = 40
    frames_per_video: int = 60
    scenes_per_video: int = 4
    dim: int = 32
    queries: int = 20
    noise: float = 0.05
    seed: int = 0


@dataclass(frozen=True)
class PlantedQuery:
    query_file: str
    video_id: int
    frame_index: int


def generate_corpus(config: SynthConfig, out_dir) -> list[PlantedQuery]:
    """Write per-video feature files, queries, manifest, and planted truth.

    Queries are noise-perturbed copies of randomly chosen corpus frames; the
    truth file records which video each query was taken from. Fully seeded:
    identical configs produce identical bytes.
    """
    if min(config.videos, config.frames_per_video, config.scenes_per_video, config.dim, config.queries) < 1:
        raise ValueError("all synthetic corpus counts must be >= 1")
    out = Path(out_dir)
    (out / "corpus").mkdir(parents=True, exist_ok=True)
    (out / "queries").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(config.seed)

    prototypes = rng.normal(0.0, 1.0, size=(config.videos, config.scenes_per_video, config.dim))
    frames: dict[int, np.ndarray] = {}
    manifest = Manifest(videos={}, model="synthetic", interval_seconds=1.0)
    for video_id in range(config.videos):
        scene_ids = rng.integers(config.scenes_per_video, size=config.frames_per_video)
        noise = rng.normal(0.0, config.noise, size=(config.frames_per_video, config.dim)) if config.noise > 0 else 0.0
        vectors = prototypes[video_id][scene_ids] + noise
        frames[video_id] = vectors.astype(np.float32)
        records = [
            FrameRecord(video_id=video_id, frame_index=i, timestamp=float(i), vector=vectors[i])
            for i in range(config.frames_per_video)
        ]
        write_feature_file(out / "corpus" / f"{video_id:04d}{FILE_SUFFIX}", config.dim, records)
        manifest.videos[video_id] = f"synthetic-{video_id:04d}"
    manifest.save(out / "manifest.json")

    planted: list[PlantedQuery] = []
    for query_id in range(config.queries):
        video_id = int(rng.integers(config.videos))
        frame_index = int(rng.integers(config.frames_per_video))
        vector = frames[video_id][frame_index].astype(np.float64)
        if config.noise > 0:
            vector = vector + rng.normal(0.0, config.noise, size=config.dim)
        name = f"q{query_id:03d}{FILE_SUFFIX}"
        write_feature_file(
            out / "queries" / name,
            config.dim,
            [FrameRecord(video_id=0, frame_index=0, timestamp=0.0, vector=vector)],
        )
        planted.append(PlantedQuery(query_file=f"queries/{name}", video_id=video_id, frame_index=frame_index))

    truth = [
        {"query_file": p.query_file, "video_id": p.video_id, "frame_index": p.frame_index} for p in planted
    ]
    (out / "truth.json").write_text(json.dumps(truth, indent=2) + "\n", encoding="utf-8")
    return planted


def _placeholder_dictionary(size: int) -> Dictionary:
    # word-level corpora never touch feature space; centroids are inert
    vectors = np.zeros((size, 2), dtype=np.float64)
    return Dictionary(centroids=Centroids(vectors=vectors, inertia=0.0, inertia_history=()))


def index_from_word_sets(
    groups: Sequence[tuple[int, Sequence[Sequence[VisualWordSet]]]],
    dict_size: int,
    mode: str = "per_document",
) -> tuple[InvertedIndex, CorpusStats]:
    """Build a full index from (video_id, [cluster -> member frame word sets]).

    Corpus statistics come from all member frames, cluster documents from the
    usual union-and-count weighting; the dictionary is a placeholder of the
    given size since no feature vectors exist.
    """
    all_frames = [ws for _, clusters in groups for members in clusters for ws in members]
    stats = accumulate_stats(all_frames)
    clusters: list[FrameCluster] = []
    for video_id, member_groups in groups:
        frame_counter = 0
        for cluster_id, members in enumerate(member_groups):
            refs = tuple(
                FrameRef(video_id=video_id, frame_index=frame_counter + i, timestamp=float(frame_counter + i))
                for i in range(len(members))
            )
            frame_counter += len(members)
            clusters.append(
                FrameCluster(
                    video_id=video_id,
                    cluster_id=cluster_id,
                    members=refs,
                    doc=cluster_doc(list(members), stats, mode=mode, doc_id=(video_id, cluster_id)),
                )
            )
    index = build_index(clusters, _placeholder_dictionary(dict_size), stats, mode=mode, quantize_words=1)
    return index, stats


def zipf_word_groups(
    n_docs: int,
    dict_size: int = 1024,
    clusters_per_video: int = 5,
    frames_per_cluster: tuple[int, int] = (1, 3),
    words_per_frame: tuple[int, int] = (20, 40),
    zipf_exponent: float = 1.07,
    seed: int = 0,
    video_pool_draws: int = 0,
    background_fraction: float = 0.25,
) -> list[tuple[int, list[list[VisualWordSet]]]]:
    """Zipf-worded cluster groups: a few very common words, a long rare tail.

    With `video_pool_draws` > 0 every video gets a private vocabulary pool of
    that many distinct words and each frame mixes pool words with
    `background_fraction` of draws from the Zipf distribution. That mimics
    real footage: frames of one video are near-duplicates of each other
    (shared pool) while a Zipf head of background words is common to the
    whole corpus.
    """
    rng = np.random.default_rng(seed)
    ranks = np.arange(1, dict_size + 1, dtype=np.float64)
    probs = ranks**-zipf_exponent
    probs /= probs.sum()

    groups: list[tuple[int, list[list[VisualWordSet]]]] = []
    doc_count = 0
    video_id = 0
    while doc_count < n_docs:
        pool = None
        if video_pool_draws > 0:
            pool = rng.choice(dict_size, size=min(video_pool_draws, dict_size), replace=False)
        member_groups: list[list[VisualWordSet]] = []
        for _ in range(min(clusters_per_video, n_docs - doc_count)):
            n_frames = int(rng.integers(frames_per_cluster[0], frames_per_cluster[1] + 1))
            members = []
            for _ in range(n_frames):
                n_words = int(rng.integers(words_per_frame[0], words_per_frame[1] + 1))
                if pool is not None:
                    from_background = rng.random(n_words) < background_fraction
                    words = np.where(
                        from_background,
                        rng.choice(dict_size, size=n_words, p=probs),
                        rng.choice(pool, size=n_words),
                    )
                else:
                    words = rng.choice(dict_size, size=n_words, p=probs)
                members.append(VisualWordSet.from_words(int(w) for w in words))
            member_groups.append(members)
            doc_count += 1
        groups.append((video_id, member_groups))
        video_id += 1
    return groups
