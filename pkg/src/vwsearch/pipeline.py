"""End-to-end corpus ingestion: feature files in, index artifact out."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bovw
from .features_io import FeatureFileError, Manifest, feature_files_in, read_feature_file
from .frame_clusters import FrameRef, cluster_doc, cluster_frames, default_clusters_per_video
from .index import InvertedIndex, build_index

__all__ = ["BuildConfig", "BuildSummary", "load_corpus_dir", "build_corpus_index"]


@dataclass(frozen=True)
class BuildConfig:
    """Knobs for one index build; defaults suit small and mid-size corpora."""

    dict_size: int = 256
    quantize_words: int = 5
    clusters_per_video: int = 0  # 0 selects the automatic per-video policy
    frame_docs: bool = False  # index individual frames instead of clusters
    mode: str = "per_document"
    seed: int = 0


@dataclass(frozen=True)
class BuildSummary:
    videos: int
    frames: int
    docs: int
    words: int


def _video_seed(seed: int, video_id: int) -> int:
    # stable per-video sub-seed, independent of video iteration order
    return int(np.random.SeedSequence([seed, video_id]).generate_state(1)[0])


def load_corpus_dir(features_dir, manifest: Manifest) -> dict[int, list[tuple[FrameRef, np.ndarray]]]:
    """Read every feature file in a directory into per-video frame lists.

    Frames are ordered by frame_index within each video. Every video id must
    appear in the manifest; duplicate frame indexes within a video are
    rejected.
    """
    paths = feature_files_in(features_dir)
    if not paths:
        raise FeatureFileError(f"{features_dir}: no feature files found")
    dim: int | None = None
    by_video: dict[int, list[tuple[FrameRef, np.ndarray]]] = {}
    for path in paths:
        file_dim, records = read_feature_file(path)
        if dim is None:
            dim = file_dim
        elif dim != file_dim:
            raise FeatureFileError(f"{path}: dim {file_dim} differs from corpus dim {dim}")
        for rec in records:
            ref = FrameRef(video_id=rec.video_id, frame_index=rec.frame_index, timestamp=rec.timestamp)
            by_video.setdefault(rec.video_id, []).append((ref, rec.vector))
    missing = sorted(video_id for video_id in by_video if video_id not in manifest.videos)
    if missing:
        raise FeatureFileError(f"{features_dir}: video ids missing from manifest: {missing}")
    for video_id, frames in by_video.items():
        frames.sort(key=lambda item: item[0].frame_index)
        if len({ref.frame_index for ref, _ in frames}) != len(frames):
            raise FeatureFileError(f"video {video_id}: duplicate frame indexes across feature files")
    return dict(sorted(by_video.items()))


def build_corpus_index(
    frames_by_video: dict[int, list[tuple[FrameRef, np.ndarray]]],
    video_names: dict[int, str],
    config: BuildConfig,
) -> tuple[InvertedIndex, BuildSummary]:
    """Dictionary, quantization, stats, per-video clustering, index assembly."""
    if not frames_by_video:
        raise ValueError("corpus has no videos")
    ordered_videos = sorted(frames_by_video)
    all_vectors = [vec for video_id in ordered_videos for _, vec in frames_by_video[video_id]]
    dictionary = bovw.build_dictionary(np.asarray(all_vectors, dtype=np.float64), config.dict_size, seed=config.seed)

    word_sets: dict[tuple[int, int], bovw.VisualWordSet] = {}
    for video_id in ordered_videos:
        for ref, vec in frames_by_video[video_id]:
            word_sets[(video_id, ref.frame_index)] = bovw.quantize(vec, dictionary, config.quantize_words)
    stats = bovw.accumulate_stats(word_sets[key] for key in sorted(word_sets))

    clusters = []
    for video_id in ordered_videos:
        frames = frames_by_video[video_id]
        if config.frame_docs:
            k_v = len(frames)
        elif config.clusters_per_video > 0:
            k_v = config.clusters_per_video
        else:
            k_v = default_clusters_per_video(len(frames))
        skeletons = cluster_frames(video_id, frames, k_v=k_v, seed=_video_seed(config.seed, video_id))
        for cluster in skeletons:
            members = [word_sets[(video_id, ref.frame_index)] for ref in cluster.members]
            cluster.doc = cluster_doc(members, stats, mode=config.mode, doc_id=(video_id, cluster.cluster_id))
        clusters.extend(skeletons)

    index = build_index(
        clusters,
        dictionary,
        stats,
        mode=config.mode,
        video_names=video_names,
        quantize_words=config.quantize_words,
    )
    summary = BuildSummary(
        videos=len(frames_by_video),
        frames=sum(len(frames) for frames in frames_by_video.values()),
        docs=index.n_docs,
        words=len(index.lists),
    )
    return index, summary
