"""Visual dictionary construction, quantization, and TF-IDF word weighting.

A dictionary maps feature space onto integer visual words (one per k-means
centroid). Frames quantize to small word sets, corpus statistics count how
many frames contain each word, and documents carry one positive weight per
word: tf * (ln((N+1)/(N(w)+1)) + 1) with smoothing so words absent from the
corpus still weigh (queries may contain them).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Mapping

import numpy as np

from .clustering import Centroids, as_feature_matrix, kmeans_fit, pairwise_sq_distances

__all__ = [
    "Dictionary",
    "VisualWordSet",
    "CorpusStats",
    "WeightedWordDoc",
    "WeightingMode",
    "build_dictionary",
    "quantize",
    "accumulate_stats",
    "word_weight",
    "weigh_doc",
]

WeightingMode = Literal["per_document", "global"]
MODES: tuple[str, ...] = ("per_document", "global")


@dataclass(frozen=True)
class Dictionary:
    """The visual-word codebook; word ids are exactly 0..size-1."""

    centroids: Centroids

    @property
    def size(self) -> int:
        return self.centroids.k

    @property
    def dim(self) -> int:
        return self.centroids.dim


@dataclass(frozen=True)
class VisualWordSet:
    """Words observed in one frame (or query image) with occurrence counts."""

    multiplicity: Mapping[int, int]

    def __post_init__(self):
        for word, count in self.multiplicity.items():
            if count < 1:
                raise ValueError(f"multiplicity of word {word} must be >= 1, got {count}")

    @property
    def words(self) -> frozenset[int]:
        return frozenset(self.multiplicity)

    def __iter__(self) -> Iterator[int]:
        return iter(self.multiplicity)

    def __len__(self) -> int:
        return len(self.multiplicity)

    @classmethod
    def from_words(cls, words: Iterable[int]) -> "VisualWordSet":
        return cls(multiplicity=dict(Counter(int(w) for w in words)))


@dataclass(frozen=True)
class CorpusStats:
    """Frame-level document frequencies: N frames total, N(w) frames per word."""

    n_frames: int
    doc_freq: Mapping[int, int]
    total_occurrences: int = 0

    def frames_containing(self, word: int) -> int:
        return self.doc_freq.get(word, 0)


@dataclass(frozen=True)
class WeightedWordDoc:
    """A document (frame, frame cluster, or query) as a word -> weight map.

    `total_weight` caches the sum of the weights; word keys are kept in
    ascending order so identical documents are bit-identical structures.
    """

    doc_id: object
    weights: Mapping[int, float]
    total_weight: float

    @classmethod
    def build(cls, doc_id: object, weights: Mapping[int, float]) -> "WeightedWordDoc":
        ordered = {int(w): float(weights[w]) for w in sorted(weights)}
        for word, weight in ordered.items():
            if not (weight > 0.0) or not math.isfinite(weight):
                raise ValueError(f"word {word} has non-positive or non-finite weight {weight}")
        return cls(doc_id=doc_id, weights=ordered, total_weight=math.fsum(ordered.values()))

    def __len__(self) -> int:
        return len(self.weights)


def build_dictionary(frame_features, dict_size: int, seed: int = 0) -> Dictionary:
    """Cluster all corpus frame features; centroid i becomes visual word i."""
    matrix = as_feature_matrix(frame_features)
    if dict_size > matrix.shape[0]:
        raise ValueError(f"dict_size ({dict_size}) exceeds number of frames ({matrix.shape[0]})")
    return Dictionary(centroids=kmeans_fit(matrix, dict_size, seed=seed))


def quantize(v, dictionary: Dictionary, n_w: int) -> VisualWordSet:
    """The `n_w` nearest visual words for one feature vector (soft assignment).

    Each selected word gets multiplicity 1. Equidistant centroids resolve
    toward the lower word id so quantization is deterministic.
    """
    if not 1 <= n_w <= dictionary.size:
        raise ValueError(f"n_w must be in [1, {dictionary.size}], got {n_w}")
    vec = as_feature_matrix(v)
    if vec.shape[1] != dictionary.dim:
        raise ValueError(f"dimension mismatch: vector has {vec.shape[1]}, dictionary has {dictionary.dim}")
    d2 = pairwise_sq_distances(vec, dictionary.centroids.vectors)[0]
    order = np.lexsort((np.arange(dictionary.size), d2))
    return VisualWordSet(multiplicity={int(w): 1 for w in order[:n_w]})


def accumulate_stats(frame_word_sets: Iterable[VisualWordSet]) -> CorpusStats:
    """Fold a stream of frame word sets into corpus document frequencies.

    Document frequency uses set semantics: a frame counts once per word it
    contains, regardless of multiplicity.
    """
    n_frames = 0
    doc_freq: Counter[int] = Counter()
    total = 0
    for word_set in frame_word_sets:
        n_frames += 1
        doc_freq.update(word_set.multiplicity.keys())
        total += sum(word_set.multiplicity.values())
    return CorpusStats(n_frames=n_frames, doc_freq=dict(doc_freq), total_occurrences=total)


def word_weight(tf: int, word: int, stats: CorpusStats) -> float:
    """TF-IDF weight of one word: tf * (ln((N+1)/(N(w)+1)) + 1).

    The +1 smoothing keeps query-only words (document frequency 0) weighted,
    and a word present in every frame bottoms out at idf exactly 1.
    """
    if tf < 1:
        raise ValueError(f"tf must be >= 1 (absent words carry no weight), got {tf}")
    if stats.n_frames < 1:
        raise ValueError("corpus stats must cover at least one frame")
    n = stats.n_frames
    df = stats.frames_containing(word)
    return tf * (math.log((n + 1) / (df + 1)) + 1.0)


def weigh_doc(
    words: VisualWordSet,
    stats: CorpusStats,
    mode: WeightingMode = "per_document",
    doc_id: object = None,
) -> WeightedWordDoc:
    """Weigh one document's words under the chosen frequency mode.

    per_document: tf is the word's occurrence count inside this document.
    global: tf collapses to 1, so a word weighs the same in every document.
    """
    if mode not in MODES:
        raise ValueError(f"unknown weighting mode {mode!r}")
    weights = {
        word: word_weight(count if mode == "per_document" else 1, word, stats)
        for word, count in words.multiplicity.items()
    }
    return WeightedWordDoc.build(doc_id=doc_id, weights=weights)
