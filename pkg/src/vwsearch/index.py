"""The weighted visual-word inverted index and its durable artifact format.

Posting lists are sorted by weight descending (ties by ascending document id)
so a searcher can consume them with monotone frontiers; the documents table
gives O(1) random access to any cluster document's full record. The on-disk
artifact is little-endian, sectioned, versioned, and ends with a whole-file
SHA-256 checksum; loads reject version mismatches, truncation, and corruption
with distinct error categories.
"""

from __future__ import annotations

import hashlib
import os
import struct
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .bovw import CorpusStats, Dictionary, WeightedWordDoc
from .clustering import Centroids
from .frame_clusters import FrameCluster

__all__ = [
    "Posting",
    "PostingList",
    "DocRecord",
    "InvertedIndex",
    "build_index",
    "save_index",
    "load_index",
    "IndexArtifactError",
    "IndexFormatError",
    "IndexVersionError",
    "IndexTruncatedError",
    "IndexChecksumError",
]

MAGIC = b"VWIX"
FORMAT_VERSION = 1
_MODE_CODES = {"per_document": 0, "global": 1}
_MODE_NAMES = {code: name for name, code in _MODE_CODES.items()}


class IndexArtifactError(Exception):
    """Base class for unusable index artifacts."""


class IndexFormatError(IndexArtifactError):
    """Bad magic or structurally inconsistent content."""


class IndexVersionError(IndexArtifactError):
    """Artifact written by an unsupported format version."""


class IndexTruncatedError(IndexArtifactError):
    """Artifact ends before its declared content does."""


class IndexChecksumError(IndexArtifactError):
    """Artifact bytes do not match their recorded checksum."""


@dataclass(frozen=True)
class Posting:
    doc_id: int
    weight: float


@dataclass
class PostingList:
    """One word's postings, weight-descending, stored as parallel arrays."""

    word: int
    doc_ids: list[int]
    weights: list[float]

    def __len__(self) -> int:
        return len(self.doc_ids)

    def posting(self, position: int) -> Posting:
        return Posting(doc_id=self.doc_ids[position], weight=self.weights[position])


@dataclass(frozen=True)
class DocRecord:
    """Full record of one indexed cluster document."""

    doc_id: int
    video_id: int
    cluster_id: int
    total_weight: float
    weights: Mapping[int, float]


@dataclass
class InvertedIndex:
    """Immutable-after-build index: posting lists plus document/video metadata."""

    dictionary: Dictionary
    stats: CorpusStats
    mode: str
    quantize_words: int
    lists: dict[int, PostingList]
    docs: list[DocRecord]
    videos: dict[int, str] = field(default_factory=dict)

    @property
    def n_docs(self) -> int:
        return len(self.docs)

    def sorted_access(self, word: int, position: int) -> Posting | None:
        """Posting at `position` of `word`'s list, or None past the end.

        A word with no postings behaves as an empty list.
        """
        plist = self.lists.get(word)
        if plist is None or position >= len(plist):
            return None
        return plist.posting(position)

    def random_access(self, doc_id: int) -> DocRecord:
        """Full document record by id; unknown ids are rejected."""
        if not 0 <= doc_id < len(self.docs):
            raise KeyError(f"unknown doc_id {doc_id}")
        return self.docs[doc_id]

    def video_name(self, video_id: int) -> str:
        return self.videos.get(video_id, f"video-{video_id}")

    def validate(self) -> None:
        """Full-scan structural check; raises IndexFormatError on any breach."""
        n_postings = 0
        for word, plist in self.lists.items():
            if word != plist.word:
                raise IndexFormatError(f"posting list keyed {word} claims word {plist.word}")
            if len(plist.doc_ids) != len(plist.weights) or not plist.doc_ids:
                raise IndexFormatError(f"word {word}: malformed or empty posting list")
            prev: tuple[float, int] | None = None
            seen: set[int] = set()
            for doc_id, weight in zip(plist.doc_ids, plist.weights):
                if not weight > 0.0:
                    raise IndexFormatError(f"word {word}: non-positive posting weight {weight}")
                if doc_id in seen:
                    raise IndexFormatError(f"word {word}: duplicate posting for doc {doc_id}")
                seen.add(doc_id)
                key = (-weight, doc_id)
                if prev is not None and key < prev:
                    raise IndexFormatError(f"word {word}: postings out of order at doc {doc_id}")
                prev = key
                if not 0 <= doc_id < len(self.docs):
                    raise IndexFormatError(f"word {word}: posting references unknown doc {doc_id}")
                if self.docs[doc_id].weights.get(word) != weight:
                    raise IndexFormatError(f"doc {doc_id} and posting list disagree on word {word}")
                n_postings += 1
        for doc in self.docs:
            total = sum(doc.weights.values())
            if abs(total - doc.total_weight) > 1e-9 * max(1.0, abs(total)):
                raise IndexFormatError(f"doc {doc.doc_id}: cached total_weight drifted")
        if n_postings != sum(len(doc.weights) for doc in self.docs):
            raise IndexFormatError("posting lists and docs table cover different (doc, word) pairs")


def build_index(
    clusters: Sequence[FrameCluster],
    dictionary: Dictionary,
    stats: CorpusStats,
    mode: str = "per_document",
    video_names: Mapping[int, str] | None = None,
    quantize_words: int = 1,
) -> InvertedIndex:
    """Assemble the index from weighted cluster documents.

    Document ids are assigned densely in (video_id, cluster_id) order so
    rebuilds from identical inputs are identical artifacts.
    """
    if mode not in _MODE_CODES:
        raise ValueError(f"unknown weighting mode {mode!r}")
    keyed: dict[tuple[int, int], FrameCluster] = {}
    for cluster in clusters:
        if cluster.doc is None:
            raise ValueError(f"cluster {cluster.video_id}/{cluster.cluster_id} has no document attached")
        key = (cluster.video_id, cluster.cluster_id)
        if key in keyed:
            raise ValueError(f"duplicate cluster identity {key}")
        keyed[key] = cluster

    docs: list[DocRecord] = []
    by_word: dict[int, list[tuple[float, int]]] = {}
    for doc_id, key in enumerate(sorted(keyed)):
        cluster = keyed[key]
        doc = cluster.doc
        assert doc is not None
        docs.append(
            DocRecord(
                doc_id=doc_id,
                video_id=cluster.video_id,
                cluster_id=cluster.cluster_id,
                total_weight=doc.total_weight,
                weights=dict(doc.weights),
            )
        )
        for word, weight in doc.weights.items():
            by_word.setdefault(word, []).append((weight, doc_id))

    lists: dict[int, PostingList] = {}
    for word in sorted(by_word):
        entries = sorted(by_word[word], key=lambda entry: (-entry[0], entry[1]))
        lists[word] = PostingList(
            word=word,
            doc_ids=[doc_id for _, doc_id in entries],
            weights=[weight for weight, _ in entries],
        )

    names = dict(video_names) if video_names else {}
    videos = {doc.video_id: names.get(doc.video_id, f"video-{doc.video_id}") for doc in docs}
    index = InvertedIndex(
        dictionary=dictionary,
        stats=stats,
        mode=mode,
        quantize_words=quantize_words,
        lists=lists,
        docs=docs,
        videos=dict(sorted(videos.items())),
    )
    index.validate()
    return index


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def _pack_str(text: str) -> bytes:
    raw = text.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise ValueError("name too long for artifact format")
    return struct.pack("<H", len(raw)) + raw


def save_index(index: InvertedIndex, destination) -> None:
    """Serialize the index; the write is atomic (temp file + rename)."""
    out = bytearray()
    out += MAGIC
    out += struct.pack("<IBI", FORMAT_VERSION, _MODE_CODES[index.mode], index.quantize_words)

    cent = index.dictionary.centroids
    out += struct.pack("<IId", cent.k, cent.dim, cent.inertia)
    out += np.ascontiguousarray(cent.vectors, dtype="<f8").tobytes()

    stats = index.stats
    out += struct.pack("<QQI", stats.n_frames, stats.total_occurrences, len(stats.doc_freq))
    for word in sorted(stats.doc_freq):
        out += struct.pack("<IQ", word, stats.doc_freq[word])

    out += struct.pack("<I", len(index.videos))
    for video_id in sorted(index.videos):
        out += struct.pack("<I", video_id) + _pack_str(index.videos[video_id])

    out += struct.pack("<I", len(index.docs))
    for doc in index.docs:
        out += struct.pack("<IIdI", doc.video_id, doc.cluster_id, doc.total_weight, len(doc.weights))
        for word in sorted(doc.weights):
            out += struct.pack("<Id", word, doc.weights[word])

    out += struct.pack("<I", len(index.lists))
    for word in sorted(index.lists):
        plist = index.lists[word]
        out += struct.pack("<II", word, len(plist))
        for doc_id, weight in zip(plist.doc_ids, plist.weights):
            out += struct.pack("<Id", doc_id, weight)

    out += hashlib.sha256(out).digest()

    path = os.fspath(destination)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(out)
    os.replace(tmp, path)


class _Reader:
    """Cursor over artifact bytes that turns short reads into truncation errors."""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int) -> bytes:
        end = self.offset + size
        if end > len(self.data):
            raise IndexTruncatedError(
                f"artifact ends at byte {len(self.data)}, needed {end} (section at offset {self.offset})"
            )
        chunk = self.data[self.offset : end]
        self.offset = end
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def load_index(source) -> InvertedIndex:
    """Parse and validate an index artifact written by save_index."""
    with open(os.fspath(source), "rb") as fh:
        data = fh.read()

    reader = _Reader(data)
    magic = reader.take(4)
    if magic != MAGIC:
        raise IndexFormatError(f"bad magic {magic!r} at byte 0, expected {MAGIC!r}")
    version, mode_code, quantize_words = reader.unpack("<IBI")
    if version != FORMAT_VERSION:
        raise IndexVersionError(f"unsupported artifact version {version}, expected {FORMAT_VERSION}")
    if mode_code not in _MODE_NAMES:
        raise IndexFormatError(f"unknown weighting-mode code {mode_code}")

    k, dim, inertia = reader.unpack("<IId")
    raw = reader.take(8 * k * dim)
    vectors = np.frombuffer(raw, dtype="<f8").reshape(k, dim).astype(np.float64)
    dictionary = Dictionary(centroids=Centroids(vectors=vectors, inertia=inertia, inertia_history=()))

    n_frames, total_occurrences, n_df = reader.unpack("<QQI")
    doc_freq: dict[int, int] = {}
    for _ in range(n_df):
        word, count = reader.unpack("<IQ")
        doc_freq[word] = count
    stats = CorpusStats(n_frames=n_frames, doc_freq=doc_freq, total_occurrences=total_occurrences)

    (n_videos,) = reader.unpack("<I")
    videos: dict[int, str] = {}
    for _ in range(n_videos):
        (video_id,) = reader.unpack("<I")
        (name_len,) = reader.unpack("<H")
        raw_name = reader.take(name_len)
        try:
            videos[video_id] = raw_name.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise IndexFormatError(f"video {video_id}: undecodable name bytes: {exc}") from exc

    (n_docs,) = reader.unpack("<I")
    docs: list[DocRecord] = []
    for doc_id in range(n_docs):
        video_id, cluster_id, total_weight, n_words = reader.unpack("<IIdI")
        weights: dict[int, float] = {}
        for _ in range(n_words):
            word, weight = reader.unpack("<Id")
            weights[word] = weight
        docs.append(
            DocRecord(
                doc_id=doc_id,
                video_id=video_id,
                cluster_id=cluster_id,
                total_weight=total_weight,
                weights=weights,
            )
        )

    (n_lists,) = reader.unpack("<I")
    lists: dict[int, PostingList] = {}
    for _ in range(n_lists):
        word, n_entries = reader.unpack("<II")
        doc_ids: list[int] = []
        weights_list: list[float] = []
        for _ in range(n_entries):
            doc_id, weight = reader.unpack("<Id")
            doc_ids.append(doc_id)
            weights_list.append(weight)
        lists[word] = PostingList(word=word, doc_ids=doc_ids, weights=weights_list)

    digest = reader.take(32)
    if reader.offset != len(data):
        raise IndexFormatError(f"{len(data) - reader.offset} unexpected trailing bytes")
    if hashlib.sha256(data[: len(data) - 32]).digest() != digest:
        raise IndexChecksumError("artifact checksum mismatch")

    index = InvertedIndex(
        dictionary=dictionary,
        stats=stats,
        mode=_MODE_NAMES[mode_code],
        quantize_words=quantize_words,
        lists=lists,
        docs=docs,
        videos=videos,
    )
    try:
        index.validate()
    except IndexFormatError:
        raise
    return index
