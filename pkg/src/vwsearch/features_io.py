"""Binary feature files and the corpus manifest.

A feature file carries one fixed-dimension float32 vector per sampled frame:

    magic "CVW1" | version u32 | dim u32 | record count u64      (header, 20 bytes)
    then per record: video_id u32 | frame_index u32 | timestamp f32 | dim * f32

Everything is little-endian. Parse errors report the byte offset of the
problem so malformed files can be diagnosed per file. The manifest is a JSON
document mapping video ids to display names plus extractor provenance.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FeatureFileError",
    "FrameRecord",
    "write_feature_file",
    "read_feature_file",
    "feature_files_in",
    "Manifest",
]

MAGIC = b"CVW1"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sIIQ")
FILE_SUFFIX = ".cvw"


class FeatureFileError(Exception):
    """A feature file that cannot be parsed or written as specified."""


@dataclass(frozen=True)
class FrameRecord:
    """One frame's identity and float32 feature vector."""

    video_id: int
    frame_index: int
    timestamp: float
    vector: np.ndarray


def _record_dtype(dim: int) -> np.dtype:
    return np.dtype([("video", "<u4"), ("frame", "<u4"), ("ts", "<f4"), ("vec", "<f4", (dim,))])


def write_feature_file(path, dim: int, records: Sequence[FrameRecord]) -> None:
    if dim < 1:
        raise FeatureFileError(f"{path}: dim must be >= 1, got {dim}")
    packed = np.empty(len(records), dtype=_record_dtype(dim))
    for i, rec in enumerate(records):
        vec = np.asarray(rec.vector, dtype="<f4")
        if vec.shape != (dim,):
            raise FeatureFileError(f"{path}: record {i} has shape {vec.shape}, expected ({dim},)")
        if not np.isfinite(vec).all():
            raise FeatureFileError(f"{path}: record {i} contains non-finite values")
        packed[i] = (rec.video_id, rec.frame_index, np.float32(rec.timestamp), vec)
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, FORMAT_VERSION, dim, len(records)))
        fh.write(packed.tobytes())


def read_feature_file(path) -> tuple[int, list[FrameRecord]]:
    """Parse a feature file; returns (dim, records). Strict about every field."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < HEADER.size:
        raise FeatureFileError(f"{path}: truncated header, {len(data)} bytes at byte 0 (need {HEADER.size})")
    magic, version, dim, count = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FeatureFileError(f"{path}: bad magic {magic!r} at byte 0, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise FeatureFileError(f"{path}: unsupported version {version} at byte 4")
    if dim < 1:
        raise FeatureFileError(f"{path}: invalid dim {dim} at byte 8")
    dtype = _record_dtype(dim)
    expected = HEADER.size + count * dtype.itemsize
    if len(data) != expected:
        full = (len(data) - HEADER.size) // dtype.itemsize if len(data) > HEADER.size else 0
        offset = HEADER.size + min(full, count) * dtype.itemsize
        kind = "truncated" if len(data) < expected else "trailing bytes"
        raise FeatureFileError(
            f"{path}: {kind} at byte {offset}: header declares {count} records "
            f"({expected} bytes), file has {len(data)}"
        )
    rows = np.frombuffer(data, dtype=dtype, count=count, offset=HEADER.size)
    return dim, [
        FrameRecord(
            video_id=int(row["video"]),
            frame_index=int(row["frame"]),
            timestamp=float(row["ts"]),
            vector=row["vec"].copy(),
        )
        for row in rows
    ]


def feature_files_in(directory) -> list[Path]:
    """Feature files under a directory, sorted by name for reproducible ingestion."""
    return sorted(Path(directory).glob(f"*{FILE_SUFFIX}"))


@dataclass
class Manifest:
    """Video display names plus extractor provenance."""

    videos: dict[int, str] = field(default_factory=dict)
    model: str = "synthetic"
    interval_seconds: float = 1.0

    def save(self, path) -> None:
        payload = {
            "videos": {str(video_id): name for video_id, name in sorted(self.videos.items())},
            "model": self.model,
            "interval_seconds": self.interval_seconds,
        }
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Manifest":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
            videos = {int(video_id): str(name) for video_id, name in payload["videos"].items()}
            return cls(
                videos=videos,
                model=str(payload.get("model", "unknown")),
                interval_seconds=float(payload.get("interval_seconds", 1.0)),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise FeatureFileError(f"{path}: malformed manifest: {exc}") from exc
