"""Writer for the retrieval engine's binary feature-file format.

Layout (little-endian): magic "CVW1", version u32 = 1, dim u32, record count
u64, then per record video_id u32, frame_index u32, timestamp f32, dim * f32.
This is the cross-tool contract; the extractor owns only the writing side.
"""

from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

MAGIC = b"CVW1"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sIIQ")
FILE_SUFFIX = ".cvw"


@dataclass(frozen=True)
class FrameRecord:
    video_id: int
    frame_index: int
    timestamp: float
    vector: np.ndarray


def write_feature_file(path, dim: int, records: Sequence[FrameRecord]) -> None:
    """Serialize records; the write is atomic (temp file + rename)."""
    dtype = np.dtype([("video", "<u4"), ("frame", "<u4"), ("ts", "<f4"), ("vec", "<f4", (dim,))])
    packed = np.empty(len(records), dtype=dtype)
    for i, rec in enumerate(records):
        vec = np.asarray(rec.vector, dtype="<f4")
        if vec.shape != (dim,):
            raise ValueError(f"{path}: record {i} has shape {vec.shape}, expected ({dim},)")
        if not np.isfinite(vec).all():
            raise ValueError(f"{path}: record {i} contains non-finite values")
        packed[i] = (rec.video_id, rec.frame_index, np.float32(rec.timestamp), vec)
    payload = HEADER.pack(MAGIC, FORMAT_VERSION, dim, len(records)) + packed.tobytes()
    target = os.fspath(path)
    tmp = target + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(payload)
    os.replace(tmp, target)


def write_manifest(path, videos: dict[int, str], model: str, interval_seconds: float) -> None:
    payload = {
        "videos": {str(video_id): name for video_id, name in sorted(videos.items())},
        "model": model,
        "interval_seconds": interval_seconds,
    }
    target = Path(path)
    tmp = target.with_suffix(target.suffix + ".tmp")
    tmp.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    os.replace(tmp, target)
