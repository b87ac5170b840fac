"""Fixed-interval frame sampling and feature extraction jobs."""

from __future__ import annotations

import math
from pathlib import Path

import cv2
import numpy as np

from .feature_file import FrameRecord
from .model import CnnEmbedder


class ExtractionError(Exception):
    """Input media that cannot be decoded or sampled."""


def sample_times(duration: float, interval: float) -> list[float]:
    """Sampling grid: t = 0, interval, ..., including t == duration.

    floor(duration / interval) + 1 points; the small epsilon absorbs float
    division noise so exact multiples stay included.
    """
    if interval <= 0:
        raise ValueError(f"interval must be > 0, got {interval}")
    if duration < 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    count = int(math.floor(duration / interval + 1e-9)) + 1
    return [j * interval for j in range(count)]


def extract_video(path, video_id: int, interval: float, embedder: CnnEmbedder) -> list[FrameRecord]:
    """Sample one frame every `interval` seconds and embed each sample.

    Record i carries frame_index i and the sample time as its timestamp.
    """
    capture = cv2.VideoCapture(str(path))
    try:
        if not capture.isOpened():
            raise ExtractionError(f"{path}: cannot open video")
        fps = capture.get(cv2.CAP_PROP_FPS)
        n_frames = int(capture.get(cv2.CAP_PROP_FRAME_COUNT))
        if fps <= 0 or n_frames <= 0:
            raise ExtractionError(f"{path}: undecodable video (fps={fps}, frames={n_frames})")
        duration = n_frames / fps
        times = sample_times(duration, interval)
        targets = [min(int(round(t * fps)), n_frames - 1) for t in times]

        wanted = sorted(set(targets))
        decoded: dict[int, np.ndarray] = {}
        position = 0
        for target in range(wanted[-1] + 1):
            ok, frame = capture.read()
            if not ok:
                raise ExtractionError(f"{path}: decode failed at frame {target}")
            if position < len(wanted) and target == wanted[position]:
                decoded[target] = frame
                position += 1
    finally:
        capture.release()

    frames = [decoded[idx] for idx in targets]
    vectors = embedder.embed(frames)
    return [
        FrameRecord(video_id=video_id, frame_index=i, timestamp=float(t), vector=vectors[i])
        for i, t in enumerate(times)
    ]


def extract_image(path, embedder: CnnEmbedder) -> list[FrameRecord]:
    """A single image treated as a one-frame video (id 0, index 0, t=0)."""
    image = cv2.imread(str(Path(path)))
    if image is None:
        raise ExtractionError(f"{path}: cannot decode image")
    vector = embedder.embed([image])[0]
    return [FrameRecord(video_id=0, frame_index=0, timestamp=0.0, vector=vector)]
