"""Shared fixtures: a synthetic constant-rate test clip and one embedder."""

from __future__ import annotations

import numpy as np
import pytest

cv2 = pytest.importorskip("cv2")

from vwextract.model import load_embedder

CLIP_FPS = 10.0
CLIP_SECONDS = 10
CLIP_SIZE = (96, 72)  # (width, height)


def write_clip(path, n_frames: int, fps: float = CLIP_FPS) -> None:
    """Deterministic MJPG clip whose frames are visually distinct."""
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"), fps, CLIP_SIZE)
    assert writer.isOpened()
    rng = np.random.default_rng(99)
    for i in range(n_frames):
        frame = np.zeros((CLIP_SIZE[1], CLIP_SIZE[0], 3), dtype=np.uint8)
        frame[:, :, 0] = (i * 23) % 256
        frame[:, :, 1] = 255 - (i * 7) % 256
        frame[:, :, 2] = rng.integers(0, 255)
        cv2.rectangle(frame, (5 + i % 40, 5), (30 + i % 40, 40), (255, 255, 255), -1)
        writer.write(frame)
    writer.release()


@pytest.fixture(scope="session")
def ten_second_clip(tmp_path_factory):
    path = tmp_path_factory.mktemp("clips") / "clip10s.avi"
    write_clip(path, n_frames=int(CLIP_FPS * CLIP_SECONDS))
    return path


@pytest.fixture(scope="session")
def embedder():
    return load_embedder("alexnet")
