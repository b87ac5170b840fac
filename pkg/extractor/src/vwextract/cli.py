"""Command-line extraction: media files in, feature files + manifest out.

Exit codes: 0 success, 2 usage error, 3 extraction/decoding failure,
5 missing input file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .feature_file import FILE_SUFFIX, write_feature_file, write_manifest
from .model import MODEL_DIMS, load_embedder
from .video import ExtractionError, extract_image, extract_video

VIDEO_SUFFIXES = {".mp4", ".avi", ".mov", ".mkv", ".webm"}
IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp"}

EXIT_OK = 0
EXIT_DATA = 3
EXIT_MISSING = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vwextract", description="CNN feature extraction for video retrieval")
    parser.add_argument("inputs", nargs="+", help="video or image files")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--interval", type=float, default=1.0, help="seconds between sampled frames")
    parser.add_argument("--model", choices=sorted(MODEL_DIMS), default="alexnet")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    for path in args.inputs:
        if not Path(path).exists():
            print(f"error: missing input: {path}", file=sys.stderr)
            return EXIT_MISSING

    embedder = load_embedder(args.model)
    videos: dict[int, str] = {}
    try:
        for video_id, raw in enumerate(args.inputs):
            source = Path(raw)
            suffix = source.suffix.lower()
            if suffix in VIDEO_SUFFIXES:
                records = extract_video(source, video_id, args.interval, embedder)
            elif suffix in IMAGE_SUFFIXES:
                records = [
                    rec.__class__(video_id=video_id, frame_index=rec.frame_index,
                                  timestamp=rec.timestamp, vector=rec.vector)
                    for rec in extract_image(source, embedder)
                ]
            else:
                print(f"error: {source}: unsupported file type {suffix!r}", file=sys.stderr)
                return EXIT_DATA
            target = out_dir / f"{video_id:04d}_{source.stem}{FILE_SUFFIX}"
            write_feature_file(target, embedder.dim, records)
            videos[video_id] = source.stem
            print(f"extracted file={target.name} records={len(records)} dim={embedder.dim}")
    except (ExtractionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA

    write_manifest(out_dir / "manifest.json", videos, model=embedder.name, interval_seconds=args.interval)
    print(f"manifest {out_dir / 'manifest.json'} model={embedder.name}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
