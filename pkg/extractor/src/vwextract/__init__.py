"""Frame sampling and CNN feature extraction into retrieval feature files."""

from .feature_file import FrameRecord, write_feature_file, write_manifest
from .model import CnnEmbedder, load_embedder
from .video import ExtractionError, extract_image, extract_video, sample_times

__all__ = [
    "CnnEmbedder",
    "ExtractionError",
    "FrameRecord",
    "extract_image",
    "extract_video",
    "load_embedder",
    "sample_times",
    "write_feature_file",
    "write_manifest",
]

__version__ = "0.1.0"
