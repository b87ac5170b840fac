"""Image-to-video retrieval over a TF-IDF weighted visual-word inverted index."""

from .bovw import (
    CorpusStats,
    Dictionary,
    VisualWordSet,
    WeightedWordDoc,
    accumulate_stats,
    build_dictionary,
    quantize,
    weigh_doc,
    word_weight,
)
from .clustering import Centroids, kmeans_assign, kmeans_fit, l2_distance_sq
from .frame_clusters import FrameCluster, FrameRef, cluster_doc, cluster_frames
from .index import InvertedIndex, Posting, PostingList, build_index, load_index, save_index
from .search import (
    QueryResult,
    QuerySpec,
    SearchStats,
    brute_force_search,
    brute_force_videos,
    sim_video,
    threshold_search,
    topk_videos,
    upper_bound,
    vis_sim,
)

__all__ = [
    "Centroids",
    "CorpusStats",
    "Dictionary",
    "FrameCluster",
    "FrameRef",
    "InvertedIndex",
    "Posting",
    "PostingList",
    "QueryResult",
    "QuerySpec",
    "SearchStats",
    "VisualWordSet",
    "WeightedWordDoc",
    "accumulate_stats",
    "build_dictionary",
    "build_index",
    "brute_force_search",
    "brute_force_videos",
    "cluster_doc",
    "cluster_frames",
    "kmeans_assign",
    "kmeans_fit",
    "l2_distance_sq",
    "load_index",
    "quantize",
    "save_index",
    "sim_video",
    "threshold_search",
    "topk_videos",
    "upper_bound",
    "vis_sim",
    "weigh_doc",
    "word_weight",
]

__version__ = "0.1.0"
