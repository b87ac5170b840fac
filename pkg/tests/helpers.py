"""Shared corpus builders for the search-level tests."""

from __future__ import annotations

import numpy as np

from vwsearch.bovw import CorpusStats, WeightedWordDoc
from vwsearch.frame_clusters import FrameCluster, FrameRef
from vwsearch.index import InvertedIndex, build_index
from vwsearch.synth import _placeholder_dictionary


def index_from_weight_maps(doc_weight_maps, videos_of=None, mode="per_document", dict_size=64) -> InvertedIndex:
    """Build an index straight from raw weight maps (one cluster doc each).

    `videos_of[i]` assigns doc i to a video; defaults to one video per doc.
    """
    clusters = []
    cluster_counter: dict[int, int] = {}
    for i, weights in enumerate(doc_weight_maps):
        video_id = videos_of[i] if videos_of is not None else i
        cluster_id = cluster_counter.get(video_id, 0)
        cluster_counter[video_id] = cluster_id + 1
        ref = FrameRef(video_id=video_id, frame_index=cluster_id, timestamp=0.0)
        clusters.append(
            FrameCluster(
                video_id=video_id,
                cluster_id=cluster_id,
                members=(ref,),
                doc=WeightedWordDoc.build((video_id, cluster_id), weights),
            )
        )
    stats = CorpusStats(n_frames=max(len(doc_weight_maps), 1), doc_freq={})
    return build_index(clusters, _placeholder_dictionary(dict_size), stats, mode=mode)


def random_weight_maps(rng: np.random.Generator, n_docs: int, vocab: int, min_words=2, max_words=12):
    maps = []
    for _ in range(n_docs):
        n_words = int(rng.integers(min_words, max_words + 1))
        words = rng.choice(vocab, size=min(n_words, vocab), replace=False)
        maps.append({int(w): float(rng.uniform(0.05, 4.0)) for w in words})
    return maps


def random_query_doc(rng: np.random.Generator, vocab: int, n_words: int, extra_vocab: int = 0):
    """A query weight map; extra_vocab allows words no document carries."""
    words = rng.choice(vocab + extra_vocab, size=min(n_words, vocab + extra_vocab), replace=False)
    return WeightedWordDoc.build("query", {int(w): float(rng.uniform(0.05, 4.0)) for w in words})
