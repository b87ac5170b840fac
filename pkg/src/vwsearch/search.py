"""Top-k retrieval: similarity scoring, threshold-algorithm search, oracles.

Similarity between two weighted word documents is a weighted Jaccard ratio:
sum of min weights over shared words divided by sum of max weights over the
union. `threshold_search` answers exact top-k queries by consuming posting
lists in weight order with batched sorted accesses, admissible per-document
upper bounds, and random access only for documents that could still enter
the result; `brute_force_search` is the exhaustive oracle it must match,
including tie order. `topk_videos` lifts cluster results to video results.

Documents that share no words with the query score zero and are never
returned by either search path, so the two are comparable result-for-result.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .bovw import WeightedWordDoc
from .index import InvertedIndex

__all__ = [
    "QuerySpec",
    "CandidateState",
    "SearchStats",
    "DocHit",
    "VideoHit",
    "QueryResult",
    "vis_sim",
    "sim_video",
    "upper_bound",
    "threshold_search",
    "brute_force_search",
    "topk_videos",
    "brute_force_videos",
]


@dataclass(frozen=True)
class QuerySpec:
    """One query: weighted words plus k, the batch size, and an optional cutoff."""

    doc: WeightedWordDoc
    k: int = 10
    xi: int = 8
    epsilon: float | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.xi < 1:
            raise ValueError(f"xi must be >= 1, got {self.xi}")
        if self.epsilon is not None and not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")


@dataclass
class CandidateState:
    """Bookkeeping for one partially seen document during a search."""

    doc_id: int
    matched_weight: float = 0.0
    seen_lists: set[int] = field(default_factory=set)
    exact_score: float | None = None


@dataclass
class SearchStats:
    """Access counters for one query run."""

    sorted_accesses: int = 0
    random_accesses: int = 0
    candidates_seen: int = 0
    full_scores_computed: int = 0

    def merge(self, other: "SearchStats") -> None:
        self.sorted_accesses += other.sorted_accesses
        self.random_accesses += other.random_accesses
        self.candidates_seen += other.candidates_seen
        self.full_scores_computed += other.full_scores_computed


@dataclass(frozen=True)
class DocHit:
    doc_id: int
    score: float


@dataclass(frozen=True)
class VideoHit:
    video_id: int
    score: float
    cluster_id: int
    matched_words: int


@dataclass
class QueryResult:
    """Ranked videos (scores non-increasing, ties by ascending video id)."""

    videos: list[VideoHit]
    stats: SearchStats


def _sim_maps(qw: Mapping[int, float], dw: Mapping[int, float]) -> float:
    # paired accumulation keeps num <= den in floating point (rounding is
    # monotone), so the ratio never leaves [0, 1] and identical maps hit 1.0
    if len(qw) > len(dw):
        qw, dw = dw, qw
    num = 0.0
    den = 0.0
    for word, wa in qw.items():
        wb = dw.get(word)
        if wb is None:
            den += wa
        elif wa < wb:
            num += wa
            den += wb
        else:
            num += wb
            den += wa
    if num == 0.0:
        return 0.0
    for word, wb in dw.items():
        if word not in qw:
            den += wb
    return num / den


def vis_sim(q: WeightedWordDoc, d: WeightedWordDoc) -> float:
    """Weighted Jaccard similarity in [0, 1]; 1 iff the weight maps coincide."""
    return _sim_maps(q.weights, d.weights)


def sim_video(q: WeightedWordDoc, cluster_docs: Sequence[WeightedWordDoc]) -> float:
    """Similarity of a query to a video: the best of its cluster documents."""
    if not cluster_docs:
        raise ValueError("a video must have at least one cluster document")
    return max(vis_sim(q, doc) for doc in cluster_docs)


def upper_bound(c: CandidateState, q: QuerySpec, frontiers: Mapping[int, float]) -> float:
    """Admissible over-estimate of a partially seen document's final score.

    Seen query words already contribute their exact min term through
    `matched_weight`; every unseen query word can contribute at most
    min(query weight, that list's frontier weight), and the true denominator
    is at least the query's total weight. Exhausted or absent lists have
    frontier 0.
    """
    total = q.doc.total_weight
    if total <= 0.0:
        return 0.0
    unseen = 0.0
    for word, wq in q.doc.weights.items():
        if word not in c.seen_lists:
            frontier = frontiers.get(word, 0.0)
            unseen += wq if wq < frontier else frontier
    return (c.matched_weight + unseen) / total


def brute_force_search(index: InvertedIndex, q: QuerySpec) -> tuple[list[DocHit], SearchStats]:
    """Exhaustive oracle: score every document, keep the positive top-k.

    Ties break by ascending doc_id. Documents sharing no word with the query
    are dropped, matching the threshold search's reachable set.
    """
    stats = SearchStats()
    qw = q.doc.weights
    q_total = q.doc.total_weight
    scored: list[tuple[float, int]] = []
    for rec in index.docs:
        stats.random_accesses += 1
        stats.full_scores_computed += 1
        score = _sim_maps(qw, rec.weights)
        if score > 0.0:
            scored.append((-score, rec.doc_id))
    stats.candidates_seen = index.n_docs
    scored.sort()
    return [DocHit(doc_id=doc_id, score=-neg) for neg, doc_id in scored[: q.k]], stats


def threshold_search(index: InvertedIndex, q: QuerySpec) -> tuple[list[DocHit], SearchStats]:
    """Exact top-k cluster documents via batched sorted access over posting lists.

    One posting list is consumed per distinct query word present in the index,
    xi entries per list per round. Each sighting accrues min(query weight,
    posting weight) into the document's matched weight. After each round a
    bounded number of candidates (prioritized by accumulated matched weight)
    are fetched by random access, each only if its admissible upper bound says
    it could still displace the current k-th result (score ties resolve toward
    the lower doc_id, so the comparison is on (bound, doc_id)). The sorted
    phase stops once the frontier threshold falls strictly below the k-th
    score, or when every list is exhausted; a final sweep then random-accesses
    the remaining candidates in descending bound order until none can enter.

    Results are identical to brute_force_search, ties included.
    """
    stats = SearchStats()
    qw = q.doc.weights
    q_total = q.doc.total_weight
    if not qw or q_total <= 0.0:
        return [], stats

    words = sorted(word for word in qw if word in index.lists)
    m = len(words)
    if m == 0:
        return [], stats

    wq = [qw[word] for word in words]
    list_ids = [index.lists[word].doc_ids for word in words]
    list_ws = [index.lists[word].weights for word in words]
    lens = [len(ids) for ids in list_ids]
    ptr = [0] * m

    # candidate state: doc_id -> [matched weight, set of seen list indexes]
    cand: dict[int, list] = {}
    scored: dict[int, float] = {}
    # min(query weight, frontier weight) per consulted list; refreshed each round
    mf = [wq[i] if wq[i] < list_ws[i][0] else list_ws[i][0] for i in range(m)]
    tau_num = sum(mf)
    # lazy max-heap prioritizing candidates by accumulated matched weight;
    # matched only grows and every growth pushes a fresh entry, so an entry
    # disagreeing with the live value is simply dead
    cand_heap: list[tuple[float, int]] = []
    # min-heap of up to k results as (score, -doc_id): root is the weakest
    result: list[tuple[float, int]] = []
    docs = index.docs
    k = q.k

    def current_bound(state: list, doc_id: int) -> float:
        # admissible: seen lists contribute their exact min terms, unseen
        # lists at most min(query weight, frontier), and the true denominator
        # is at least max(query total, document total); the document total is
        # cheap per-document metadata and prunes large documents early
        s = state[0] + tau_num
        for i in state[1]:
            s -= mf[i]
        d_total = docs[doc_id].total_weight
        return s / (d_total if d_total > q_total else q_total)

    def beats_weakest(bound: float, doc_id: int) -> bool:
        if len(result) < k:
            return True
        weakest_score, weakest_neg_id = result[0]
        return bound > weakest_score or (bound == weakest_score and doc_id < -weakest_neg_id)

    def random_access(doc_id: int) -> None:
        score = _sim_maps(qw, docs[doc_id].weights)
        scored[doc_id] = score
        stats.random_accesses += 1
        stats.full_scores_computed += 1
        if score <= 0.0:
            return
        entry = (score, -doc_id)
        if len(result) < k:
            heapq.heappush(result, entry)
        elif entry > result[0]:
            heapq.heapreplace(result, entry)

    heappush = heapq.heappush
    heappop = heapq.heappop
    while True:
        # sorted phase: xi accesses per consulted list
        for i in range(m):
            pos = ptr[i]
            end = pos + q.xi
            top = lens[i]
            if end > top:
                end = top
            if pos >= end:
                continue
            ids = list_ids[i]
            ws = list_ws[i]
            wqi = wq[i]
            while pos < end:
                doc_id = ids[pos]
                weight = ws[pos]
                pos += 1
                gain = wqi if wqi < weight else weight
                state = cand.get(doc_id)
                if state is None:
                    cand[doc_id] = [gain, {i}]
                    heappush(cand_heap, (-gain, doc_id))
                else:
                    state[0] += gain
                    state[1].add(i)
                    heappush(cand_heap, (-state[0], doc_id))
            stats.sorted_accesses += end - ptr[i]
            ptr[i] = end

        for i in range(m):
            if ptr[i] < lens[i]:
                frontier = list_ws[i][ptr[i]]
                mf[i] = wq[i] if wq[i] < frontier else frontier
            else:
                mf[i] = 0.0
        tau_num = sum(mf)

        # random-access step: fetch the strongest available candidates,
        # enough to fill the result heap plus one refinement fetch
        budget = k - len(result) + 1
        while cand_heap and budget > 0:
            neg_matched, doc_id = cand_heap[0]
            if doc_id in scored or -neg_matched != cand[doc_id][0]:
                heappop(cand_heap)  # dead entry: scored, or a fresher one exists
                continue
            if not beats_weakest(current_bound(cand[doc_id], doc_id), doc_id):
                # the strongest candidate cannot enter; weaker ones are left
                # for the final sweep, which re-checks everything
                break
            heappop(cand_heap)
            random_access(doc_id)
            budget -= 1

        if tau_num == 0.0:
            break  # every consulted list is exhausted
        if len(result) == k and tau_num / q_total < result[0][0]:
            break  # no unseen document can reach the current k-th score

    # final sweep in exact descending bound order over candidates that could
    # still displace a result; bounds are static now, the bar only rises
    remaining = [
        (-current_bound(state, doc_id), doc_id)
        for doc_id, state in cand.items()
        if doc_id not in scored
    ]
    remaining.sort()
    for neg_bound, doc_id in remaining:
        if not beats_weakest(-neg_bound, doc_id):
            break
        random_access(doc_id)

    stats.candidates_seen = len(cand)
    hits = sorted(result, key=lambda entry: (-entry[0], -entry[1]))
    return [DocHit(doc_id=-neg_id, score=score) for score, neg_id in hits], stats


def _group_by_video(
    index: InvertedIndex, qw: Mapping[int, float], hits: Sequence[DocHit]
) -> list[tuple[int, float, int, int]]:
    """Best (score, cluster, matched word count) per video, ranked for output."""
    best: dict[int, tuple[float, int, int]] = {}
    for hit in hits:
        rec = index.docs[hit.doc_id]
        current = best.get(rec.video_id)
        if current is None or hit.score > current[0] or (hit.score == current[0] and rec.cluster_id < current[1]):
            matched = sum(1 for word in qw if word in rec.weights)
            best[rec.video_id] = (hit.score, rec.cluster_id, matched)
    ranked = sorted(best.items(), key=lambda item: (-item[1][0], item[0]))
    return [(video_id, score, cluster_id, matched) for video_id, (score, cluster_id, matched) in ranked]


def topk_videos(index: InvertedIndex, q: QuerySpec) -> QueryResult:
    """Top-k videos for a query; per-video score is its best cluster score.

    Drives the cluster-level threshold search with an internal result count
    that doubles until the k-th video score strictly exceeds the score of the
    last cluster examined (no unexamined cluster can then change the video
    ranking) or the corpus is exhausted. With epsilon set, videos scoring
    below it are dropped from the final ranking, which may shorten it.
    """
    stats = SearchStats()
    n_docs = index.n_docs
    if not q.doc.weights or n_docs == 0:
        return QueryResult(videos=[], stats=stats)

    k_inner = q.k
    while True:
        hits, round_stats = threshold_search(index, QuerySpec(doc=q.doc, k=k_inner, xi=q.xi))
        stats.merge(round_stats)
        exhausted = len(hits) < k_inner or k_inner >= n_docs
        ranked = _group_by_video(index, q.doc.weights, hits)
        if exhausted:
            break
        boundary = hits[-1].score
        if len(ranked) >= q.k and ranked[q.k - 1][1] > boundary:
            break
        k_inner = min(k_inner * 2, n_docs)

    top = ranked[: q.k]
    if q.epsilon is not None:
        top = [row for row in top if row[1] >= q.epsilon]
    videos = [VideoHit(video_id=v, score=s, cluster_id=c, matched_words=mw) for v, s, c, mw in top]
    return QueryResult(videos=videos, stats=stats)


def brute_force_videos(index: InvertedIndex, q: QuerySpec) -> QueryResult:
    """Video-level oracle: exhaustively score all clusters, then group by video."""
    all_hits, stats = brute_force_search(index, QuerySpec(doc=q.doc, k=max(index.n_docs, 1), xi=q.xi))
    qw = q.doc.weights
    best: dict[int, tuple[float, int, int]] = {}
    for hit in all_hits:
        rec = index.docs[hit.doc_id]
        matched = len(set(qw) & set(rec.weights))
        current = best.get(rec.video_id)
        candidate = (hit.score, rec.cluster_id, matched)
        if current is None or (-current[0], current[1]) > (-hit.score, rec.cluster_id):
            best[rec.video_id] = candidate
    ranked = sorted(best.items(), key=lambda item: (-item[1][0], item[0]))[: q.k]
    videos = [
        VideoHit(video_id=video_id, score=score, cluster_id=cluster_id, matched_words=matched)
        for video_id, (score, cluster_id, matched) in ranked
        if q.epsilon is None or score >= q.epsilon
    ]
    return QueryResult(videos=videos, stats=stats)
