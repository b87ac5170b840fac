#!/usr/bin/env python3
"""Threshold search vs exhaustive search on a synthetic near-duplicate corpus.

Builds a word-level corpus (per-video vocabulary pools over a Zipf background),
runs document-derived queries through both engines, and reports latency and
access-count comparisons. No feature extraction involved; this isolates the
index and search layers.

Usage:
    python scripts/efficiency_experiment.py --docs 10000 --queries 50 --plot out.png
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from vwsearch.bovw import VisualWordSet, weigh_doc
from vwsearch.search import QuerySpec, brute_force_search, threshold_search
from vwsearch.synth import index_from_word_sets, zipf_word_groups


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=10_000)
    parser.add_argument("--dict-size", type=int, default=1024)
    parser.add_argument("--queries", type=int, default=50)
    parser.add_argument("--query-words", type=int, default=20)
    parser.add_argument("--k", type=int, default=10)
    parser.add_argument("--xi", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--plot", default=None, help="optional scatter plot path")
    args = parser.parse_args()

    print(f"building corpus: {args.docs} cluster docs, dictionary {args.dict_size}")
    groups = zipf_word_groups(
        args.docs,
        dict_size=args.dict_size,
        clusters_per_video=12,
        frames_per_cluster=(1, 3),
        words_per_frame=(14, 22),
        zipf_exponent=1.07,
        seed=args.seed,
        video_pool_draws=24,
        background_fraction=0.25,
    )
    index, stats = index_from_word_sets(groups, dict_size=args.dict_size)

    rng = np.random.default_rng(args.seed + 1)
    queries = []
    for i in range(args.queries):
        doc = index.docs[int(rng.integers(index.n_docs))]
        pool = list(doc.weights)
        rng.shuffle(pool)
        words = pool[: args.query_words]
        while len(words) < args.query_words:
            extra = int(rng.integers(args.dict_size))
            if extra not in words:
                words.append(extra)
        queries.append(weigh_doc(VisualWordSet.from_words(words), stats, doc_id=f"q{i}"))

    specs = [QuerySpec(doc=q, k=args.k, xi=args.xi) for q in queries]
    for spec in specs[: min(5, len(specs))]:  # warm-up
        threshold_search(index, spec)
        brute_force_search(index, spec)

    rows = []
    for spec in specs:
        t0 = time.perf_counter()
        got, st = threshold_search(index, spec)
        t_ms = (time.perf_counter() - t0) * 1000
        t0 = time.perf_counter()
        want, _ = brute_force_search(index, spec)
        b_ms = (time.perf_counter() - t0) * 1000
        agree = [h.doc_id for h in got] == [h.doc_id for h in want[: args.k]]
        rows.append((spec.doc.doc_id, t_ms, b_ms, st.sorted_accesses, st.full_scores_computed, agree))

    print(f"{'query':>6} {'idx ms':>8} {'brute ms':>9} {'sorted':>8} {'full':>6} {'match':>6}")
    for name, t_ms, b_ms, sa, fs, agree in rows:
        print(f"{name:>6} {t_ms:8.2f} {b_ms:9.2f} {sa:8d} {fs:6d} {str(agree):>6}")

    t_lat = sorted(r[1] for r in rows)
    b_lat = sorted(r[2] for r in rows)
    median_t = t_lat[len(t_lat) // 2]
    median_b = b_lat[len(b_lat) // 2]
    worst_full = max(r[4] for r in rows)
    print(
        f"\nmedians: index {median_t:.2f} ms vs exhaustive {median_b:.2f} ms "
        f"(speedup {median_b / median_t:.1f}x); worst full-score count {worst_full} "
        f"({worst_full / args.docs:.1%} of corpus); all rankings agree: {all(r[5] for r in rows)}"
    )

    if args.plot:
        try:
            import matplotlib

            matplotlib.use("Agg")
            import matplotlib.pyplot as plt
        except ImportError:
            print("plot skipped: matplotlib not installed", file=sys.stderr)
            return 0
        fig, ax = plt.subplots(figsize=(5, 5))
        ax.scatter([r[2] for r in rows], [r[1] for r in rows], s=14)
        lim = max(max(r[1] for r in rows), max(r[2] for r in rows)) * 1.05
        ax.plot([0, lim], [0, lim], linestyle="--", linewidth=1)
        ax.set_xlabel("exhaustive latency (ms)")
        ax.set_ylabel("index search latency (ms)")
        ax.set_title(f"{args.docs} docs, k={args.k}, xi={args.xi}")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)
        print(f"wrote {args.plot}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
