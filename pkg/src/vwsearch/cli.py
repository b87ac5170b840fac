"""Command-line surface: build, query, synth, verify, bench.

Output is line-oriented `name key=value ...` records so runs diff cleanly.
Exit codes: 0 success, 2 usage error (argparse), 3 malformed input data,
4 verification failure, 5 missing input file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import search as search_mod
from .bench import plot_report, render_report, run_benchmark
from .bovw import quantize, weigh_doc
from .features_io import FeatureFileError, Manifest, feature_files_in, read_feature_file
from .index import IndexArtifactError, InvertedIndex, load_index, save_index
from .pipeline import BuildConfig, build_corpus_index, load_corpus_dir
from .search import QuerySpec
from .synth import SynthConfig, generate_corpus

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_VERIFY = 4
EXIT_MISSING = 5


def _load_query_doc(index: InvertedIndex, query_path):
    dim, records = read_feature_file(query_path)
    if not records:
        raise FeatureFileError(f"{query_path}: query file has no records")
    if dim != index.dictionary.dim:
        raise FeatureFileError(
            f"{query_path}: query dim {dim} does not match index dim {index.dictionary.dim}"
        )
    if len(records) > 1:
        print(
            f"warning: {query_path} has {len(records)} records; using the first, ignoring the rest",
            file=sys.stderr,
        )
    words = quantize(records[0].vector, index.dictionary, index.quantize_words)
    return weigh_doc(words, index.stats, mode=index.mode, doc_id=str(query_path))


def cmd_build(args) -> int:
    manifest = Manifest.load(args.manifest)
    frames_by_video = load_corpus_dir(args.features, manifest)
    config = BuildConfig(
        dict_size=args.dict_size,
        quantize_words=args.quantize_words,
        clusters_per_video=args.clusters_per_video,
        frame_docs=args.frame_docs,
        mode=args.mode,
        seed=args.seed,
    )
    index, summary = build_corpus_index(frames_by_video, manifest.videos, config)
    save_index(index, args.out)
    print(f"videos {summary.videos}")
    print(f"frames {summary.frames}")
    print(f"docs {summary.docs}")
    print(f"words {summary.words}")
    print(f"artifact {args.out}")
    return EXIT_OK


def cmd_query(args) -> int:
    index = load_index(args.index)
    doc = _load_query_doc(index, args.query)
    spec = QuerySpec(doc=doc, k=args.k, xi=args.xi, epsilon=args.epsilon)
    result = search_mod.brute_force_videos(index, spec) if args.exact else search_mod.topk_videos(index, spec)
    for rank, hit in enumerate(result.videos, start=1):
        print(
            f"result rank={rank} video={index.video_name(hit.video_id)} score={hit.score:.6f} "
            f"cluster={hit.cluster_id} matched={hit.matched_words}"
        )
    stats = result.stats
    print(
        f"stats sorted_accesses={stats.sorted_accesses} random_accesses={stats.random_accesses} "
        f"candidates={stats.candidates_seen} full_scores={stats.full_scores_computed}"
    )
    return EXIT_OK


def cmd_synth(args) -> int:
    config = SynthConfig(
        videos=args.videos,
        frames_per_video=args.frames_per_video,
        scenes_per_video=args.scenes,
        dim=args.dim,
        queries=args.queries,
        noise=args.noise,
        seed=args.seed,
    )
    planted = generate_corpus(config, args.out)
    print(f"corpus videos={config.videos} frames={config.videos * config.frames_per_video} dim={config.dim}")
    print(f"queries {len(planted)}")
    print(f"out {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    index = load_index(args.index)
    xi_grid = [int(x) for x in args.xi_grid.split(",") if x]
    if not xi_grid:
        raise ValueError("empty xi grid")
    query_files = feature_files_in(args.queries)
    comparisons = 0
    failures = 0
    for path in query_files:
        doc = _load_query_doc(index, path)
        for xi in xi_grid:
            spec = QuerySpec(doc=doc, k=args.k, xi=xi)
            got, _ = search_mod.threshold_search(index, spec)
            want, _ = search_mod.brute_force_search(index, spec)
            comparisons += 1
            ok = len(got) == len(want) and all(
                g.doc_id == w.doc_id and abs(g.score - w.score) <= 1e-9 for g, w in zip(got, want)
            )
            if not ok:
                failures += 1
                print(f"diverged query={path.name} xi={xi}")
    status = "pass" if failures == 0 else "fail"
    print(f"verify queries={len(query_files)} xis={len(xi_grid)} comparisons={comparisons} status={status}")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def cmd_bench(args) -> int:
    index = load_index(args.index)
    query_files = feature_files_in(args.workload)
    if not query_files:
        raise FeatureFileError(f"{args.workload}: benchmark workload is empty")
    queries = [(path.name, _load_query_doc(index, path)) for path in query_files]
    report = run_benchmark(index, queries, k=args.k, xi=args.xi, repetitions=args.repetitions, exact=args.exact)
    print(render_report(report))
    if args.plot:
        if plot_report(report, args.plot):
            print(f"plot {args.plot}")
        else:
            print("plot skipped (matplotlib unavailable)", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vwsearch", description="Visual-word video retrieval engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an index artifact from feature files")
    p.add_argument("--features", required=True, help="directory of .cvw feature files")
    p.add_argument("--manifest", required=True, help="manifest JSON path")
    p.add_argument("--out", required=True, help="output index artifact path")
    p.add_argument("--dict-size", type=int, default=256)
    p.add_argument("--quantize-words", type=int, default=5, help="visual words per frame")
    p.add_argument("--clusters-per-video", type=int, default=0, help="0 selects the automatic policy")
    p.add_argument("--frame-docs", action="store_true", help="index frames individually instead of clusters")
    p.add_argument("--mode", choices=["per_document", "global"], default="per_document")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="run a top-k query from a feature file")
    p.add_argument("--index", required=True)
    p.add_argument("--query", required=True, help="feature file; first record is the query image")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--xi", type=int, default=8)
    p.add_argument("--epsilon", type=float, default=None, help="minimum similarity for a video to count")
    p.add_argument("--exact", action="store_true", help="use the exhaustive engine instead of the index search")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("synth", help="generate a synthetic scene corpus with planted queries")
    p.add_argument("--out", required=True)
    p.add_argument("--videos", type=int, default=40)
    p.add_argument("--frames-per-video", type=int, default=60)
    p.add_argument("--scenes", type=int, default=4, help="scenes per video")
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--queries", type=int, default=20)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="check the index search against the exhaustive oracle")
    p.add_argument("--index", required=True)
    p.add_argument("--queries", required=True, help="directory of query feature files")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--xi-grid", default="1,4,16")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time a query workload against an index")
    p.add_argument("--index", required=True)
    p.add_argument("--workload", required=True, help="directory of query feature files")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--xi", type=int, default=8)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--plot", default=None, help="write a latency plot to this path (best effort)")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: missing input: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (FeatureFileError, IndexArtifactError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
