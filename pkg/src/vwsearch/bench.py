"""Query benchmark harness: per-query latencies plus aggregate percentiles."""

from __future__ import annotations

import time
from dataclasses import dataclass
from statistics import median
from typing import Sequence

from .bovw import WeightedWordDoc
from .index import InvertedIndex
from .search import QuerySpec, SearchStats, brute_force_search, threshold_search

__all__ = ["QueryTiming", "BenchReport", "run_benchmark", "render_report", "plot_report"]


@dataclass(frozen=True)
class QueryTiming:
    query: str
    latency_ms: float
    sorted_accesses: int
    random_accesses: int
    full_scores: int


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[QueryTiming, ...]
    corpus_docs: int
    k: int
    xi: int
    repetitions: int
    exact: bool

    @property
    def latencies(self) -> list[float]:
        return [row.latency_ms for row in self.rows]

    @property
    def mean_ms(self) -> float:
        lat = self.latencies
        return sum(lat) / len(lat)

    @property
    def median_ms(self) -> float:
        return median(self.latencies)

    @property
    def p95_ms(self) -> float:
        ordered = sorted(self.latencies)
        rank = max(0, int(-(-0.95 * len(ordered) // 1)) - 1)  # ceil(0.95 n) - 1
        return ordered[rank]


def run_benchmark(
    index: InvertedIndex,
    queries: Sequence[tuple[str, WeightedWordDoc]],
    k: int = 10,
    xi: int = 8,
    repetitions: int = 3,
    exact: bool = False,
) -> BenchReport:
    """Time each query `repetitions` times after one untimed warm-up pass.

    The per-query row records the median latency over the repetitions; access
    counters come from a single run since they are deterministic.
    """
    if not queries:
        raise ValueError("benchmark workload is empty")
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    engine = brute_force_search if exact else threshold_search

    specs = [(name, QuerySpec(doc=doc, k=k, xi=xi)) for name, doc in queries]
    for _, spec in specs:  # warm-up, excluded from timings
        engine(index, spec)

    rows: list[QueryTiming] = []
    for name, spec in specs:
        stats: SearchStats | None = None
        samples: list[float] = []
        for _ in range(repetitions):
            start = time.perf_counter()
            _, stats = engine(index, spec)
            samples.append((time.perf_counter() - start) * 1000.0)
        assert stats is not None
        rows.append(
            QueryTiming(
                query=name,
                latency_ms=median(samples),
                sorted_accesses=stats.sorted_accesses,
                random_accesses=stats.random_accesses,
                full_scores=stats.full_scores_computed,
            )
        )
    return BenchReport(
        rows=tuple(rows), corpus_docs=index.n_docs, k=k, xi=xi, repetitions=repetitions, exact=exact
    )


def render_report(report: BenchReport) -> str:
    lines = [
        f"bench docs={report.corpus_docs} k={report.k} xi={report.xi} "
        f"repetitions={report.repetitions} engine={'brute' if report.exact else 'threshold'}"
    ]
    for row in report.rows:
        lines.append(
            f"query file={row.query} latency_ms={row.latency_ms:.3f} "
            f"sorted={row.sorted_accesses} random={row.random_accesses} full_scores={row.full_scores}"
        )
    lines.append(
        f"aggregate mean_ms={report.mean_ms:.3f} median_ms={report.median_ms:.3f} p95_ms={report.p95_ms:.3f}"
    )
    return "\n".join(lines)


def plot_report(report: BenchReport, path) -> bool:
    """Best-effort static latency plot; returns False when matplotlib is absent."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return False
    ordered = sorted(report.latencies)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ordered, marker=".", linestyle="-")
    ax.set_xlabel("query (sorted by latency)")
    ax.set_ylabel("latency (ms)")
    ax.set_title(f"{len(ordered)} queries, {report.corpus_docs} docs, k={report.k}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return True
