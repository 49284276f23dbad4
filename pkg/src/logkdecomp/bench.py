"""Exact-width driver and benchmark runner."""
from __future__ import annotations

import csv
import io
import logging
import statistics
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Union

from .decomposition import DecompNode, EdgeCover, HDFragment, single_node
from .engine import Decision, SearchConfig, decide_hw_le_k
from .hypergraph import Hypergraph, gyo_acyclic, join_tree, load_hyperbench

log = logging.getLogger(__name__)

CSV_HEADER = ["instance", "vertices", "edges", "status", "hw", "total_ms", "workers", "metric", "threshold"]
TIME_COLUMNS = ("total_ms",)


@dataclass(frozen=True)
class Unknown:
    """Width bounds when the search did not finish; ``upper`` is None if no
    decomposition was found at all."""

    lower: int
    upper: Optional[int] = None


@dataclass
class WidthResult:
    hw: Union[int, Unknown]
    witness: Optional[HDFragment] = None
    per_k_outcomes: list = field(default_factory=list)  # (k, Decision, seconds)
    acyclic: Optional[bool] = None
    max_depth: int = 0  # deepest engine recursion over all k tried

    @property
    def exact(self) -> bool:
        return isinstance(self.hw, int)

    @property
    def status(self) -> str:
        if self.exact:
            return "solved"
        if any(d is Decision.TIMED_OUT for _, d, _ in self.per_k_outcomes):
            return "timeout"
        return "unbounded"


def join_tree_hd(H: Hypergraph) -> HDFragment:
    """Width-1 HD whose nodes are the edges of a join tree."""
    if H.num_edges == 0:
        return single_node(0, ())
    parent = join_tree(H)
    kids: dict = {}
    root = None
    for e, p in parent.items():
        if p is None:
            root = e
        else:
            kids.setdefault(p, []).append(e)

    def build(e: int) -> DecompNode:
        return DecompNode(H.edges[e], EdgeCover((e,)),
                          tuple(build(c) for c in sorted(kids.get(e, ()))))

    return HDFragment(build(root), 1)


def compute_hw(H: Hypergraph, kmin: int = 1, kmax: int = 10,
               cfg: Optional[SearchConfig] = None) -> WidthResult:
    """Smallest k in ``[kmin, kmax]`` with ``hw(H) <= k``.

    ``kmin`` is taken as a known lower bound.  ``cfg.timeout`` is a budget
    for the whole width search, not per k.
    """
    if not 1 <= kmin <= kmax:
        raise ValueError("need 1 <= kmin <= kmax")
    cfg = cfg or SearchConfig(k=kmin)
    t0 = time.perf_counter()
    res = WidthResult(hw=Unknown(kmin))
    if gyo_acyclic(H):
        res.acyclic = True
        res.hw = 1
        res.witness = join_tree_hd(H)
        res.per_k_outcomes.append((1, Decision.YES, time.perf_counter() - t0))
        return res
    res.acyclic = False
    res.per_k_outcomes.append((1, Decision.NO, time.perf_counter() - t0))

    lower = max(kmin, 2)
    for k in range(lower, kmax + 1):
        budget = 0.0
        if cfg.timeout:
            budget = cfg.timeout - (time.perf_counter() - t0)
            if budget <= 0:
                res.hw = Unknown(lower)
                res.per_k_outcomes.append((k, Decision.TIMED_OUT, 0.0))
                return res
        out = decide_hw_le_k(H, replace(cfg, k=k, timeout=budget))
        res.per_k_outcomes.append((k, out.decided, out.stats.wall_time))
        res.max_depth = max(res.max_depth, out.stats.max_recursion_depth)
        log.debug("%s k=%d -> %s (%.3fs)", H.name, k, out.decided.value, out.stats.wall_time)
        if out.decided is Decision.YES:
            res.hw = k
            res.witness = out.witness
            return res
        if out.decided is Decision.TIMED_OUT:
            res.hw = Unknown(lower)
            return res
        lower = k + 1
    res.hw = Unknown(lower)
    return res


@dataclass
class BenchRecord:
    instance: str
    vertices: int
    edges: int
    status: str  # solved, timeout, unbounded, error
    hw: Optional[int]
    total_ms: float
    per_k_ms: list = field(default_factory=list)
    workers: int = 1
    metric: str = "off"
    threshold: Optional[float] = None
    witness: Optional[HDFragment] = None

    def row(self) -> list[str]:
        return [
            self.instance,
            str(self.vertices),
            str(self.edges),
            self.status,
            "" if self.hw is None else str(self.hw),
            f"{self.total_ms:.3f}",
            str(self.workers),
            self.metric,
            "" if self.threshold is None else f"{self.threshold:g}",
        ]


def instance_files(directory) -> list[Path]:
    return sorted((p for p in Path(directory).iterdir() if p.is_file() and not p.name.startswith(".")),
                  key=lambda p: p.name)


def bench_instance(path: Path, cfg: SearchConfig, kmax: int = 10) -> BenchRecord:
    hyb = cfg.hybrid
    metric = "off" if hyb is None else hyb.metric.value
    threshold = None if hyb is None else hyb.threshold
    t0 = time.perf_counter()
    try:
        H = load_hyperbench(path)
    except (ValueError, OSError) as exc:  # parse errors, bad encoding, unreadable file
        log.warning("%s: %s", path.name, exc)
        return BenchRecord(path.stem, 0, 0, "error", None, (time.perf_counter() - t0) * 1000,
                           workers=cfg.workers, metric=metric, threshold=threshold)
    res = compute_hw(H, 1, kmax, cfg)
    return BenchRecord(
        H.name, H.num_vertices, H.num_edges, res.status,
        res.hw if res.exact else None,
        (time.perf_counter() - t0) * 1000,
        [(k, d.value, s * 1000) for k, d, s in res.per_k_outcomes],
        cfg.workers, metric, threshold, res.witness,
    )


def write_csv(records, out) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row())
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text)
    return text


def collect(directory, cfg: SearchConfig, kmax: int = 10) -> list[BenchRecord]:
    return [bench_instance(p, cfg, kmax) for p in instance_files(directory)]


def run_benchmark(directory, cfg: SearchConfig, out=None, kmax: int = 10) -> str:
    """Run :func:`compute_hw` on every instance (name order), return the CSV
    text and write it to ``out`` if given."""
    return write_csv(collect(directory, cfg, kmax), out)


def summarize(records) -> dict:
    """Mean and median total time over solved instances."""
    times = [r.total_ms for r in records if r.status == "solved"]
    return {
        "instances": len(records),
        "solved": len(times),
        "mean_ms": statistics.fmean(times) if times else 0.0,
        "median_ms": statistics.median(times) if times else 0.0,
    }


def strip_time_columns(csv_text: str) -> str:
    rows = list(csv.reader(io.StringIO(csv_text)))
    drop = [CSV_HEADER.index(c) for c in TIME_COLUMNS]
    return "\n".join(",".join(v for i, v in enumerate(r) if i not in drop) for r in rows)
