"""Command-line front-end.

    logkdecomp --graph q.hg --width 2 --out hd.json
    logkdecomp --graph q.hg --exact --kmax 6 --format dot
    logkdecomp --bench corpus/desk --out results.csv

Exit codes: 0 decided or completed, 2 timeout, 3 input error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .bench import collect, compute_hw, summarize, write_csv
from .engine import Decision, SearchConfig, decide_hw_le_k
from .export import export_dot, export_json
from .hybrid import HybridConfig, Metric
from .hypergraph import load_hyperbench

EXIT_OK = 0
EXIT_TIMEOUT = 2
EXIT_INPUT = 3

log = logging.getLogger("logkdecomp")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as a timeout
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="logkdecomp", description="Hypertree width via balanced separators.")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--graph", type=Path, help="HyperBench-format hypergraph")
    mode.add_argument("--bench", type=Path, metavar="DIR", help="benchmark every instance in DIR")
    p.add_argument("--width", type=int, metavar="K", help="decide hw <= K")
    p.add_argument("--exact", action="store_true", help="compute the exact width")
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--timeout", type=float, default=3600, help="seconds, 0 for none")
    p.add_argument("--hybrid", choices=["edgecount", "relfill", "off"], default="relfill")
    p.add_argument("--threshold", type=float, default=400)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=["json", "dot"])
    p.add_argument("--reference", action="store_true", help="unoptimised search order")
    p.add_argument("--seed", type=int, help="accepted for compatibility; the search is deterministic")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _config(args, k: int) -> SearchConfig:
    hybrid = None
    if args.hybrid != "off":
        hybrid = HybridConfig(Metric(args.hybrid), args.threshold)
    return SearchConfig(k=k, workers=args.workers, timeout=args.timeout,
                        reference_mode=args.reference, hybrid=hybrid)


def _emit(args, H, hd):
    if hd is None or (args.out is None and args.format is None):
        return
    text = export_dot(H, hd) if args.format == "dot" else export_json(H, hd) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.kmax < 1 or args.workers < 1 or args.timeout < 0 or args.threshold <= 0:
        parser.error("--kmax, --workers and --threshold must be positive, --timeout non-negative")

    if args.bench is not None:
        if not args.bench.is_dir():
            parser.error(f"not a directory: {args.bench}")
        records = collect(args.bench, _config(args, 1), args.kmax)
        text = write_csv(records, args.out)
        if args.out is None:
            sys.stdout.write(text)
        s = summarize(records)
        print(f"solved {s['solved']}/{s['instances']}  mean {s['mean_ms']:.1f} ms  "
              f"median {s['median_ms']:.1f} ms", file=sys.stderr)
        return EXIT_OK

    if (args.width is None) == (not args.exact):
        parser.error("--graph needs exactly one of --width K or --exact")
    try:
        H = load_hyperbench(args.graph)
    except (ValueError, OSError) as exc:
        print(f"logkdecomp: cannot read {args.graph}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.width is not None:
        if args.width < 1:
            parser.error("--width must be at least 1")
        out = decide_hw_le_k(H, _config(args, args.width))
        print(f"{H.name}: hw <= {args.width}: {out.decided.value}  "
              f"({out.stats.wall_time:.3f}s, {out.stats.candidates_tried} candidates)")
        _emit(args, H, out.witness)
        return EXIT_TIMEOUT if out.decided is Decision.TIMED_OUT else EXIT_OK

    res = compute_hw(H, 1, args.kmax, _config(args, 1))
    if res.exact:
        print(f"{H.name}: hw = {res.hw}")
    elif res.status == "timeout":
        print(f"{H.name}: timeout, hw >= {res.hw.lower}")
    else:
        print(f"{H.name}: hw > {args.kmax}")
    for k, d, secs in res.per_k_outcomes:
        log.info("k=%d %s %.3fs", k, d.value, secs)
    _emit(args, H, res.witness)
    return EXIT_TIMEOUT if res.status == "timeout" else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
