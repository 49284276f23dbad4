"""Regenerate the committed benchmark instances.

    python3 scripts/make_corpus.py [--root .]

Output is deterministic: every instance comes from a fixed family and seed.
"""
from __future__ import annotations

import argparse
import random
from pathlib import Path

from logkdecomp.hypergraph import Hypergraph, serialize_hyperbench


def cycle(n: int) -> Hypergraph:
    return Hypergraph.from_edges(
        {f"r{i}": [f"v{i}", f"v{(i + 1) % n}"] for i in range(n)}, f"cycle_{n}")


def chain(n: int) -> Hypergraph:
    return Hypergraph.from_edges(
        {f"r{i}": [f"v{i}", f"v{i + 1}"] for i in range(n)}, f"chain_{n}")


def grid(w: int, h: int) -> Hypergraph:
    edges = {}
    for i in range(w):
        for j in range(h):
            if i + 1 < w:
                edges[f"h{i}_{j}"] = [f"x{i}_{j}", f"x{i + 1}_{j}"]
            if j + 1 < h:
                edges[f"v{i}_{j}"] = [f"x{i}_{j}", f"x{i}_{j + 1}"]
    return Hypergraph.from_edges(edges, f"grid_{w}x{h}")


def query(n_atoms: int, n_cyclic: int, seed: int, arity=(2, 4)) -> Hypergraph:
    """Join-query shape: a random join tree of relations plus a few binary
    atoms between random existing variables, which close cycles."""
    rng = random.Random(seed)
    names = iter(f"y{i}" for i in range(10_000))
    atoms = [[next(names) for _ in range(rng.randint(*arity))]]
    while len(atoms) < n_atoms - n_cyclic:
        parent = rng.choice(atoms)
        shared = rng.sample(parent, rng.randint(1, min(2, len(parent))))
        a = max(rng.randint(*arity), len(shared) + 1)
        atoms.append(shared + [next(names) for _ in range(a - len(shared))])
    variables = sorted({v for a in atoms for v in a}, key=lambda v: int(v[1:]))
    for _ in range(n_cyclic):
        atoms.append(rng.sample(variables, 2))
    return Hypergraph.from_edges({f"q{i}": a for i, a in enumerate(atoms)},
                                 f"query_{n_atoms}_{n_cyclic}_s{seed}")


def banded_csp(n_vars: int, n_cons: int, band: int, seed: int) -> Hypergraph:
    """Ternary constraints over variables that lie within a sliding window."""
    rng = random.Random(seed)
    cons = {}
    seen = set()
    while len(cons) < n_cons:
        lo = rng.randrange(n_vars - band)
        scope = tuple(sorted(rng.sample(range(lo, lo + band + 1), 3)))
        if scope in seen:
            continue
        seen.add(scope)
        cons[f"c{len(cons)}"] = [f"x{v}" for v in scope]
    return Hypergraph.from_edges(cons, f"csp_{n_vars}_{n_cons}_b{band}_s{seed}")


def random_sparse(n_edges: int, n_vertices: int, seed: int) -> Hypergraph:
    rng = random.Random(seed)
    pool = [f"w{i}" for i in range(n_vertices)]
    return Hypergraph.from_edges(
        {f"e{i}": rng.sample(pool, rng.randint(2, 4)) for i in range(n_edges)},
        f"random_{n_edges}_{n_vertices}_s{seed}")


def wheel(n: int) -> Hypergraph:
    edges = {f"rim{i}": [f"v{i}", f"v{(i + 1) % n}"] for i in range(n)}
    edges.update({f"spoke{i}": ["hub", f"v{i}"] for i in range(n)})
    return Hypergraph.from_edges(edges, f"wheel_{n}")


def desk_instances() -> list[Hypergraph]:
    return [
        cycle(20), cycle(64), cycle(120),
        grid(4, 4), grid(3, 8), grid(4, 5),
        wheel(12), wheel(40),
        query(30, 0, 1), query(100, 0, 2),
        query(20, 2, 3), query(32, 3, 4), query(45, 4, 5), query(60, 5, 6),
        query(75, 5, 7), query(90, 6, 8), query(105, 6, 9), query(120, 7, 11),
        banded_csp(24, 22, 4, 1), banded_csp(40, 36, 4, 2), banded_csp(60, 50, 5, 3),
        random_sparse(20, 24, 1), random_sparse(22, 28, 2),
        random_sparse(24, 30, 3), random_sparse(26, 36, 4),
    ]


def q5() -> Hypergraph:
    """Join structure of TPC-H Q5 with equated variables merged."""
    return Hypergraph.from_edges({
        "customer": ["custkey", "nationkey"],
        "orders": ["custkey", "orderkey", "orderdate"],
        "lineitem": ["orderkey", "suppkey", "extendedprice", "discount"],
        "supplier": ["suppkey", "nationkey"],
        "nation": ["nationkey", "regionkey", "name"],
        "region": ["regionkey", "rname"],
    }, "q5")


# (instance, k) pairs whose single decision takes 10+ seconds on one worker
def scaling_instances() -> list[tuple[Hypergraph, int]]:
    return [(query(75, 5, 7), 2), (random_sparse(26, 36, 4), 3), (query(75, 5, 18), 2)]


def fixture_instances() -> list[Hypergraph]:
    return [cycle(6), chain(5), grid(3, 3)]


def write_all(hs, directory: Path):
    directory.mkdir(parents=True, exist_ok=True)
    for H in hs:
        (directory / f"{H.name}.hg").write_text(serialize_hyperbench(H))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--root", type=Path, default=Path(__file__).resolve().parent.parent)
    args = ap.parse_args(argv)
    write_all(desk_instances(), args.root / "corpus" / "desk")
    scaling = scaling_instances()
    write_all([H for H, _ in scaling], args.root / "corpus" / "scaling")
    lines = ["instance,k"] + [f"{H.name},{k}" for H, k in scaling]
    (args.root / "corpus" / "scaling_targets.csv").write_text("\n".join(lines) + "\n")
    write_all(fixture_instances(), args.root / "tests" / "fixtures" / "bench")
    write_all([q5()], args.root / "tests" / "fixtures")


if __name__ == "__main__":
    main()
