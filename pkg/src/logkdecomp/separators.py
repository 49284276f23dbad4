"""Enumeration of lambda-label candidates and balance verdicts."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .hypergraph import EdgeSet, ExtendedComp, Hypergraph, VertexSet, iter_bits


@dataclass(frozen=True)
class CandidateSpace:
    """All edge sets S with ``1 <= |S| <= k`` drawn from ``allowed``.

    ``must_intersect_edges``: S must contain at least one of these edges.
    ``must_intersect_vertices``: every member of S must touch these vertices;
    evaluating it needs the hypergraph, so spaces carrying it are built with
    :meth:`for_hypergraph`.
    """

    allowed: EdgeSet
    k: int
    must_intersect_edges: Optional[EdgeSet] = None
    must_intersect_vertices: Optional[VertexSet] = None
    edge_vertices: Optional[Sequence[VertexSet]] = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.must_intersect_vertices is not None and self.edge_vertices is None:
            raise ValueError("a vertex filter needs the edge vertex sets")

    @classmethod
    def for_hypergraph(cls, H: Hypergraph, allowed: EdgeSet, k: int,
                       must_intersect_edges: Optional[EdgeSet] = None,
                       must_intersect_vertices: Optional[VertexSet] = None) -> "CandidateSpace":
        return cls(allowed, k, must_intersect_edges, must_intersect_vertices, H.edges)

    def pool(self) -> list[int]:
        ids = list(iter_bits(self.allowed))
        if self.must_intersect_vertices is not None:
            ev = self.edge_vertices
            mv = self.must_intersect_vertices
            ids = [e for e in ids if ev[e] & mv]
        return ids


def enumerate_candidates(space: CandidateSpace) -> Iterator[tuple[int, ...]]:
    """Candidates in canonical order: by size, then lexicographically.

    Each candidate is a sorted tuple of edge ids.
    """
    pool = space.pool()
    need = space.must_intersect_edges
    if need is None:
        for r in range(1, space.k + 1):
            yield from itertools.combinations(pool, r)
        return
    if not pool or not any((need >> e) & 1 for e in pool):
        return
    is_new = [(need >> e) & 1 for e in pool]
    n = len(pool)
    for r in range(1, space.k + 1):
        if r > n:
            break
        for idx in itertools.combinations(range(n), r):
            for i in idx:
                if is_new[i]:
                    yield tuple(pool[j] for j in idx)
                    break


def partition_space(space: CandidateSpace, n_workers: int) -> list[Iterator[tuple[int, ...]]]:
    """Split the canonical stream into ``n_workers`` strided sub-streams.

    Worker ``i`` gets the candidates whose ordinal is congruent to ``i``
    modulo ``n_workers``.  Each sub-stream is an independent iterator.
    """
    if n_workers < 1:
        raise ValueError("n_workers must be positive")
    return [itertools.islice(enumerate_candidates(space), i, None, n_workers)
            for i in range(n_workers)]


@dataclass(frozen=True)
class AllSmall:
    pass


@dataclass(frozen=True)
class Oversized:
    index: int


BalanceVerdict = AllSmall | Oversized


def oversized_index(part_size: int, sizes: Sequence[int]) -> int:
    """Index of the component with ``2*size > part_size``, or -1."""
    for i, s in enumerate(sizes):
        if 2 * s > part_size:
            return i
    return -1


def balance_verdict(part_size: int, comps: Sequence[ExtendedComp]) -> BalanceVerdict:
    """``Oversized(i)`` if component ``i`` holds more than half of the part."""
    i = oversized_index(part_size, [c.size for c in comps])
    return AllSmall() if i < 0 else Oversized(i)
