"""Hybrid switching metrics and the sequential top-down subsolver.

Subproblems that the chosen metric rates as simple are handed to a
det-k-style search: pick a lambda-label for the fragment root, split the part
into its components and recurse, with no balancedness requirement and with
memoisation of every (component, interface) outcome.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .cancel import CancelToken
from .decomposition import HDFragment, attach, single_node, special_leaf
from .hypergraph import (
    EdgeSet,
    ExtendedComp,
    Hypergraph,
    VertexSet,
    popcount,
    split_components,
    vertex_support,
)
from .separators import CandidateSpace, enumerate_candidates


class Metric(enum.Enum):
    EDGE_COUNT = "edgecount"
    REL_FILL = "relfill"


@dataclass(frozen=True)
class HybridConfig:
    metric: Metric = Metric.REL_FILL
    threshold: float = 400.0
    # Delegate on ``metric >= threshold`` instead of ``metric < threshold``.
    inverted: bool = False

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")


class EmptyPart(ValueError):
    pass


def metric_value(H: Hypergraph, part: ExtendedComp, k: int, metric: Metric) -> float:
    """EdgeCount: number of (special) edges.  RelFill: that number times
    ``k`` divided by the average (special) edge cardinality."""
    size = part.size
    if metric is Metric.EDGE_COUNT:
        return size
    if size == 0:
        raise EmptyPart("RelFill is undefined on an empty part")
    total = sum(popcount(H.edges[e]) for e in part.edge_ids)
    total += sum(popcount(s.vertices) for s in part.specials)
    return size * k / (total / size)


def should_delegate(H: Hypergraph, part: ExtendedComp, cfg: HybridConfig, k: int) -> bool:
    if part.size == 0:
        return False
    value = metric_value(H, part, k, cfg.metric)
    if cfg.inverted:
        return value >= cfg.threshold
    return value < cfg.threshold


# ---------------------------------------------------------------------------


FAILED = None


class SubsolverCache:
    """Outcome store keyed by (edges, special origin ids, conn, allowed).

    Keys are exact values, so dict equality is the collision check.  An entry
    may be written once; rewriting it with a different outcome is an error.
    """

    def __init__(self):
        self._store: dict[tuple, Optional[HDFragment]] = {}
        self.hits = 0

    @staticmethod
    def key(part: ExtendedComp, conn: VertexSet, allowed: EdgeSet) -> tuple:
        return (part.edges, tuple(s.origin_id for s in part.specials), conn, allowed)

    def lookup(self, key):
        """Return ``(found, outcome)``."""
        if key in self._store:
            self.hits += 1
            return True, self._store[key]
        return False, None

    def store(self, key, outcome: Optional[HDFragment]):
        if key in self._store and (self._store[key] is None) != (outcome is None):
            raise RuntimeError("conflicting subsolver cache entry")
        self._store.setdefault(key, outcome)

    def __len__(self):
        return len(self._store)


class _TopDown:
    def __init__(self, H: Hypergraph, k: int, cache: Optional[SubsolverCache],
                 token: Optional[CancelToken], prune: bool):
        self.H = H
        self.k = k
        self.cache = cache
        self.token = token
        self.prune = prune
        self.calls = 0
        self.candidates = 0

    def run(self, part: ExtendedComp, conn: VertexSet, allowed: EdgeSet) -> Optional[HDFragment]:
        self.calls += 1
        H, k = self.H, self.k
        ne = part.num_edges
        ns = len(part.specials)
        vpart = vertex_support(H, part)
        if ne <= k and ns == 0:
            return single_node(vpart, part.edge_ids)
        if ne == 0 and ns == 1:
            return special_leaf(part.specials[0])
        if ne == 0:
            return None

        key = None
        if self.cache is not None:
            key = SubsolverCache.key(part, conn, allowed)
            found, outcome = self.cache.lookup(key)
            if found:
                return outcome

        em = H.edges
        space = CandidateSpace.for_hypergraph(
            H, allowed, k, must_intersect_edges=part.edges,
            must_intersect_vertices=vpart if self.prune else None)
        result = None
        token = self.token
        for lam in enumerate_candidates(space):
            if token is not None:
                token.check()
            self.candidates += 1
            u = 0
            for e in lam:
                u |= em[e]
            if conn & ~u:
                continue
            chi = u & vpart
            subs = []
            for comp, sup in split_components(H, part, chi):
                frag = self.run(comp, sup & chi, allowed)
                if frag is None:
                    break
                subs.append(frag)
            else:
                covered = [s for s in part.specials if (s.vertices & ~chi) == 0]
                result = attach(chi, lam, covered, subs)
                break
        if self.cache is not None:
            self.cache.store(key, result)
        return result


def detk_decide(H: Hypergraph, part: ExtendedComp, conn: VertexSet, allowed: EdgeSet, k: int,
                cache: Optional[SubsolverCache] = None, ctx: Optional[CancelToken] = None,
                prune: bool = True) -> Optional[HDFragment]:
    """Top-down search for an HD fragment of ``(part, conn)`` of width <= k.

    lambda-labels come from ``allowed`` and must contain an edge of the part.
    Returns the fragment, or ``None`` if none exists.  Raises
    :class:`~logkdecomp.cancel.SearchCancelled` when ``ctx`` fires.
    ``prune=False`` also tries labels containing edges disjoint from the part
    (they never change the outcome; the oracle uses it to stay literal).
    """
    return _TopDown(H, k, cache, ctx, prune).run(part, conn, allowed)


# ---------------------------------------------------------------------------


UNBOUNDED = math.inf


class GuardExceeded(ValueError):
    pass


ORACLE_MAX_EDGES = 10


def oracle_hw(H: Hypergraph, kmax: int):
    """Exact hypertree width by exhaustive top-down search, or ``UNBOUNDED``
    if it exceeds ``kmax``.  Only for hypergraphs with at most 10 edges."""
    if H.num_edges > ORACLE_MAX_EDGES:
        raise GuardExceeded(f"oracle limited to {ORACLE_MAX_EDGES} edges, got {H.num_edges}")
    if H.num_edges == 0:
        return 1
    for k in range(1, kmax + 1):
        if detk_decide(H, H.full_part(), 0, H.all_edges, k, cache=None, prune=False) is not None:
            return k
    return UNBOUNDED
