"""Balanced-separator search for hypertree decompositions (log-k-decomp).

Every recursive call works on an extended subhypergraph: a set of edges, a
sequence of special edges and an interface ``conn`` that the fragment root
must contain.  The search looks for a child node ``c`` whose label splits the
part into pieces of at most half its size, then either treats ``c`` as the
fragment root (when it covers ``conn``) or looks for a parent label that
pins down the bag of ``c``.  Because every recursive call at least halves the
part, the recursion depth is logarithmic in the number of edges.
"""
from __future__ import annotations

import enum
import itertools
import multiprocessing
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field, replace
from typing import Optional

from .cancel import CancelToken, SearchCancelled
from .decomposition import HDFragment, attach, single_node, special_leaf, stitch
from .hybrid import HybridConfig, SubsolverCache, detk_decide, should_delegate
from .hypergraph import (
    EdgeSet,
    ExtendedComp,
    Hypergraph,
    SpecialEdge,
    VertexSet,
    iter_bits,
    oversized_component,
    split_components,
    vertex_support,
)
from .separators import CandidateSpace, enumerate_candidates


class Decision(enum.Enum):
    YES = "yes"
    NO = "no"
    TIMED_OUT = "timeout"


class BaseCase(enum.Enum):
    ACCEPT_SINGLE_NODE = "single-node"
    ACCEPT_SPECIAL_LEAF = "special-leaf"
    REJECT_DEAD_END = "dead-end"
    CONTINUE = "continue"


class BalanceError(AssertionError):
    """A recursive call received a part larger than half its parent."""


@dataclass(frozen=True)
class SearchConfig:
    k: int
    workers: int = 1
    timeout: float = 0.0  # seconds, 0 = no limit
    parallel_recursion_threshold: int = 12
    reference_mode: bool = False
    hybrid: Optional[HybridConfig] = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass
class SearchStats:
    candidates_tried: int = 0
    recursive_calls: int = 0
    max_recursion_depth: int = 0
    wall_time: float = 0.0
    subsolver_delegations: int = 0

    def merge(self, other: "SearchStats"):
        self.candidates_tried += other.candidates_tried
        self.recursive_calls += other.recursive_calls
        self.max_recursion_depth = max(self.max_recursion_depth, other.max_recursion_depth)
        self.subsolver_delegations += other.subsolver_delegations


@dataclass
class SearchOutcome:
    decided: Decision
    witness: Optional[HDFragment] = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def yes(self) -> bool:
        return self.decided is Decision.YES


def depth_bound(size: int) -> int:
    """``ceil(log2(max(2, size))) + 2``."""
    return (max(2, size) - 1).bit_length() + 2


def base_case(part: ExtendedComp, k: int) -> BaseCase:
    ne = part.num_edges
    ns = len(part.specials)
    if ne <= k and ns == 0:
        return BaseCase.ACCEPT_SINGLE_NODE
    if ne == 0 and ns == 1:
        return BaseCase.ACCEPT_SPECIAL_LEAF
    if ne == 0 and ns > 1:
        return BaseCase.REJECT_DEAD_END
    return BaseCase.CONTINUE


class _Search:
    """State of one optimised search (one process, one k)."""

    def __init__(self, H: Hypergraph, cfg: SearchConfig, token: Optional[CancelToken] = None,
                 stride: Optional[tuple[int, int]] = None):
        self.H = H
        self.k = cfg.k
        self.cfg = cfg
        self.token = token or CancelToken()
        self.stride = stride
        self.stats = SearchStats()
        self.origins = itertools.count(1)
        self.cache = SubsolverCache() if cfg.hybrid is not None else None

    def top(self) -> Optional[HDFragment]:
        H = self.H
        part = H.full_part()
        return self.decomp(part, vertex_support(H, part), 0, H.all_edges, 1, None)

    def _touching(self, allowed: EdgeSet, vpart: VertexSet) -> EdgeSet:
        # Edges disjoint from the part never change components, bags or
        # interface checks; dropping them only removes redundant candidates.
        em = self.H.edges
        out = 0
        for e in iter_bits(allowed):
            if em[e] & vpart:
                out |= 1 << e
        return out

    def decomp(self, part: ExtendedComp, vpart: VertexSet, conn: VertexSet,
               allowed: EdgeSet, depth: int, parent_size: Optional[int]) -> Optional[HDFragment]:
        check = self.token.check
        check()
        stats = self.stats
        stats.recursive_calls += 1
        if depth > stats.max_recursion_depth:
            stats.max_recursion_depth = depth
        size = part.size
        if parent_size is not None and 2 * size > parent_size + 1:
            raise BalanceError(f"part of size {size} below a part of size {parent_size}")
        if conn & ~vpart:
            raise AssertionError("interface vertices outside the part")

        H, k = self.H, self.k
        bc = base_case(part, k)
        if bc is BaseCase.ACCEPT_SINGLE_NODE:
            return single_node(vpart, part.edge_ids)
        if bc is BaseCase.ACCEPT_SPECIAL_LEAF:
            return special_leaf(part.specials[0])
        if bc is BaseCase.REJECT_DEAD_END:
            return None
        hyb = self.cfg.hybrid
        if hyb is not None and should_delegate(H, part, hyb, k):
            stats.subsolver_delegations += 1
            return detk_decide(H, part, conn, allowed, k, self.cache, self.token)

        em = H.edges
        pool = self._touching(allowed, vpart)
        cands = enumerate_candidates(CandidateSpace(pool, k, must_intersect_edges=part.edges))
        if depth == 1 and self.stride is not None:
            i, n = self.stride
            cands = itertools.islice(cands, i, None, n)

        for lam_c in cands:
            check()
            stats.candidates_tried += 1
            u = 0
            for e in lam_c:
                u |= em[e]
            if oversized_component(H, part, u) is not None:
                continue

            if not conn & ~u:
                # lam_c covers the interface: c is the root of this fragment
                chi = u & vpart
                subs = []
                for comp, sup in split_components(H, part, u):
                    frag = self.decomp(comp, sup, sup & chi, allowed, depth + 1, size)
                    if frag is None:
                        break
                    subs.append(frag)
                else:
                    covered = [s for s in part.specials if not s.vertices & ~chi]
                    return attach(chi, lam_c, covered, subs)
                continue

            failed_lows: set = set()
            parents = enumerate_candidates(CandidateSpace(
                pool, k, must_intersect_edges=part.edges,
                must_intersect_vertices=u, edge_vertices=em))
            for lam_p in parents:
                check()
                stats.candidates_tried += 1
                p = 0
                for e in lam_p:
                    p |= em[e]
                found = oversized_component(H, part, p)
                if found is None:
                    continue
                low, vlow = found
                chi_c = u & vlow
                if vlow & conn & ~p:
                    continue
                if vlow & p & ~chi_c:
                    continue
                low_key = (low.edges, tuple(s.origin_id for s in low.specials))
                if low_key in failed_lows:
                    continue

                lower = []
                for comp, sup in split_components(H, low, chi_c):
                    frag = self.decomp(comp, sup, sup & chi_c, allowed, depth + 1, size)
                    if frag is None:
                        break
                    lower.append(frag)
                else:
                    special = SpecialEdge(chi_c, next(self.origins))
                    low_sp = set(low.specials)
                    up = ExtendedComp(part.edges & ~low.edges,
                                      tuple(s for s in part.specials if s not in low_sp) + (special,))
                    upper = self.decomp(up, vertex_support(H, up), conn,
                                        allowed & ~low.edges, depth + 1, size)
                    if upper is not None:
                        covered = [s for s in low.specials if not s.vertices & ~chi_c]
                        return stitch(upper, special, chi_c, lam_c, covered, lower)
                failed_lows.add(low_key)
        return None


class _ReferenceSearch:
    """Unoptimised variant: root guessed up front, parent-then-child order,
    no allowed-edge narrowing and no negative base case."""

    def __init__(self, H: Hypergraph, cfg: SearchConfig, token: Optional[CancelToken] = None):
        self.H = H
        self.k = cfg.k
        self.token = token or CancelToken()
        self.stats = SearchStats()
        self.origins = itertools.count(1)

    def labels(self):
        return enumerate_candidates(CandidateSpace(self.H.all_edges, self.k))

    def top(self) -> Optional[HDFragment]:
        H = self.H
        part = H.full_part()
        if part.size == 0:
            return single_node(0, ())
        for lam_r in self.labels():
            self.token.check()
            self.stats.candidates_tried += 1
            u = H.union_of(lam_r)
            subs = []
            for comp, sup in split_components(H, part, u):
                frag = self.decomp(comp, sup, sup & u, 1, None)
                if frag is None:
                    break
                subs.append(frag)
            else:
                return attach(u, lam_r, [], subs)
        return None

    def decomp(self, part: ExtendedComp, vpart: VertexSet, conn: VertexSet,
               depth: int, parent_size: Optional[int]) -> Optional[HDFragment]:
        check = self.token.check
        check()
        stats = self.stats
        stats.recursive_calls += 1
        stats.max_recursion_depth = max(stats.max_recursion_depth, depth)
        size = part.size
        if parent_size is not None and 2 * size > parent_size + 1:
            raise BalanceError(f"part of size {size} below a part of size {parent_size}")
        H, k = self.H, self.k
        if part.num_edges <= k and not part.specials:
            return single_node(vpart, part.edge_ids)
        if part.num_edges == 0 and len(part.specials) == 1:
            return special_leaf(part.specials[0])

        em = H.edges
        for lam_p in self.labels():
            check()
            stats.candidates_tried += 1
            p = H.union_of(lam_p)
            low = vlow = None
            for comp, sup in split_components(H, part, p):
                if 2 * comp.size > size:
                    low, vlow = comp, sup
                    break
            if low is None:
                continue
            if vlow & conn & ~p:
                continue
            for lam_c in self.labels():
                check()
                stats.candidates_tried += 1
                chi_c = 0
                for e in lam_c:
                    chi_c |= em[e]
                chi_c &= vlow
                if vlow & p & ~chi_c:
                    continue
                comps_c = split_components(H, low, chi_c)
                if any(2 * c.size > size for c, _ in comps_c):
                    continue
                lower = []
                for comp, sup in comps_c:
                    frag = self.decomp(comp, sup, sup & chi_c, depth + 1, size)
                    if frag is None:
                        break
                    lower.append(frag)
                else:
                    special = SpecialEdge(chi_c, next(self.origins))
                    low_sp = set(low.specials)
                    up = ExtendedComp(part.edges & ~low.edges,
                                      tuple(s for s in part.specials if s not in low_sp) + (special,))
                    upper = self.decomp(up, vertex_support(H, up), conn, depth + 1, size)
                    if upper is not None:
                        covered = [s for s in low.specials if not s.vertices & ~chi_c]
                        return stitch(upper, special, chi_c, lam_c, covered, lower)
        return None


# ---------------------------------------------------------------------------
# Public entry points


def _fresh_ids(part: ExtendedComp):
    # new special edges must not collide with the caller's
    return itertools.count(max((sp.origin_id for sp in part.specials), default=0) + 1)


def decomp(H: Hypergraph, part: ExtendedComp, conn: VertexSet, allowed: EdgeSet,
           cfg: SearchConfig, ctx: Optional[CancelToken] = None) -> Optional[HDFragment]:
    """One optimised search call on ``(part, conn)`` with label edges drawn
    from ``allowed``.  Raises :class:`SearchCancelled` if ``ctx`` fires.

    The returned fragment satisfies every fragment condition provided each
    allowed edge outside the part meets the part only inside ``conn``.  The
    top-level call and every recursive call keep that property.
    """
    s = _Search(H, cfg, ctx)
    s.origins = _fresh_ids(part)
    return s.decomp(part, vertex_support(H, part), conn, allowed, 1, None)


def decomp_reference(H: Hypergraph, part: ExtendedComp, conn: VertexSet,
                     cfg: SearchConfig, ctx: Optional[CancelToken] = None) -> Optional[HDFragment]:
    """Unoptimised counterpart of :func:`decomp` (test oracle)."""
    s = _ReferenceSearch(H, cfg, ctx)
    s.origins = _fresh_ids(part)
    return s.decomp(part, vertex_support(H, part), conn, 1, None)


_WORKER: tuple = ()


def _worker_init(H, cfg, event):
    global _WORKER
    _WORKER = (H, cfg, event)


def _worker_run(index: int, n: int, deadline: Optional[float]):
    H, cfg, event = _WORKER
    token = CancelToken(deadline, event)
    s = _Search(H, cfg, token, stride=(index, n))
    try:
        frag = s.top()
    except SearchCancelled:
        return "cancelled", None, s.stats, token.expired
    return "done", frag, s.stats, False


def _run_parallel(H: Hypergraph, cfg: SearchConfig, token: CancelToken, stats: SearchStats):
    """Split the outermost candidate loop into strided ranges, one per worker
    process.  The first worker that finds a fragment wins and the rest are
    cancelled through the shared event."""
    mp = multiprocessing.get_context("fork")
    event = mp.Event()
    n = cfg.workers
    witness = None
    timed_out = False
    with ProcessPoolExecutor(max_workers=n, mp_context=mp, initializer=_worker_init,
                             initargs=(H, cfg, event)) as ex:
        pending = {ex.submit(_worker_run, i, n, token.deadline) for i in range(n)}
        while pending:
            remaining = None
            if token.deadline is not None:
                remaining = max(0.0, token.deadline - time.monotonic()) + 1.0
            done, pending = wait(pending, timeout=remaining, return_when=FIRST_COMPLETED)
            if not done:
                timed_out = True
                event.set()
                break
            for fut in done:
                status, frag, st, expired = fut.result()
                stats.merge(st)
                if expired:
                    timed_out = True
                if frag is not None and witness is None:
                    witness = frag
                    event.set()
        for fut in pending:
            status, frag, st, expired = fut.result()
            stats.merge(st)
    if witness is not None:
        return witness, False
    return None, timed_out


def decide_hw_le_k(H: Hypergraph, cfg: SearchConfig) -> SearchOutcome:
    """Decide ``hw(H) <= cfg.k``; on success the outcome carries a witness HD."""
    t0 = time.perf_counter()
    token = CancelToken.with_timeout(cfg.timeout)
    stats = SearchStats()
    witness = None
    timed_out = False
    try:
        if cfg.reference_mode:
            s = _ReferenceSearch(H, cfg, token)
            try:
                witness = s.top()
            finally:
                stats.merge(s.stats)
        elif cfg.workers > 1 and H.num_edges >= cfg.parallel_recursion_threshold:
            witness, timed_out = _run_parallel(H, cfg, token, stats)
        else:
            s = _Search(H, cfg, token)
            try:
                witness = s.top()
            finally:
                stats.merge(s.stats)
    except SearchCancelled:
        timed_out = True
    stats.wall_time = time.perf_counter() - t0

    if not cfg.reference_mode and stats.max_recursion_depth > depth_bound(H.num_edges):
        raise BalanceError(f"recursion depth {stats.max_recursion_depth} exceeds "
                           f"{depth_bound(H.num_edges)} for {H.num_edges} edges")
    if witness is not None:
        return SearchOutcome(Decision.YES, witness, stats)
    if timed_out:
        return SearchOutcome(Decision.TIMED_OUT, None, stats)
    return SearchOutcome(Decision.NO, None, stats)


def with_k(cfg: SearchConfig, k: int) -> SearchConfig:
    return replace(cfg, k=k)
