import random

import pytest
from hypothesis import given, settings

from conftest import TRIANGLE, build, chain, cycle, hypergraphs, random_edge_lists
from logkdecomp.decomposition import validate_extended_hd, validate_hd
from logkdecomp.engine import SearchConfig, decide_hw_le_k, decomp
from logkdecomp.hybrid import (
    UNBOUNDED,
    EmptyPart,
    GuardExceeded,
    HybridConfig,
    Metric,
    SubsolverCache,
    detk_decide,
    metric_value,
    oracle_hw,
    should_delegate,
)
from logkdecomp.hypergraph import ExtendedComp, Hypergraph, gyo_acyclic


def disjoint_edges(n, size):
    return build([[f"v{i}_{j}" for j in range(size)] for i in range(n)])


class TestMetrics:
    def test_edge_count(self):
        H = disjoint_edges(57, 2)
        assert metric_value(H, H.full_part(), 2, Metric.EDGE_COUNT) == 57

    def test_rel_fill(self):
        H = disjoint_edges(10, 4)
        assert metric_value(H, H.full_part(), 2, Metric.REL_FILL) == 5.0

    def test_rel_fill_empty(self):
        H = disjoint_edges(1, 2)
        with pytest.raises(EmptyPart):
            metric_value(H, ExtendedComp(0), 2, Metric.REL_FILL)

    def test_threshold_positive(self):
        with pytest.raises(ValueError):
            HybridConfig(threshold=0)


class TestDelegation:
    def test_relfill_small_delegates(self):
        H = disjoint_edges(10, 4)  # RelFill 5.0
        assert should_delegate(H, H.full_part(), HybridConfig(Metric.REL_FILL, 400), 2)

    def test_relfill_large_stays(self):
        # 900 edges of size 2 at k=2 give RelFill 900
        H = disjoint_edges(900, 2)
        assert metric_value(H, H.full_part(), 2, Metric.REL_FILL) == 900
        assert not should_delegate(H, H.full_part(), HybridConfig(Metric.REL_FILL, 400), 2)

    def test_edge_count(self):
        H = disjoint_edges(57, 2)
        assert not should_delegate(H, H.full_part(), HybridConfig(Metric.EDGE_COUNT, 40), 2)
        assert should_delegate(H, H.full_part(), HybridConfig(Metric.EDGE_COUNT, 40, inverted=True), 2)

    def test_empty_part_never_delegates(self):
        H = disjoint_edges(1, 2)
        assert not should_delegate(H, ExtendedComp(0), HybridConfig(), 2)


class TestSubsolver:
    def test_triangle(self):
        H = build(TRIANGLE)
        frag = detk_decide(H, H.full_part(), 0, H.all_edges, 2)
        assert frag is not None and validate_hd(H, frag, 2).valid
        assert detk_decide(H, H.full_part(), 0, H.all_edges, 1) is None

    def test_agrees_with_decomp(self):
        rng = random.Random(5)
        for _ in range(150):
            H = build(random_edge_lists(rng))
            for k in (1, 2, 3):
                a = detk_decide(H, H.full_part(), 0, H.all_edges, k)
                b = decomp(H, H.full_part(), 0, H.all_edges, SearchConfig(k=k))
                assert (a is None) == (b is None)
                if a is not None:
                    assert validate_extended_hd(H, H.full_part(), 0, a, k).valid

    def test_cache_on_off(self, desk_corpus):
        small = [H for H in desk_corpus if H.num_edges <= 24]
        assert small
        for H in small:
            for k in (2, 3):
                cache = SubsolverCache()
                on = detk_decide(H, H.full_part(), 0, H.all_edges, k, cache=cache)
                off = detk_decide(H, H.full_part(), 0, H.all_edges, k)
                assert (on is None) == (off is None), H.name
                assert len(cache) > 0


class TestOracle:
    @pytest.mark.parametrize("edges,hw", [
        ([["a", "b"], ["b", "c"], ["c", "d"]], 1),
        (TRIANGLE, 2),
        ([["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]], 2),
    ])
    def test_examples(self, edges, hw):
        assert oracle_hw(build(edges), 5) == hw

    def test_unbounded(self):
        assert oracle_hw(build(TRIANGLE), 1) == UNBOUNDED

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            oracle_hw(chain(11), 3)

    def test_empty(self):
        assert oracle_hw(Hypergraph("empty", (), (), ()), 3) == 1

    @settings(max_examples=200, deadline=None)
    @given(hypergraphs(max_edges=8, max_vertices=9, min_arity=2))
    def test_gyo_iff_width_one(self, H):
        assert gyo_acyclic(H) == (oracle_hw(H, 3) == 1)


@pytest.mark.parametrize("hybrid", [HybridConfig(Metric.REL_FILL, 400), HybridConfig(Metric.EDGE_COUNT, 40)])
def test_hybrid_end_to_end(desk_corpus, hybrid):
    picks = [H for H in desk_corpus if H.num_edges <= 24] + [cycle(8)]
    for H in picks:
        for k in (2, 3):
            pure = decide_hw_le_k(H, SearchConfig(k=k))
            mixed = decide_hw_le_k(H, SearchConfig(k=k, hybrid=hybrid))
            assert pure.decided is mixed.decided, H.name
            if mixed.yes:
                assert validate_hd(H, mixed.witness, k).valid
                assert mixed.witness.width <= k
            assert mixed.stats.subsolver_delegations > 0
