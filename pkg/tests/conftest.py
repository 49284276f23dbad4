import random
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

from logkdecomp.hypergraph import Hypergraph, load_hyperbench

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = Path(__file__).resolve().parent / "fixtures"
DESK = ROOT / "corpus" / "desk"
SCALING = ROOT / "corpus" / "scaling"

sys.path.insert(0, str(Path(__file__).resolve().parent))


def build(edge_lists, name="H") -> Hypergraph:
    return Hypergraph.from_edges([[str(v) for v in e] for e in edge_lists], name)


def random_edge_lists(rng: random.Random, max_edges=8, max_vertices=10, arity=(2, 4)):
    nv = rng.randint(arity[1], max_vertices)
    ne = rng.randint(1, max_edges)
    return [rng.sample(range(nv), rng.randint(*arity)) for _ in range(ne)]


@st.composite
def edge_lists(draw, max_edges=8, max_vertices=10, min_arity=1, max_arity=4):
    nv = draw(st.integers(max_arity, max_vertices))
    vert = st.integers(0, nv - 1)
    edge = st.lists(vert, min_size=min_arity, max_size=max_arity, unique=True)
    return draw(st.lists(edge, min_size=1, max_size=max_edges))


@st.composite
def hypergraphs(draw, **kw):
    return build(draw(edge_lists(**kw)))


TRIANGLE = [["a", "b"], ["b", "c"], ["c", "a"]]


def cycle(n):
    return build([[f"v{i}", f"v{(i + 1) % n}"] for i in range(n)], f"cycle_{n}")


def chain(n):
    return build([[f"v{i}", f"v{i + 1}"] for i in range(n)], f"chain_{n}")


@pytest.fixture(scope="session")
def q5():
    return load_hyperbench(FIXTURES / "q5.hg")


@pytest.fixture(scope="session")
def desk_corpus():
    return [load_hyperbench(p) for p in sorted(DESK.glob("*.hg"))]


_CRITERIA: dict = {}


def record_criterion(n: int, ok: bool, detail: str):
    _CRITERIA[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
