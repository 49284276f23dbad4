"""Hypergraphs, extended subhypergraphs and [U]-components.

Vertex and edge ids are dense integers assigned at parse time.  Vertex sets
and edge sets are plain Python ints used as bitsets (bit ``i`` set means id
``i`` is a member), which keeps union/intersection/difference word-parallel.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

# Bitset aliases.  Kept as ints on purpose: the search spends most of its time
# in set algebra and wrapper objects cost more than they give.
VertexSet = int
EdgeSet = int


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the ids of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(ids: Iterable[int]) -> int:
    mask = 0
    for i in ids:
        mask |= 1 << i
    return mask


def popcount(mask: int) -> int:
    return mask.bit_count()


# ---------------------------------------------------------------------------
# Hypergraph


class HypergraphError(ValueError):
    pass


@dataclass(frozen=True)
class Hypergraph:
    """Immutable hypergraph over interned vertex/edge ids.

    ``edges[i]`` is the vertex bitset of edge ``i``.
    """

    name: str
    vertex_names: tuple[str, ...]
    edge_names: tuple[str, ...]
    edges: tuple[VertexSet, ...]

    def __post_init__(self):
        if len(self.edge_names) != len(self.edges):
            raise HypergraphError("edge_names and edges differ in length")
        if len(set(self.edge_names)) != len(self.edge_names):
            raise HypergraphError("duplicate edge name")
        if len(set(self.vertex_names)) != len(self.vertex_names):
            raise HypergraphError("duplicate vertex name")
        covered = 0
        for name, e in zip(self.edge_names, self.edges):
            if e == 0:
                raise HypergraphError(f"edge {name!r} is empty")
            covered |= e
        if covered != (1 << len(self.vertex_names)) - 1:
            raise HypergraphError("hypergraph has isolated or unknown vertices")

    @classmethod
    def from_edges(cls, edges: Mapping[str, Sequence[str]] | Sequence[Sequence[str]],
                   name: str = "H") -> "Hypergraph":
        """Build a hypergraph from named (or positional) vertex-name lists.

        Vertices are interned in first-occurrence order, edges keep their
        given order.  Positional edges are named ``e1, e2, ...``.
        """
        if isinstance(edges, Mapping):
            items = list(edges.items())
        else:
            items = [(f"e{i + 1}", vs) for i, vs in enumerate(edges)]
        index: dict[str, int] = {}
        masks = []
        for ename, vs in items:
            m = 0
            for v in vs:
                if v not in index:
                    index[v] = len(index)
                m |= 1 << index[v]
            masks.append(m)
        return cls(name, tuple(index), tuple(n for n, _ in items), tuple(masks))

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_names)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def all_edges(self) -> EdgeSet:
        return (1 << len(self.edges)) - 1

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertex_names)}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.edge_names)}

    def full_part(self) -> "ExtendedComp":
        return ExtendedComp(self.all_edges, ())

    def union_of(self, edge_ids: Iterable[int]) -> VertexSet:
        em = self.edges
        u = 0
        for i in edge_ids:
            u |= em[i]
        return u

    def vertex_labels(self, vs: VertexSet) -> list[str]:
        return sorted(self.vertex_names[i] for i in iter_bits(vs))

    def edge_labels(self, es: Iterable[int]) -> list[str]:
        return sorted(self.edge_names[i] for i in es)


# ---------------------------------------------------------------------------
# Special edges and extended subhypergraphs


@dataclass(frozen=True, eq=False)
class SpecialEdge:
    """A bag recorded as an interface edge.

    Identity is the ``origin_id``: two special edges with the same vertex set
    are still different special edges.
    """

    vertices: VertexSet
    origin_id: int

    def __post_init__(self):
        if self.vertices == 0:
            raise HypergraphError("special edge must be non-empty")

    def __eq__(self, other):
        if not isinstance(other, SpecialEdge):
            return NotImplemented
        return self.origin_id == other.origin_id

    def __hash__(self):
        return hash(("special", self.origin_id))

    def __repr__(self):
        return f"SpecialEdge(#{self.origin_id}, {bin(self.vertices)})"


@dataclass(frozen=True)
class ExtendedComp:
    """Edges (bitset over edge ids) plus special edges ordered by origin id."""

    edges: EdgeSet
    specials: tuple[SpecialEdge, ...] = ()

    def __post_init__(self):
        ids = [s.origin_id for s in self.specials]
        if ids != sorted(ids):
            object.__setattr__(self, "specials",
                               tuple(sorted(self.specials, key=lambda s: s.origin_id)))

    @cached_property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.edges))

    @cached_property
    def num_edges(self) -> int:
        return popcount(self.edges)

    @cached_property
    def size(self) -> int:
        return popcount(self.edges) + len(self.specials)

    def __len__(self):
        return self.size


def vertex_support(H: Hypergraph, part: ExtendedComp) -> VertexSet:
    """Vertices of ``part``: union of its edges and special edges."""
    em = H.edges
    v = 0
    for i in part.edge_ids:
        v |= em[i]
    for s in part.specials:
        v |= s.vertices
    return v


def split_components(H: Hypergraph, part: ExtendedComp, U: VertexSet):
    """[U]-components of ``part`` together with their vertex supports.

    Returns a list of ``(ExtendedComp, support)`` pairs in canonical order.
    Members fully inside ``U`` belong to no component.
    """
    em = H.edges
    pending = []
    for i in part.edge_ids:
        full = em[i]
        r = full & ~U
        if r:
            pending.append((r, full, i, None))
    for s in part.specials:
        r = s.vertices & ~U
        if r:
            pending.append((r, s.vertices, -1, s))

    out = []
    # pending is ordered edges-by-id then specials-by-origin, so the head of
    # the list is always the smallest remaining member.
    while pending:
        acc, support, i0, s0 = pending[0]
        emask = 1 << i0 if s0 is None else 0
        specials = [s0] if s0 is not None else []
        rest = pending[1:]
        grown = True
        while grown and rest:
            grown = False
            keep = []
            for item in rest:
                if item[0] & acc:
                    acc |= item[0]
                    support |= item[1]
                    if item[3] is None:
                        emask |= 1 << item[2]
                    else:
                        specials.append(item[3])
                    grown = True
                else:
                    keep.append(item)
            rest = keep
        specials.sort(key=lambda s: s.origin_id)
        out.append((ExtendedComp(emask, tuple(specials)), support))
        pending = rest
    return out


def oversized_component(H: Hypergraph, part: ExtendedComp, U: VertexSet):
    """The [U]-component of ``part`` holding more than half of its members,
    as ``(ExtendedComp, support)``, or None.

    Same result as scanning :func:`split_components`, but stops as soon as
    the answer is known and builds at most one component object.
    """
    size = part.size
    em = H.edges
    pending = []
    for i in part.edge_ids:
        r = em[i] & ~U
        if r:
            pending.append((r, i, None))
    for s in part.specials:
        r = s.vertices & ~U
        if r:
            pending.append((r, -1, s))
    while 2 * len(pending) > size:
        acc, i0, s0 = pending[0]
        members = [pending[0]]
        rest = pending[1:]
        grown = True
        while grown and rest:
            grown = False
            keep = []
            for item in rest:
                if item[0] & acc:
                    acc |= item[0]
                    members.append(item)
                    grown = True
                else:
                    keep.append(item)
            rest = keep
        if 2 * len(members) > size:
            emask = 0
            specials = []
            support = 0
            for _, i, s in members:
                if s is None:
                    emask |= 1 << i
                    support |= em[i]
                else:
                    specials.append(s)
                    support |= s.vertices
            return ExtendedComp(emask, tuple(specials)), support
        pending = rest
    return None


def components(H: Hypergraph, part: ExtendedComp, U: VertexSet) -> list[ExtendedComp]:
    """Maximal [U]-connected classes of the (special) edges of ``part``.

    Two members are [U]-adjacent when they share a vertex outside ``U``.
    Members contained in ``U`` are dropped.  Components are ordered by their
    smallest member (edge ids before special-edge origin ids).
    """
    return [c for c, _ in split_components(H, part, U)]


# ---------------------------------------------------------------------------
# Acyclicity


def gyo_acyclic(H: Hypergraph) -> bool:
    """GYO reduction: True iff H is alpha-acyclic (hw(H) = 1)."""
    edges = [e for e in H.edges]
    while True:
        changed = False
        # drop vertices occurring in exactly one edge
        seen_once = 0
        seen_twice = 0
        for e in edges:
            seen_twice |= seen_once & e
            seen_once |= e
        lonely = seen_once & ~seen_twice
        if lonely:
            edges = [e & ~lonely for e in edges]
            changed = True
        # drop empty edges and edges contained in another edge
        kept: list[int] = []
        for i, e in enumerate(edges):
            if e == 0:
                changed = True
                continue
            contained = any(
                (e & ~f) == 0 and (e != f or j < i)
                for j, f in enumerate(edges) if j != i and f is not None
            )
            if contained:
                edges[i] = None  # type: ignore[call-overload]
                changed = True
            else:
                kept.append(e)
        edges = kept
        if not changed:
            return len(edges) == 0


def join_tree(H: Hypergraph) -> dict[int, int | None]:
    """Parent map of a join tree for an alpha-acyclic hypergraph.

    Built by repeated ear removal: edge ``e`` is an ear with witness ``w`` when
    every vertex ``e`` shares with the remaining edges lies in ``w``.  The
    last remaining edge is the root (parent ``None``).  Raises
    ``HypergraphError`` if H is cyclic.
    """
    alive = list(range(H.num_edges))
    parent: dict[int, int | None] = {}
    em = H.edges
    while len(alive) > 1:
        for e in alive:
            others = 0
            for f in alive:
                if f != e:
                    others |= em[f]
            shared = em[e] & others
            witness = None
            for f in alive:
                if f != e and (shared & ~em[f]) == 0:
                    witness = f
                    break
            if witness is not None:
                parent[e] = witness
                alive.remove(e)
                break
        else:
            raise HypergraphError("hypergraph is not alpha-acyclic")
    if alive:
        parent[alive[0]] = None
    return parent


# ---------------------------------------------------------------------------
# HyperBench text format


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.column = column


class MissingTerminator(ParseError):
    pass


class DuplicateEdgeName(ParseError):
    pass


class EmptyEdge(ParseError):
    pass


class HyperbenchSyntaxError(ParseError):
    pass


_SPECIAL = set("(),.%")


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self):
        if self.text[self.pos] == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        self.pos += 1

    def skip(self):
        t = self.text
        while self.pos < len(t):
            c = t[self.pos]
            if c == "%":
                while self.pos < len(t) and t[self.pos] != "\n":
                    self._advance()
            elif c.isspace():
                self._advance()
            else:
                break

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        c = self.peek()
        if c:
            self._advance()
        return c

    def _namechar(self, i: int) -> bool:
        if i >= len(self.text):
            return False
        c = self.text[i]
        return not c.isspace() and c not in _SPECIAL

    def name(self) -> str:
        self.skip()
        start = self.pos
        t = self.text
        while self.pos < len(t):
            if self._namechar(self.pos):
                self._advance()
            elif t[self.pos] == "." and self.pos > start and self._namechar(self.pos + 1):
                # dotted identifiers such as "x.1"
                self._advance()
            else:
                break
        return t[start:self.pos]

    def error(self, cls, msg):
        self.skip()
        return cls(msg, self.line, self.col)


def parse_hyperbench(text: str, name: str = "H") -> Hypergraph:
    """Parse a HyperBench document into a :class:`Hypergraph`.

    Grammar: ``atom (',' atom)* '.'`` where an atom is ``name(v1,...,vn)`` or a
    bare ``(v1,...,vn)``.  ``%`` starts a line comment.
    """
    r = _Reader(text)
    atoms: list[tuple[str | None, list[str], tuple[int, int]]] = []
    if r.peek() == ".":
        r.take()
    else:
        while True:
            if r.peek() == "":
                raise r.error(MissingTerminator, "document ends without '.'")
            where = (r.line, r.col)
            ename = r.name() or None
            if r.peek() != "(":
                if r.peek() == "" and ename is not None:
                    raise r.error(MissingTerminator, "document ends without '.'")
                raise r.error(HyperbenchSyntaxError, f"expected '(' but found {r.peek()!r}")
            r.take()
            vs: list[str] = []
            if r.peek() == ")":
                raise r.error(EmptyEdge, f"edge {ename or '<anonymous>'} has no vertices")
            while True:
                v = r.name()
                if not v:
                    raise r.error(HyperbenchSyntaxError, f"expected vertex name but found {r.peek()!r}")
                vs.append(v)
                c = r.take()
                if c == ")":
                    break
                if c != ",":
                    if c == "":
                        raise r.error(MissingTerminator, "document ends inside an atom")
                    raise r.error(HyperbenchSyntaxError, f"expected ',' or ')' but found {c!r}")
            atoms.append((ename, vs, where))
            c = r.take()
            if c == ".":
                break
            if c == "":
                raise r.error(MissingTerminator, "document ends without '.'")
            if c != ",":
                raise r.error(HyperbenchSyntaxError, f"expected ',' or '.' but found {c!r}")
    if r.peek() != "":
        raise r.error(HyperbenchSyntaxError, "text after final '.'")

    explicit = set()
    for ename, _, where in atoms:
        if ename is None:
            continue
        if ename in explicit:
            raise DuplicateEdgeName(f"duplicate edge name {ename!r}", *where)
        explicit.add(ename)
    fresh = (f"e{i}" for i in itertools.count(1))
    edges: dict[str, list[str]] = {}
    for ename, vs, _ in atoms:
        if ename is None:
            ename = next(n for n in fresh if n not in explicit)
            explicit.add(ename)
        edges[ename] = vs
    return Hypergraph.from_edges(edges, name=name)


def serialize_hyperbench(H: Hypergraph) -> str:
    """Inverse of :func:`parse_hyperbench`: one atom per line, final '.'."""
    if H.num_edges == 0:
        return ".\n"
    lines = []
    for ename, e in zip(H.edge_names, H.edges):
        lines.append(f"{ename}({','.join(H.vertex_names[v] for v in iter_bits(e))})")
    return ",\n".join(lines) + ".\n"


def load_hyperbench(path) -> Hypergraph:
    from pathlib import Path

    p = Path(path)
    return parse_hyperbench(p.read_text(), name=p.stem)
