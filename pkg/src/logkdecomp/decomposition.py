"""HD fragments of extended subhypergraphs: model, validation and stitching."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .hypergraph import (
    ExtendedComp,
    Hypergraph,
    SpecialEdge,
    VertexSet,
    iter_bits,
    split_components,
    vertex_support,
)

Path = tuple[int, ...]


@dataclass(frozen=True)
class EdgeCover:
    edges: tuple[int, ...]  # sorted edge ids

    def __post_init__(self):
        if list(self.edges) != sorted(set(self.edges)):
            object.__setattr__(self, "edges", tuple(sorted(set(self.edges))))


@dataclass(frozen=True)
class SpecialCover:
    special: SpecialEdge


Cover = Union[EdgeCover, SpecialCover]


@dataclass(frozen=True)
class DecompNode:
    chi: VertexSet
    cover: Cover
    children: tuple["DecompNode", ...] = ()

    @property
    def lambda_size(self) -> int:
        if isinstance(self.cover, SpecialCover):
            return 1
        return len(self.cover.edges)

    def lambda_vertices(self, H: Hypergraph) -> VertexSet:
        if isinstance(self.cover, SpecialCover):
            return self.cover.special.vertices
        return H.union_of(self.cover.edges)

    def walk(self, path: Path = ()) -> Iterator[tuple[Path, "DecompNode"]]:
        """Pre-order traversal yielding ``(path, node)``."""
        yield path, self
        for i, c in enumerate(self.children):
            yield from c.walk(path + (i,))

    def subtree_chi(self) -> VertexSet:
        v = self.chi
        for c in self.children:
            v |= c.subtree_chi()
        return v


def tree_width(node: DecompNode) -> int:
    return max(n.lambda_size for _, n in node.walk())


@dataclass(frozen=True)
class HDFragment:
    root: DecompNode
    width: int

    @classmethod
    def of(cls, root: DecompNode) -> "HDFragment":
        return cls(root, tree_width(root))

    def nodes(self):
        return list(self.root.walk())

    def __len__(self):
        return sum(1 for _ in self.root.walk())


def single_node(chi: VertexSet, edges: Sequence[int]) -> HDFragment:
    return HDFragment(DecompNode(chi, EdgeCover(tuple(edges))), len(edges))


def special_leaf(s: SpecialEdge) -> HDFragment:
    return HDFragment(DecompNode(s.vertices, SpecialCover(s)), 1)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    tag: str  # C1a, C1b, C2a, C2b, C3, C4, C5, C6, NF1, NF2, NF3, WIDTH
    path: Path
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def tags(self) -> set[str]:
        return {v.tag for v in self.violations}

    def __bool__(self):
        return self.valid


def _connected(paths: list[Path]) -> bool:
    """A set of tree nodes (given by root paths) is connected iff exactly one
    of them has its parent outside the set."""
    present = set(paths)
    tops = sum(1 for p in paths if not p or p[:-1] not in present)
    return tops <= 1


def validate_extended_hd(H: Hypergraph, part: ExtendedComp, conn: VertexSet,
                         hd: HDFragment, k: int) -> ValidationReport:
    """Check an HD fragment of ``(part, conn)`` against all six fragment
    conditions plus the width bound.

    For ``part = H.full_part()`` and ``conn = 0`` this is exactly the classic
    HD check (cover, connectedness, chi within lambda, special condition).
    Violations are collected, never raised.
    """
    out: list[Violation] = []
    nodes = hd.nodes()
    specials = {s.origin_id: s for s in part.specials}
    for path, u in nodes:
        if isinstance(u.cover, SpecialCover):
            s = u.cover.special
            if s.origin_id not in specials:
                out.append(Violation("C1b", path, f"special edge #{s.origin_id} not in part"))
            if u.chi != s.vertices:
                out.append(Violation("C1b", path, "bag differs from its special edge"))
            if u.children:
                out.append(Violation("C5", path, "special cover on an inner node"))
        else:
            bad = [e for e in u.cover.edges if not 0 <= e < H.num_edges]
            if bad:
                out.append(Violation("C1a", path, f"unknown edge ids {bad}"))
                continue
            if u.chi & ~H.union_of(u.cover.edges):
                missing = H.vertex_labels(u.chi & ~H.union_of(u.cover.edges))
                out.append(Violation("C1a", path, f"bag vertices {missing} not covered by lambda"))

    for e in part.edge_ids:
        if not any((H.edges[e] & ~u.chi) == 0 for _, u in nodes):
            out.append(Violation("C2a", (), f"edge {H.edge_names[e]} not covered"))
    for s in part.specials:
        if not any(isinstance(u.cover, SpecialCover) and u.cover.special == s for _, u in nodes):
            out.append(Violation("C2b", (), f"special edge #{s.origin_id} has no leaf"))

    support = vertex_support(H, part)
    holders: dict[int, list[Path]] = {}
    for path, u in nodes:
        for v in iter_bits(u.chi & support):
            holders.setdefault(v, []).append(path)
    for v, paths in holders.items():
        if not _connected(paths):
            out.append(Violation("C3", paths[0], f"vertex {H.vertex_names[v]} occurs in a disconnected set of bags"))

    for path, u in nodes:
        if isinstance(u.cover, SpecialCover) and not u.children:
            continue
        if isinstance(u.cover, EdgeCover) and any(not 0 <= e < H.num_edges for e in u.cover.edges):
            continue
        leak = u.subtree_chi() & u.lambda_vertices(H) & ~u.chi
        if leak:
            out.append(Violation("C4", path, f"special condition fails for {H.vertex_labels(leak)}"))

    if conn & ~hd.root.chi:
        out.append(Violation("C6", (), f"root bag misses interface vertices {H.vertex_labels(conn & ~hd.root.chi)}"))

    real_width = max(u.lambda_size for _, u in nodes)
    if real_width != hd.width:
        out.append(Violation("WIDTH", (), f"declared width {hd.width} but tree has {real_width}"))
    if real_width > k:
        out.append(Violation("WIDTH", (), f"width {real_width} exceeds {k}"))
    return ValidationReport(tuple(out))


def validate_hd(H: Hypergraph, hd: HDFragment, k: int | None = None) -> ValidationReport:
    """Plain-hypergraph HD check."""
    return validate_extended_hd(H, H.full_part(), 0, hd, hd.width if k is None else k)


# ---------------------------------------------------------------------------
# cov and normal form


def cov(H: Hypergraph, hd: HDFragment, part: ExtendedComp) -> dict[Path, ExtendedComp]:
    """Members of ``part`` covered for the first time at each node."""
    out: dict[Path, ExtendedComp] = {}

    def go(u: DecompNode, path: Path, done_e: int, done_s: frozenset):
        emask = 0
        for e in part.edge_ids:
            if not (done_e >> e) & 1 and (H.edges[e] & ~u.chi) == 0:
                emask |= 1 << e
        sp = tuple(s for s in part.specials if s not in done_s and (s.vertices & ~u.chi) == 0)
        out[path] = ExtendedComp(emask, sp)
        for i, c in enumerate(u.children):
            go(c, path + (i,), done_e | emask, done_s | frozenset(sp))

    go(hd.root, (), 0, frozenset())
    return out


def subtree_cov(covmap: dict[Path, ExtendedComp], path: Path) -> ExtendedComp:
    n = len(path)
    emask = 0
    sp: list[SpecialEdge] = []
    for p, c in covmap.items():
        if p[:n] == path:
            emask |= c.edges
            sp.extend(c.specials)
    return ExtendedComp(emask, tuple(sp))


def check_normal_form(H: Hypergraph, part: ExtendedComp, hd: HDFragment) -> ValidationReport:
    """Check the three per-child normal-form properties (minimal-bag variant).

    NF1: the subtree of a child covers exactly one [bag(parent)]-component.
    NF2: the child's bag fully contains some member of that component.
    NF3: bag(child) = union(lambda(child)) & vertices(component).
    """
    out: list[Violation] = []
    covmap = cov(H, hd, part)
    for ppath, p in hd.root.walk():
        if not p.children:
            continue
        comps = split_components(H, part, p.chi)
        for i, c in enumerate(p.children):
            cpath = ppath + (i,)
            below = subtree_cov(covmap, cpath)
            match = [(comp, sup) for comp, sup in comps
                     if comp.edges == below.edges and set(comp.specials) == set(below.specials)]
            if not match:
                out.append(Violation("NF1", cpath, "subtree does not cover exactly one component of the parent bag"))
                continue
            comp, sup = match[0]
            members = [H.edges[e] for e in comp.edge_ids] + [s.vertices for s in comp.specials]
            if not any((m & ~c.chi) == 0 for m in members):
                out.append(Violation("NF2", cpath, "child bag covers no member of its component"))
            if c.chi != c.lambda_vertices(H) & sup:
                out.append(Violation("NF3", cpath, "child bag is not lambda restricted to its component"))
    return ValidationReport(tuple(out))


# ---------------------------------------------------------------------------
# Stitching


class StitchError(ValueError):
    pass


class PlaceholderNotFound(StitchError):
    pass


class PlaceholderNotUnique(StitchError):
    pass


def stitch(upper: HDFragment, placeholder: SpecialEdge, child_chi: VertexSet,
           child_lambda: Sequence[int], covered_specials: Sequence[SpecialEdge],
           lower: Sequence[HDFragment]) -> HDFragment:
    """Replace the placeholder leaf of ``upper`` by the separator node.

    The new node gets one special leaf per covered special edge followed by
    the roots of the lower fragments as children.
    """
    hits = [p for p, u in upper.root.walk()
            if isinstance(u.cover, SpecialCover) and u.cover.special == placeholder]
    if not hits:
        raise PlaceholderNotFound(f"no leaf for special edge #{placeholder.origin_id}")
    if len(hits) > 1:
        raise PlaceholderNotUnique(f"{len(hits)} leaves for special edge #{placeholder.origin_id}")
    kids = tuple(DecompNode(s.vertices, SpecialCover(s)) for s in covered_specials)
    kids += tuple(f.root for f in lower)
    sep = DecompNode(child_chi, EdgeCover(tuple(child_lambda)), kids)

    def rebuild(u: DecompNode, path: Path) -> DecompNode:
        if not path:
            return sep
        i = path[0]
        ch = list(u.children)
        ch[i] = rebuild(ch[i], path[1:])
        return DecompNode(u.chi, u.cover, tuple(ch))

    width = max([upper.width, len(child_lambda)] + [f.width for f in lower]
                + [1 for _ in covered_specials])
    return HDFragment(rebuild(upper.root, hits[0]), width)


def attach(chi: VertexSet, lam: Sequence[int], covered_specials: Sequence[SpecialEdge],
           lower: Sequence[HDFragment]) -> HDFragment:
    """Root node with special leaves and lower fragments below it."""
    kids = tuple(DecompNode(s.vertices, SpecialCover(s)) for s in covered_specials)
    kids += tuple(f.root for f in lower)
    width = max([len(lam)] + [f.width for f in lower] + [1 for _ in covered_specials])
    return HDFragment(DecompNode(chi, EdgeCover(tuple(lam)), kids), width)
