"""JSON and Graphviz output for decompositions."""
from __future__ import annotations

import itertools
import json

from .decomposition import DecompNode, EdgeCover, HDFragment, SpecialCover, tree_width
from .hypergraph import Hypergraph, HypergraphError, SpecialEdge, iter_bits


def _names(H: Hypergraph, vs: int) -> list[str]:
    return sorted(H.vertex_names[v] for v in iter_bits(vs))


def _node_dict(H: Hypergraph, u: DecompNode) -> dict:
    if isinstance(u.cover, SpecialCover):
        cover = {"special": _names(H, u.cover.special.vertices)}
    else:
        cover = sorted(H.edge_names[e] for e in u.cover.edges)
    return {
        "bag": _names(H, u.chi),
        "cover": cover,
        "children": [_node_dict(H, c) for c in u.children],
    }


def to_dict(H: Hypergraph, hd: HDFragment) -> dict:
    return {"width": hd.width, "root": _node_dict(H, hd.root)}


def export_json(H: Hypergraph, hd: HDFragment) -> str:
    return json.dumps(to_dict(H, hd), separators=(",", ":"), ensure_ascii=False)


def import_json(text: str, H: Hypergraph) -> HDFragment:
    """Inverse of :func:`export_json`.

    Special leaves get fresh origin ids in pre-order, starting at 1.
    """
    data = json.loads(text)
    vidx = H.vertex_index
    eidx = H.edge_index
    ids = itertools.count(1)

    def vset(names) -> int:
        out = 0
        for n in names:
            if n not in vidx:
                raise HypergraphError(f"unknown vertex {n!r}")
            out |= 1 << vidx[n]
        return out

    def node(d) -> DecompNode:
        chi = vset(d["bag"])
        cov = d["cover"]
        if isinstance(cov, dict):
            cover = SpecialCover(SpecialEdge(vset(cov["special"]), next(ids)))
        else:
            for n in cov:
                if n not in eidx:
                    raise HypergraphError(f"unknown edge {n!r}")
            cover = EdgeCover(tuple(eidx[n] for n in cov))
        return DecompNode(chi, cover, tuple(node(c) for c in d.get("children", [])))

    root = node(data["root"])
    width = data.get("width", tree_width(root))
    return HDFragment(root, width)


def _dot_quote(s: str) -> str:
    s = s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return '"' + s + '"'


def export_dot(H: Hypergraph, hd: HDFragment) -> str:
    lines = ["digraph HD {", "  node [shape=box];"]
    ids: dict[tuple, str] = {}
    for path, u in hd.root.walk():
        nid = f"n{len(ids)}"
        ids[path] = nid
        if isinstance(u.cover, SpecialCover):
            lam = "special {" + ", ".join(_names(H, u.cover.special.vertices)) + "}"
        else:
            lam = "{" + ", ".join(sorted(H.edge_names[e] for e in u.cover.edges)) + "}"
        chi = "{" + ", ".join(_names(H, u.chi)) + "}"
        label = _dot_quote(f"λ: {lam}\nχ: {chi}")
        lines.append(f"  {nid} [label={label}];")
        if path:
            lines.append(f"  {ids[path[:-1]]} -> {nid};")
    lines.append("}")
    return "\n".join(lines) + "\n"
