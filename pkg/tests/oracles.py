"""Reference implementations that share no code with the package.

Everything here works on plain Python sets of names, not on the bitset
representation, so a bug in the bit helpers cannot hide itself.
"""
from __future__ import annotations

import itertools
from functools import lru_cache


def uf_components(members: dict, U: set) -> list[set]:
    """Union-find over ``members`` (key -> vertex set): two members are joined
    when they share a vertex outside ``U``.  Members inside ``U`` are dropped.
    Returns the classes as sets of keys (unordered)."""
    keys = [m for m, vs in members.items() if set(vs) - U]
    parent = {m: m for m in keys}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in itertools.combinations(keys, 2):
        if (set(members[a]) & set(members[b])) - U:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    classes: dict = {}
    for m in keys:
        classes.setdefault(find(m), set()).add(m)
    return list(classes.values())


def _vertex_components(edges: list[frozenset], within: frozenset, sep: frozenset) -> list[frozenset]:
    """Maximal sets of vertices of ``within`` minus ``sep`` connected through
    edges, where only vertices outside ``sep`` can be walked over."""
    todo = set(within - sep)
    out = []
    while todo:
        start = todo.pop()
        comp = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for e in edges:
                if v in e:
                    for w in e:
                        if w not in sep and w not in comp:
                            comp.add(w)
                            frontier.append(w)
        todo -= comp
        out.append(frozenset(comp))
    return out


def hw_at_most(edge_lists, k: int) -> bool:
    """Alternating k-decomposability check over vertex components.

    ``decomposable(C, R)``: some set S of at most k edges satisfies
      * every vertex shared by an edge meeting C and by R lies in V(S),
      * V(S) meets C,
      * every [V(S)]-component inside C is decomposable with S as parent.
    hw <= k iff the whole vertex set is decomposable with an empty parent.
    """
    edges = [frozenset(e) for e in edge_lists]
    if not edges:
        return True
    allv = frozenset().union(*edges)
    labels = [frozenset().union(*c) for r in range(1, k + 1)
              for c in itertools.combinations(edges, r)]

    @lru_cache(maxsize=None)
    def decomposable(C: frozenset, rv: frozenset) -> bool:
        touching = [e for e in edges if e & C]
        need = frozenset().union(*[e & rv for e in touching]) if touching else frozenset()
        for sv in labels:
            if not need <= sv or not sv & C:
                continue
            subs = _vertex_components(edges, allv, sv)
            if all(decomposable(c, sv) for c in subs if c <= C):
                return True
        return False

    return decomposable(allv, frozenset())


def oracle_width(edge_lists, kmax: int):
    for k in range(1, kmax + 1):
        if hw_at_most(edge_lists, k):
            return k
    return None
