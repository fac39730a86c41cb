"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools

import networkx as nx

from riglab.graphs import MultiGraph


def to_nx(g: MultiGraph) -> nx.MultiGraph:
    h = nx.MultiGraph()
    h.add_nodes_from(g.vertices)
    for (v, w), m in g.edge_mult.items():
        for _ in range(m):
            h.add_edge(v, w)
    return h


def betti_nx(g: MultiGraph) -> int:
    """Cycle-space dimension: simple cycle basis plus one per extra parallel edge."""
    simple = nx.Graph()
    simple.add_nodes_from(g.vertices)
    simple.add_edges_from(g.edge_mult)
    return len(nx.cycle_basis(simple)) + sum(m - 1 for m in g.edge_mult.values())


def has_cycle(g: MultiGraph) -> bool:
    if any(m > 1 for m in g.edge_mult.values()):
        return True
    simple = nx.Graph(list(g.edge_mult))
    try:
        nx.find_cycle(simple)
        return True
    except nx.NetworkXNoCycle:
        return False


def components_nx(g: MultiGraph) -> set[frozenset]:
    return {frozenset(c) for c in nx.connected_components(to_nx(g))}


def _mul(p, q):
    return tuple(p[i] for i in q)


def closure(gens, n):
    e = tuple(range(n))
    elems = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _mul(g, x)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def all_subgroups_naive(elements, n) -> set[frozenset]:
    """Every subgroup, found by closing pairwise joins of cyclic subgroups to a fixpoint."""
    subs = {closure([g], n) for g in elements}
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(subs), 2):
            j = closure(list(a | b), n)
            if j not in subs:
                subs.add(j)
                changed = True
    return subs


def rigidities_bruteforce(graph: MultiGraph, elements, n) -> set[tuple]:
    """(vertex set, rigidifier element set, singular) for every rigidity."""
    verts = graph.vertices
    stab = {v: frozenset(p for p in elements if p[i] == i) for i, v in enumerate(verts)}
    h_all = to_nx(graph)
    found = set()
    for h in all_subgroups_naive(elements, n):
        fixed = [v for i, v in enumerate(verts) if all(p[i] == i for p in h)]
        for comp in nx.connected_components(h_all.subgraph(fixed)):
            if all(stab[v] == h for v in comp):
                found.add((frozenset(comp), h, len(comp) == 1))
    return found


def rigidity_orbit_sizes(graph: MultiGraph, elements) -> list[int]:
    verts = graph.vertices
    index = {v: i for i, v in enumerate(verts)}
    rigs = {r[0] for r in rigidities_bruteforce(graph, elements, len(verts))}
    sizes = []
    seen = set()
    for r in sorted(rigs, key=sorted):
        if r in seen:
            continue
        orb = {frozenset(verts[p[index[v]]] for v in r) for p in elements}
        assert orb <= rigs
        seen |= orb
        sizes.append(len(orb))
    return sorted(sizes)


def allocation_max(rank: int, genus: int, real: bool, _memo={}) -> int:
    """Best rho_1 bound reachable by spending the genus budget on residue curves.

    Knapsack over residue curves of genus h: a real one costs h and yields its
    own bound at rank - 1; a nonreal one costs 1 + h and yields one more than
    its own bound.  Enumerates every allocation; no closed form is used.
    """
    key = (rank, genus, real)
    if key in _memo:
        return _memo[key]
    if rank == 0:
        return 0
    budget = genus if real else genus + 1
    items = []
    for h in range(budget + 1):
        if h >= 1:
            items.append((h, allocation_max(rank - 1, h, True)))
        if 1 + h <= budget:
            items.append((1 + h, 1 + allocation_max(rank - 1, h, False)))
    best = [0] * (budget + 1)
    for b in range(1, budget + 1):
        best[b] = max([best[b - 1]] + [best[b - c] + v for c, v in items if c <= b])
    _memo[key] = best[budget]
    return best[budget]


def laurent_lex_value(poly: dict[tuple[int, ...], int]) -> tuple[int, ...]:
    """Valuation of a nonzero Laurent polynomial in t_1..t_n, t_n dominant: lex-min reversed exponent."""
    return min(tuple(reversed(e)) for e, c in poly.items() if c != 0)
