"""Instance generators: exhaustive small G-graphs and seeded random ones.

The exhaustive sweep walks connected simple graphs from the networkx graph
atlas, assigns edge multiplicities up to relabeling, and attaches one
subgroup per conjugacy class of the multiplicity-preserving permutations.
Relabeling a G-graph or conjugating its group yields an isomorphic G-graph
with the same rigidity counts, so nothing is lost for bound checking.  The
``labelled`` mode skips both reductions for cross-checks on small sizes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator

from .graphs import MultiGraph, connected_components, is_connected
from .groups import (
    GGraph,
    PermGroup,
    _closure,
    all_subgroups,
    automorphism_group,
    subgroup_classes,
)


def vertex_names(n: int) -> list[str]:
    width = len(str(n - 1)) if n > 1 else 1
    return [f"v{i:0{width}d}" for i in range(n)]


def _connected_shapes(n: int, labelled: bool) -> Iterator[list[tuple[int, int]]]:
    """Edge lists (on 0..n-1) of connected simple graphs with n vertices."""
    if n == 1:
        yield []
        return
    pairs = list(itertools.combinations(range(n), 2))
    if labelled:
        names = vertex_names(n)
        for r in range(n - 1, len(pairs) + 1):
            for edges in itertools.combinations(pairs, r):
                g = MultiGraph(names, {(names[a], names[b]): 1 for a, b in edges})
                if is_connected(g):
                    yield list(edges)
        return
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    for g in graph_atlas_g():
        if g.number_of_nodes() == n and nx.is_connected(g):
            yield sorted(tuple(sorted(e)) for e in g.edges())


def _multiplicity_assignments(n: int, edges: list[tuple[int, int]], max_mult: int,
                              labelled: bool) -> Iterator[tuple[int, ...]]:
    choices = range(1, max_mult + 1)
    if labelled or max_mult == 1 or not edges:
        yield from itertools.product(choices, repeat=len(edges))
        return
    names = vertex_names(n)
    simple = MultiGraph(names, {(names[a], names[b]): 1 for a, b in edges})
    aut = automorphism_group(simple)
    where = {e: k for k, e in enumerate(edges)}
    edge_perms = []
    for p in aut.elements:
        edge_perms.append([where[tuple(sorted((p[a], p[b])))] for a, b in edges])
    seen: set[tuple[int, ...]] = set()
    for mults in itertools.product(choices, repeat=len(edges)):
        if mults in seen:
            continue
        for ep in edge_perms:
            image = [0] * len(edges)
            for k, j in enumerate(ep):
                image[j] = mults[k]
            seen.add(tuple(image))
        yield mults


def exhaustive_multigraphs(max_vertices: int, max_mult: int, labelled: bool = False) -> Iterator[MultiGraph]:
    """Connected multigraphs with 1..max_vertices vertices and multiplicities <= max_mult."""
    for n in range(1, max_vertices + 1):
        names = vertex_names(n)
        for edges in _connected_shapes(n, labelled):
            for mults in _multiplicity_assignments(n, edges, max_mult, labelled):
                yield MultiGraph(names, {(names[a], names[b]): m for (a, b), m in zip(edges, mults)})


def exhaustive_ggraphs(max_vertices: int, max_mult: int, group_order_cap: int,
                       labelled: bool = False) -> Iterator[GGraph]:
    """Every connected multigraph in range with every admissible action.

    By default one subgroup per conjugacy class and one graph per isomorphism
    class are produced; ``labelled=True`` enumerates raw labelled graphs and
    all subgroups instead.
    """
    for g in exhaustive_multigraphs(max_vertices, max_mult, labelled):
        aut = automorphism_group(g)
        if labelled:
            groups = all_subgroups(aut, group_order_cap)
        else:
            groups = [cls[0] for cls in subgroup_classes(aut, group_order_cap)]
        for h in groups:
            yield GGraph(g, h, check=False)


@dataclass(frozen=True)
class RandomParams:
    max_vertices: int = 10
    max_mult: int = 3
    density: float = 0.35
    max_group_order: int = 24
    max_generators: int = 2
    retries: int = 200


def _random_perm(rng: random.Random, n: int) -> tuple[int, ...]:
    """A product of disjoint 2-, 3- and 4-cycles on random points."""
    points = list(range(n))
    rng.shuffle(points)
    p = list(range(n))
    pos = 0
    while pos < n:
        length = rng.choice((1, 1, 2, 2, 3, 4))
        cyc = points[pos:pos + length]
        pos += length
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            p[a] = b
    return tuple(p)


def _random_group(rng: random.Random, n: int, params: RandomParams) -> list[tuple[int, ...]]:
    for _ in range(params.retries):
        k = rng.randint(1, params.max_generators)
        gens = [_random_perm(rng, n) for _ in range(k)]
        elements = _closure(gens, n, params.max_group_order)
        if elements is not None:
            return elements
    return [tuple(range(n))]


def _pair_orbits(elements: list[tuple[int, ...]], n: int) -> list[list[tuple[int, int]]]:
    seen: set[tuple[int, int]] = set()
    orbits = []
    for pair in itertools.combinations(range(n), 2):
        if pair in seen:
            continue
        orb = sorted({tuple(sorted((p[pair[0]], p[pair[1]]))) for p in elements})
        seen.update(orb)
        orbits.append(orb)
    return orbits


def random_ggraph(seed: int, params: RandomParams = RandomParams()) -> GGraph:
    """A random G-graph, deterministic in ``seed``.

    The group is drawn first; edges are then added one pair-orbit at a time
    with a constant multiplicity, so the action is valid by construction.
    Orbits bridging two components are added until the graph is connected.
    """
    rng = random.Random(seed)
    n = rng.randint(1, params.max_vertices)
    names = vertex_names(n)
    elements = _random_group(rng, n, params)
    orbits = _pair_orbits(elements, n)
    mult: dict[tuple[str, str], int] = {}

    def add(orbit):
        m = rng.randint(1, params.max_mult)
        for a, b in orbit:
            mult[(names[a], names[b])] = m

    for orb in orbits:
        if rng.random() < params.density:
            add(orb)
    while True:
        comps = connected_components(MultiGraph(names, mult))
        if len(comps) == 1:
            break
        block = {v: k for k, c in enumerate(comps) for v in c}
        bridging = [o for o in orbits if any(block[names[a]] != block[names[b]] for a, b in o)]
        add(rng.choice(bridging))
    graph = MultiGraph(names, mult)
    return GGraph(graph, PermGroup(names, elements))


def _perm_group(n: int, cycles_list: list[list[tuple[int, ...]]]) -> PermGroup:
    gens = []
    for cycles in cycles_list:
        p = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                p[a] = b
        gens.append(tuple(p))
    return PermGroup([str(i) for i in range(n)], _closure(gens, n, None), gens)


def _quaternion() -> PermGroup:
    # Left-regular representation on the eight units 1, i, j, k and their negatives.
    units = [(s, u) for u in "1ijk" for s in (1, -1)]
    table = {("1", x): (1, x) for x in "1ijk"}
    table.update({(x, "1"): (1, x) for x in "1ijk"})
    table.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                  ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                  ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    where = {u: k for k, u in enumerate(units)}

    def left(a):
        out = []
        for s, u in units:
            t, w = table[(a[1], u)]
            out.append(where[(a[0] * s * t, w)])
        return tuple(out)

    gens = [left((1, "i")), left((1, "j"))]
    return PermGroup([str(i) for i in range(8)], _closure(gens, 8, None), gens)


def group_catalog(max_order: int = 12) -> dict[str, PermGroup]:
    """Small permutation groups, one per listed isomorphism type, up to ``max_order``."""
    cat: dict[str, PermGroup] = {"C1": _perm_group(1, [])}
    for n in range(2, 13):
        cat[f"C{n}"] = _perm_group(n, [[tuple(range(n))]])
    cat["C2xC2"] = _perm_group(4, [[(0, 1)], [(2, 3)]])
    cat["S3"] = _perm_group(3, [[(0, 1, 2)], [(0, 1)]])
    for n in (4, 5, 6):
        reflection = [(i, n - i) for i in range(1, (n + 1) // 2)]
        cat[f"D{n}"] = _perm_group(n, [[tuple(range(n))], reflection])
    cat["Q8"] = _quaternion()
    cat["C2xC4"] = _perm_group(6, [[(0, 1)], [(2, 3, 4, 5)]])
    cat["C2xC2xC2"] = _perm_group(6, [[(0, 1)], [(2, 3)], [(4, 5)]])
    cat["A4"] = _perm_group(4, [[(0, 1, 2)], [(0, 1), (2, 3)]])
    cat["Dic3"] = _perm_group(7, [[(0, 1, 2)], [(0, 1), (3, 4, 5, 6)]])
    cat["C2xC6"] = _perm_group(7, [[(0, 1)], [(2, 3)], [(4, 5, 6)]])
    return {k: g for k, g in cat.items() if g.order <= max_order}


@dataclass(frozen=True)
class ReductionParams:
    max_components: int = 5
    max_order: int = 12
    max_extra_points: int = 3
    max_genus: int = 2
    nonreal_prob: float = 0.5
    retries: int = 100


def random_reduction_graph(seed: int, params: ReductionParams = ReductionParams()):
    """A random valid labeled dual graph, deterministic in ``seed``.

    The declared generic genus is the arithmetic genus of the labeled fiber
    plus a random nonnegative surplus (non-reduced fibers only add to it).
    """
    from .reduction import (
        Component,
        Declared,
        GaloisModel,
        Intersection,
        InvalidInstance,
        ReductionGraph,
        arithmetic_genus,
    )

    rng = random.Random(seed)
    catalog = group_catalog(params.max_order)
    name = rng.choice(sorted(catalog))
    group = catalog[name]
    base = GaloisModel(group)
    subs = list(base.subgroups)
    flagged: frozenset[str] = frozenset()
    if rng.random() < params.nonreal_prob:
        tops = rng.sample([s.id for s in subs], k=min(len(subs), rng.randint(1, 2)))
        flagged = base.downward_closure(tops)
    gm = GaloisModel(group, [type(s)(s.id, s.group, s.id in flagged) for s in subs])
    ids = [s.id for s in gm.subgroups]
    elems = {s.id: s.group.element_set for s in gm.subgroups}
    by_elems = {v: k for k, v in elems.items()}

    def below(sid):
        return [h for h in ids if elems[h] <= elems[sid]]

    for _ in range(params.retries):
        m = rng.randint(1, params.max_components)
        stabs = []
        for i in range(m):
            r = rng.random()
            if i and r < 0.35:
                stabs.append(rng.choice(stabs))
            elif r < 0.7:
                stabs.append(gm.full_id)
            else:
                stabs.append(rng.choice(ids))
        pairs = [(rng.randrange(i), i) for i in range(1, m)]
        if m > 1:
            pairs += [tuple(rng.sample(range(m), 2)) for _ in range(rng.randint(0, params.max_extra_points))]
        fields: list[set[str]] = [set() for _ in range(m)]
        points = []
        for k, (a, b) in enumerate(pairs):
            meet = by_elems[elems[stabs[a]] & elems[stabs[b]]]
            residue = meet if rng.random() < 0.5 else rng.choice(below(meet))
            points.append(Intersection(f"P{k}", (f"C{a}", f"C{b}"), residue))
            fields[a].add(residue)
            fields[b].add(residue)
        comps = []
        for i in range(m):
            if rng.random() < 0.5:
                fields[i].add(rng.choice(below(stabs[i])))
            genus = rng.choice([0, 0, 0] + list(range(1, params.max_genus + 1)))
            comps.append(Component(f"C{i}", stabs[i], genus, gm.downward_closure(fields[i])))
        try:
            rg = ReductionGraph(gm, comps, points)
        except InvalidInstance:
            continue
        slack = 0 if rng.random() < 0.6 else rng.randint(1, 2)
        union = rg.point_field_union
        real_point = any(not gm.nonreal(h) for h in union)
        real_f = gm.real and real_point and rng.random() < 0.7
        declared = Declared(arithmetic_genus(rg) + slack, real_f, real_f)
        return ReductionGraph(gm, comps, points, declared, check=False)
    raise RuntimeError(f"no valid reduction graph after {params.retries} attempts (seed {seed})")
