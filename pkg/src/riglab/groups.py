"""Finite permutation groups acting on multigraphs, and the rigidities of such actions.

A permutation of an ``n``-element vertex set is a tuple ``p`` of images, read
against the sorted vertex list: vertex ``i`` goes to ``p[i]``.  Products are
composed right to left, ``compose(p, q)(i) == p[q[i]]``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .graphs import MultiGraph, full_subgraph, is_connected

Perm = tuple[int, ...]

DEFAULT_GROUP_CAP = 10080


class GroupError(ValueError):
    """Malformed permutations or subgroup misuse."""


class GroupTooLarge(GroupError):
    """Closure exceeded the configured element cap."""


class InvalidAction(GroupError):
    """A group element fails to preserve edge multiplicities."""

    def __init__(self, violation: ActionViolation):
        super().__init__(str(violation))
        self.violation = violation


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    return tuple([p[i] for i in q])


def invert(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_from_map(mapping: Mapping[str, str], domain: Sequence[str]) -> Perm:
    """Convert ``{vertex: image}`` into an index tuple; unlisted vertices are fixed."""
    index = {v: i for i, v in enumerate(domain)}
    images = list(range(len(domain)))
    for v, w in mapping.items():
        if v not in index or w not in index:
            raise GroupError(f"permutation entry {v!r}->{w!r} leaves the domain")
        images[index[v]] = index[w]
    if len(set(images)) != len(images):
        raise GroupError(f"map {dict(mapping)} is not a bijection")
    return tuple(images)


def _check_perm(p: Sequence[int], n: int) -> Perm:
    p = tuple(p)
    if len(p) != n or sorted(p) != list(range(n)):
        raise GroupError(f"{p} is not a permutation of {n} points")
    return p


def _closure(generators: Sequence[Perm], n: int, cap: int | None) -> list[Perm] | None:
    elements = [identity(n)]
    seen = {elements[0]}
    queue = deque(elements)
    while queue:
        x = queue.popleft()
        for s in generators:
            y = compose(s, x)
            if y not in seen:
                seen.add(y)
                elements.append(y)
                queue.append(y)
                if cap is not None and len(elements) > cap:
                    return None
    return elements


def _extend(sub: Sequence[Perm], sub_set: frozenset, gens: Sequence[Perm], g: Perm,
            cap: int | None) -> list[Perm] | None:
    """Elements of <sub, g> by left-coset enumeration, or None past ``cap``."""
    elements = list(sub)
    seen = set(sub_set)
    reps = [sub[0]]
    all_gens = list(gens) + [g]
    pos = 0
    while pos < len(reps):
        r = reps[pos]
        pos += 1
        for s in all_gens:
            x = compose(s, r)
            if x in seen:
                continue
            coset = [compose(x, h) for h in sub]
            elements.extend(coset)
            seen.update(coset)
            reps.append(x)
            if cap is not None and len(elements) > cap:
                return None
    return elements


class PermGroup:
    """A finite permutation group, stored with its full sorted element list.

    Equality and hashing use the domain and element set, so two groups with
    different generators but the same elements compare equal.
    """

    __slots__ = ("domain", "elements", "_set", "_gens")

    def __init__(self, domain: Sequence[str], elements: Iterable[Perm], generators: Sequence[Perm] | None = None):
        self.domain = tuple(domain)
        self.elements = tuple(sorted(elements))
        self._set = frozenset(self.elements)
        self._gens = tuple(generators) if generators is not None else None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def element_set(self) -> frozenset:
        return self._set

    @property
    def generators(self) -> tuple[Perm, ...]:
        """A small generating set (greedy in element order when not given)."""
        if self._gens is None:
            n = len(self.domain)
            gens: list[Perm] = []
            current = frozenset([identity(n)])
            members = [identity(n)]
            for x in self.elements:
                if x not in current:
                    members = _extend(members, current, gens, x, None)
                    current = frozenset(members)
                    gens.append(x)
            self._gens = tuple(gens)
        return self._gens

    def __contains__(self, p: object) -> bool:
        return p in self._set

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.domain == other.domain and self._set == other._set

    def __hash__(self) -> int:
        return hash((self.domain, self._set))

    def __repr__(self) -> str:
        return f"PermGroup(order={self.order}, degree={len(self.domain)})"

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self.domain == other.domain and self._set <= other._set

    def conjugate(self, g: Perm) -> PermGroup:
        """The subgroup g H g^-1."""
        gi = invert(g)
        return PermGroup(self.domain, (compose(compose(g, h), gi) for h in self.elements))

    def is_normal_in(self, other: PermGroup) -> bool:
        return all(self.conjugate(g) == self for g in other.generators)

    def orbit(self, i: int) -> frozenset[int]:
        return frozenset(p[i] for p in self.elements)

    def to_maps(self, generators_only: bool = True) -> list[dict[str, str]]:
        perms = self.generators if generators_only else self.elements
        return [{self.domain[i]: self.domain[p[i]] for i in range(len(p)) if p[i] != i} for p in perms]


def enumerate_group(generators: Iterable, domain: Sequence[str], cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    """Close ``generators`` (index tuples or ``{vertex: image}`` maps) into a group.

    Raises GroupTooLarge when the group has more than ``cap`` elements.
    """
    domain = tuple(domain)
    n = len(domain)
    gens = []
    for g in generators:
        p = perm_from_map(g, domain) if isinstance(g, Mapping) else _check_perm(g, n)
        if p != identity(n) and p not in gens:
            gens.append(p)
    elements = _closure(gens, n, cap)
    if elements is None:
        raise GroupTooLarge(f"group generated by {len(gens)} permutations exceeds cap {cap}")
    return PermGroup(domain, elements, gens)


def trivial_group(domain: Sequence[str]) -> PermGroup:
    return PermGroup(domain, [identity(len(domain))], [])


def subgroup_generated(group: PermGroup, generators: Iterable[Perm]) -> PermGroup:
    sub = enumerate_group(generators, group.domain, cap=group.order)
    if not sub.is_subgroup_of(group):
        raise GroupError("generators do not lie in the ambient group")
    return sub


def cyclic_subgroups(group: PermGroup) -> list[PermGroup]:
    seen: dict[frozenset, PermGroup] = {}
    for g in group.elements:
        elems = _closure([g], len(group.domain), None)
        key = frozenset(elems)
        if key not in seen:
            seen[key] = PermGroup(group.domain, elems, [g] if len(elems) > 1 else [])
    return list(seen.values())


def subgroup_classes(group: PermGroup, max_order: int | None = None) -> list[list[PermGroup]]:
    """Subgroups of ``group`` grouped into conjugacy classes.

    The search walks upward from the trivial group, joining one cyclic
    subgroup at a time, but only from one representative per conjugacy
    class; every subgroup is reached along a chain of its own subgroups, so
    bounding the order during the search loses nothing.  Each new class is
    expanded by conjugating its representative with every group element.
    """
    n = len(group.domain)
    e = identity(n)
    cyclic_gens = [z.generators[0] for z in cyclic_subgroups(group) if z.order > 1]
    inverses = [(g, invert(g)) for g in group.elements]
    class_of: dict[frozenset, int] = {frozenset([e]): 0}
    reps: list[tuple[list[Perm], frozenset, list[Perm]]] = [([e], frozenset([e]), [])]
    members: list[list[frozenset]] = [[frozenset([e])]]
    pos = 0
    while pos < len(reps):
        elems, key, gens = reps[pos]
        pos += 1
        for z in cyclic_gens:
            if z in key:
                continue
            new = _extend(elems, key, gens, z, max_order)
            if new is None:
                continue
            nkey = frozenset(new)
            if nkey in class_of:
                continue
            cid = len(reps)
            reps.append((new, nkey, gens + [z]))
            conj = []
            for g, gi in inverses:
                c = frozenset(compose(compose(g, h), gi) for h in new)
                if c not in class_of:
                    class_of[c] = cid
                    conj.append(c)
            members.append(conj)
    out = []
    for (elems, key, gens), conj in zip(reps, members):
        cls = [PermGroup(group.domain, elems, gens)]
        cls.extend(PermGroup(group.domain, c) for c in conj if c != key)
        cls.sort(key=lambda h: h.elements)
        out.append(cls)
    out.sort(key=lambda c: (c[0].order, c[0].elements))
    return out


def all_subgroups(group: PermGroup, max_order: int | None = None) -> list[PermGroup]:
    """Every subgroup of ``group`` (of order at most ``max_order`` if given), sorted by (order, elements)."""
    subs = [h for cls in subgroup_classes(group, max_order) for h in cls]
    subs.sort(key=lambda h: (h.order, h.elements))
    return subs


def automorphism_group(graph: MultiGraph, cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    """All multiplicity-preserving vertex permutations, found by backtracking."""
    verts = graph.vertices
    n = len(verts)
    m = [[graph.mult(verts[i], verts[j]) for j in range(n)] for i in range(n)]
    deg = [sum(row) for row in m]
    found: list[Perm] = []
    image = [-1] * n
    used = [False] * n

    def extend(i: int) -> None:
        if i == n:
            found.append(tuple(image))
            if len(found) > cap:
                raise GroupTooLarge(f"automorphism group exceeds cap {cap}")
            return
        for j in range(n):
            if used[j] or deg[j] != deg[i]:
                continue
            if any(m[i][k] != m[j][image[k]] for k in range(i)):
                continue
            image[i] = j
            used[j] = True
            extend(i + 1)
            used[j] = False
        image[i] = -1

    extend(0)
    return PermGroup(verts, found)


@dataclass(frozen=True)
class ActionViolation:
    element: dict[str, str]
    pair: tuple[str, str]
    mult: int
    image_pair: tuple[str, str]
    image_mult: int

    def __str__(self) -> str:
        return (f"element {self.element} maps {{{self.pair[0]},{self.pair[1]}}} (multiplicity {self.mult}) "
                f"to {{{self.image_pair[0]},{self.image_pair[1]}}} (multiplicity {self.image_mult})")


def validate_action(graph: MultiGraph, group: PermGroup) -> ActionViolation | None:
    """None if every element preserves all edge multiplicities, else the first failure.

    Elements are scanned in sorted order and vertex pairs lexicographically.
    """
    verts = graph.vertices
    if group.domain != verts:
        raise GroupError("group domain differs from the graph's vertex set")
    n = len(verts)
    for p in group.elements:
        for i in range(n):
            for j in range(i + 1, n):
                a = graph.mult(verts[i], verts[j])
                b = graph.mult(verts[p[i]], verts[p[j]])
                if a != b:
                    elem = {verts[k]: verts[p[k]] for k in range(n) if p[k] != k}
                    return ActionViolation(elem, (verts[i], verts[j]), a,
                                           tuple(sorted((verts[p[i]], verts[p[j]]))), b)
    return None


def generators_preserve_edges(graph: MultiGraph, generators: Iterable[Perm]) -> bool:
    """Fast action test: each generator maps every edge to an edge of equal multiplicity.

    A vertex permutation that does so is injective on pairs, hence maps the
    edge set onto itself; closure under products then covers the group.
    """
    verts = graph.vertices
    for p in generators:
        for (v, w), m in graph.edge_mult.items():
            if graph.mult(verts[p[graph.index(v)]], verts[p[graph.index(w)]]) != m:
                return False
    return True


@dataclass(frozen=True)
class Rigidity:
    vertex_set: tuple[str, ...]
    rigidifier: PermGroup = field(compare=True)
    singular: bool = False

    def __post_init__(self):
        if not self.vertex_set:
            raise GroupError("a rigidity must contain a vertex")
        if self.singular != (len(self.vertex_set) == 1):
            raise GroupError("singular flag must match |vertex_set| == 1")


@dataclass(frozen=True)
class RigidityOrbits:
    orbits: tuple[tuple[Rigidity, ...], ...]
    fixed: tuple[Rigidity, ...]

    @property
    def min_orbit_size(self) -> int | None:
        return min((len(o) for o in self.orbits), default=None)


class GGraph:
    """A connected multigraph with a validated permutation action.

    Rigidity data is computed on first use and cached; the object is
    otherwise immutable.
    """

    __slots__ = ("graph", "group", "_adj", "_stab", "_rig", "_orb", "_bit")

    def __init__(self, graph: MultiGraph, group: PermGroup, *, check: bool = True):
        if group.domain != graph.vertices:
            raise GroupError("group domain differs from the graph's vertex set")
        if check:
            if not is_connected(graph):
                raise GroupError("a G-graph must be connected")
            if not generators_preserve_edges(graph, group.generators):
                raise InvalidAction(validate_action(graph, group))
        self.graph = graph
        self.group = group
        verts = graph.vertices
        self._adj = [[graph.index(w) for w in graph.neighbors(v)] for v in verts]
        self._bit = {p: 1 << k for k, p in enumerate(group.elements)}
        self._stab = None
        self._rig = None
        self._orb = None

    @property
    def n(self) -> int:
        return len(self.graph.vertices)

    def _stab_masks(self) -> list[int]:
        if self._stab is None:
            masks = [0] * self.n
            for p, b in self._bit.items():
                for i, j in enumerate(p):
                    if i == j:
                        masks[i] |= b
            self._stab = masks
        return self._stab

    def _group_from_mask(self, mask: int) -> PermGroup:
        return PermGroup(self.group.domain, [p for p, b in self._bit.items() if mask & b])

    def stabilizer_mask(self, v: str) -> int:
        return self._stab_masks()[self.graph.index(v)]

    def orbit(self, v: str) -> tuple[str, ...]:
        verts = self.graph.vertices
        return tuple(sorted({verts[j] for j in self.group.orbit(self.graph.index(v))}))

    def rigidities(self) -> tuple[Rigidity, ...]:
        if self._rig is None:
            self._rig = _rigidities(self)
        return self._rig

    def rigidity_orbits(self) -> RigidityOrbits:
        if self._orb is None:
            self._orb = _rigidity_orbits(self)
        return self._orb

    def to_json(self) -> dict:
        data = self.graph.to_json()
        data["generators"] = self.group.to_maps()
        return data

    @classmethod
    def from_json(cls, data: Mapping, cap: int = DEFAULT_GROUP_CAP) -> GGraph:
        graph = MultiGraph.from_json(data)
        gens = data.get("generators", [])
        if not isinstance(gens, list):
            raise GroupError("'generators' must be a list of vertex maps")
        group = enumerate_group(gens, graph.vertices, cap)
        return cls(graph, group)

    def __repr__(self) -> str:
        return f"GGraph({self.graph!r}, order={self.group.order})"


def vertex_stabilizer(gg: GGraph, v: str) -> PermGroup:
    i = gg.graph.index(v)
    return PermGroup(gg.group.domain, [p for p in gg.group.elements if p[i] == i])


def fixed_subgraph(gg: GGraph, h: PermGroup) -> MultiGraph:
    """Full subgraph on the vertices fixed by every element of ``h``."""
    if not h.is_subgroup_of(gg.group):
        raise GroupError("h is not a subgroup of the acting group")
    verts = gg.graph.vertices
    fixed = [verts[i] for i in range(len(verts)) if all(p[i] == i for p in h.elements)]
    return full_subgraph(gg.graph, fixed)


def _components_within(adj: list[list[int]], allowed: list[int]) -> list[list[int]]:
    inside = set(allowed)
    seen: set[int] = set()
    comps = []
    for s in allowed:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w in inside and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def _rigidities(gg: GGraph) -> tuple[Rigidity, ...]:
    # The rigidifier of a rigidity is the stabilizer of any of its vertices,
    # so vertex stabilizers are the only candidates worth trying.
    masks = gg._stab_masks()
    verts = gg.graph.vertices
    out = []
    for h in sorted(set(masks)):
        fixed = [i for i, m in enumerate(masks) if h & ~m == 0]
        for comp in _components_within(gg._adj, fixed):
            if all(masks[i] == h for i in comp):
                names = tuple(sorted(verts[i] for i in comp))
                out.append(Rigidity(names, gg._group_from_mask(h), len(names) == 1))
    out.sort(key=lambda r: r.vertex_set)
    return tuple(out)


def rigidities(gg: GGraph) -> tuple[Rigidity, ...]:
    """All rigidities of the G-graph, pairwise disjoint, sorted by vertex set."""
    return gg.rigidities()


def _rigidity_orbits(gg: GGraph) -> RigidityOrbits:
    rigs = gg.rigidities()
    verts = gg.graph.vertices
    where = {r.vertex_set: k for k, r in enumerate(rigs)}
    idx = [[gg.graph.index(v) for v in r.vertex_set] for r in rigs]
    gens = gg.group.generators
    orbit_of = [-1] * len(rigs)
    orbits = []
    for k in range(len(rigs)):
        if orbit_of[k] >= 0:
            continue
        orbit_of[k] = len(orbits)
        members = [k]
        stack = [k]
        while stack:
            a = stack.pop()
            for p in gens:
                image = tuple(sorted(verts[p[i]] for i in idx[a]))
                b = where.get(image)
                if b is None:
                    raise AssertionError(f"image of rigidity {rigs[a].vertex_set} is not a rigidity")
                if orbit_of[b] < 0:
                    orbit_of[b] = orbit_of[k]
                    members.append(b)
                    stack.append(b)
        orbits.append(tuple(rigs[b] for b in sorted(members)))
    fixed = tuple(o[0] for o in orbits if len(o) == 1)
    return RigidityOrbits(tuple(orbits), fixed)


def rigidity_orbits(gg: GGraph) -> RigidityOrbits:
    """G-orbits on the rigidities, plus the G-fixed rigidities and minimum orbit size."""
    return gg.rigidity_orbits()
