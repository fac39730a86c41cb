"""Labeled dual graphs of normal-crossing special fibers and their Galois base change.

Fields are modeled through a finite Galois group: a subgroup ``H`` stands for
its fixed field, so a larger field is a smaller subgroup and the degree of a
field is the index of its subgroup.  Each irreducible component carries the
subgroup of its field of constants (``stab``), a genus, and the subgroups of
the fields over which it has points (``point_fields``).  Each intersection
point carries the subgroup of its residue field.

Subgroup labels are exact, not up to conjugacy: they record one embedding of
each field into a common splitting field, which is what the coset
construction of the base change consumes.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .graphs import BipartiteDualGraph, MultiGraph, betti, is_connected
from .groups import (
    DEFAULT_GROUP_CAP,
    GGraph,
    PermGroup,
    _closure,
    all_subgroups,
    compose,
    generators_preserve_edges,
)
from .theorems import HOLDS, VIOLATED, Verdict, check_betti_epimorphism

INCONSISTENT = "inconsistent with genus bounds"


class InvalidInstance(ValueError):
    """The labeled instance breaks a structural invariant."""


class CrossCheckError(AssertionError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True)
class Subgroup:
    id: str
    group: PermGroup
    nonreal: bool = False


class GaloisModel:
    """A finite Galois group with every subgroup labeled and flagged.

    ``nonreal`` marks subgroups whose fixed field is nonreal.  Since a field
    containing a nonreal field is nonreal, the flag passes down to every
    smaller subgroup; flags on unlisted subgroups are inferred that way.
    """

    def __init__(self, group: PermGroup, listed: Sequence[Subgroup] = ()):
        self.group = group
        canon = all_subgroups(group)
        by_elems = {h.element_set: h for h in canon}
        ids: dict[frozenset, str] = {}
        flags: dict[frozenset, bool] = {}
        for sub in listed:
            key = sub.group.element_set
            if key not in by_elems:
                raise InvalidInstance(f"subgroup {sub.id!r} is not a subgroup of the Galois group")
            if key in ids:
                raise InvalidInstance(f"subgroup {sub.id!r} duplicates {ids[key]!r}")
            if sub.id in ids.values():
                raise InvalidInstance(f"duplicate subgroup id {sub.id!r}")
            ids[key] = sub.id
            flags[key] = sub.nonreal
        for key, flag in flags.items():
            for other, oflag in flags.items():
                if flag and other < key and not oflag:
                    raise InvalidInstance(
                        f"nonreal flag of {ids[key]!r} must pass to its subgroup {ids[other]!r}")
        taken = set(ids.values())
        auto = 0
        subs = []
        for h in canon:
            key = h.element_set
            if key not in ids:
                if h.order == 1 and "1" not in taken:
                    name = "1"
                elif h.order == group.order and "G" not in taken:
                    name = "G"
                else:
                    while f"H{auto}" in taken:
                        auto += 1
                    name = f"H{auto}"
                    auto += 1
                taken.add(name)
                ids[key] = name
                flags[key] = any(f and key <= k for k, f in flags.items() if k in ids and f)
            subs.append(Subgroup(ids[key], h, flags[key]))
        self.subgroups: tuple[Subgroup, ...] = tuple(subs)
        self._by_id = {s.id: s for s in subs}
        self._id_of = {s.group.element_set: s.id for s in subs}
        self.full_id = self._id_of[group.element_set]
        self.trivial_id = self._id_of[frozenset([tuple(range(len(group.domain)))])]

    def __contains__(self, sid: object) -> bool:
        return sid in self._by_id

    def __getitem__(self, sid: str) -> Subgroup:
        try:
            return self._by_id[sid]
        except KeyError:
            raise InvalidInstance(f"unknown subgroup id {sid!r}") from None

    def id_of(self, h: PermGroup) -> str:
        return self._id_of[h.element_set]

    def leq(self, a: str, b: str) -> bool:
        return self[a].group.element_set <= self[b].group.element_set

    def lt(self, a: str, b: str) -> bool:
        return self[a].group.element_set < self[b].group.element_set

    def index(self, sid: str) -> int:
        return self.group.order // self[sid].group.order

    def nonreal(self, sid: str) -> bool:
        return self[sid].nonreal

    @property
    def real(self) -> bool:
        """Whether the ground field itself is real."""
        return not self[self.full_id].nonreal

    def conjugate(self, a: str, b: str) -> bool:
        ha, hb = self[a].group, self[b].group
        return ha.order == hb.order and any(ha.conjugate(g) == hb for g in self.group.elements)

    def downward_closure(self, ids: Iterable[str]) -> frozenset[str]:
        tops = [self[i].group.element_set for i in ids]
        return frozenset(s.id for s in self.subgroups if any(s.group.element_set <= t for t in tops))

    def to_json(self) -> dict:
        elements = list(self.group.elements)
        pos = {p: k for k, p in enumerate(elements)}
        return {
            "order": self.group.order,
            "elements": [list(p) for p in elements],
            "subgroups": [
                {"id": s.id, "elements": sorted(pos[p] for p in s.group.elements), "nonreal": s.nonreal}
                for s in self.subgroups
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, cap: int = DEFAULT_GROUP_CAP) -> GaloisModel:
        try:
            raw = [tuple(int(x) for x in p) for p in data["elements"]]
            order = data.get("order", len(raw))
            listed = data.get("subgroups", [])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInstance(f"malformed galois object: {exc}") from None
        if not raw:
            raise InvalidInstance("the Galois group needs at least the identity element")
        n = len(raw[0])
        if any(sorted(p) != list(range(n)) for p in raw):
            raise InvalidInstance("Galois group elements must be permutations of 0..n-1 of equal length")
        if len(set(raw)) != len(raw) or order != len(raw) or len(raw) > cap:
            raise InvalidInstance("Galois group element list must be duplicate-free and match 'order'")
        closed = _closure(raw, n, len(raw))
        if closed is None or set(closed) != set(raw):
            raise InvalidInstance("Galois group elements are not closed under composition")
        domain = [str(i) for i in range(n)]
        group = PermGroup(domain, raw)
        subs = []
        for entry in listed:
            try:
                sid = str(entry["id"])
                elems = [raw[k] for k in entry["elements"]]
            except (KeyError, TypeError, IndexError) as exc:
                raise InvalidInstance(f"malformed subgroup entry {entry!r}: {exc}") from None
            h = PermGroup(domain, elems)
            closed = _closure(list(elems), n, len(raw))
            if closed is None or set(closed) != set(elems):
                raise InvalidInstance(f"subgroup {sid!r} is not closed under composition")
            subs.append(Subgroup(sid, h, bool(entry.get("nonreal", False))))
        return cls(group, subs)


@dataclass(frozen=True)
class Component:
    id: str
    stab: str
    genus: int = 0
    point_fields: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Intersection:
    id: str
    between: tuple[str, str]
    residue: str


@dataclass(frozen=True)
class Declared:
    g_F: int | None = None
    real_F: bool | None = None
    henselian: bool = False


class ReductionGraph:
    """A labeled bipartite dual graph: cyan components, purple intersection points."""

    def __init__(self, galois: GaloisModel, components: Sequence[Component],
                 intersections: Sequence[Intersection], declared: Declared = Declared(),
                 *, check: bool = True):
        self.galois = galois
        self.components = tuple(sorted(components, key=lambda c: c.id))
        self.intersections = tuple(sorted(intersections, key=lambda p: p.id))
        self.declared = declared
        self.comp = {c.id: c for c in self.components}
        self.point = {p.id: p for p in self.intersections}
        cyan = [c.id for c in self.components]
        purple = [p.id for p in self.intersections]
        if len(set(cyan)) != len(cyan) or len(set(purple)) != len(purple) or set(cyan) & set(purple):
            raise InvalidInstance("component and intersection ids must be unique")
        edges = []
        for p in self.intersections:
            a, b = p.between
            if a not in self.comp or b not in self.comp:
                raise InvalidInstance(f"intersection {p.id!r} references an unknown component")
            if a == b:
                raise InvalidInstance(f"intersection {p.id!r} must join two distinct components")
            edges += [(a, p.id), (b, p.id)]
        self.underlying = BipartiteDualGraph(cyan, purple, MultiGraph.from_edges(cyan + purple, edges))
        self._bc = None
        if check:
            self.validate()

    def validate(self) -> None:
        gm = self.galois
        if not self.components:
            raise InvalidInstance("at least one component is required")
        for c in self.components:
            gm[c.stab]
            if not isinstance(c.genus, int) or c.genus < 0:
                raise InvalidInstance(f"genus of {c.id!r} must be a nonnegative integer")
            for h in c.point_fields:
                if not gm.leq(h, c.stab):
                    raise InvalidInstance(f"point field {h!r} of {c.id!r} does not contain its constant field")
            if gm.downward_closure(c.point_fields) != c.point_fields:
                raise InvalidInstance(f"point fields of {c.id!r} must be closed under field extension")
        for p in self.intersections:
            gm[p.residue]
            for end in p.between:
                c = self.comp[end]
                if not gm.leq(p.residue, c.stab):
                    raise InvalidInstance(f"residue field of {p.id!r} does not contain the constants of {end!r}")
                if p.residue not in c.point_fields:
                    raise InvalidInstance(f"residue field of {p.id!r} is missing from point fields of {end!r}")
        if not is_connected(self.underlying.underlying):
            raise InvalidInstance("the dual graph must be connected")
        if not is_connected(base_change(self).ggraph.graph):
            raise InvalidInstance("the base-changed dual graph must be connected")

    @property
    def point_field_union(self) -> frozenset[str]:
        return frozenset().union(*(c.point_fields for c in self.components))

    def to_json(self) -> dict:
        data = {
            "galois": self.galois.to_json(),
            "components": [
                {"id": c.id, "stab": c.stab, "genus": c.genus, "point_fields": sorted(c.point_fields)}
                for c in self.components
            ],
            "intersections": [
                {"id": p.id, "between": list(p.between), "residue": p.residue} for p in self.intersections
            ],
        }
        d = self.declared
        declared = {k: v for k, v in (("g_F", d.g_F), ("real_F", d.real_F)) if v is not None}
        if d.henselian:
            declared["henselian"] = True
        if declared:
            data["declared"] = declared
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> ReductionGraph:
        try:
            galois = GaloisModel.from_json(data["galois"])
            comps = [Component(str(c["id"]), str(c["stab"]), c.get("genus", 0),
                               frozenset(str(h) for h in c.get("point_fields", [])))
                     for c in data["components"]]
            points = [Intersection(str(p["id"]), tuple(str(x) for x in p["between"]), str(p["residue"]))
                      for p in data.get("intersections", [])]
            dec = data.get("declared", {}) or {}
            declared = Declared(dec.get("g_F"), dec.get("real_F"), bool(dec.get("henselian", False)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInstance(f"malformed reduction graph: {exc}") from None
        if any(len(p.between) != 2 for p in points):
            raise InvalidInstance("each intersection lies on exactly two components")
        if declared.g_F is not None and (not isinstance(declared.g_F, int) or declared.g_F < 0):
            raise InvalidInstance("declared g_F must be a nonnegative integer")
        return cls(galois, comps, points, declared)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class BaseChange:
    ggraph: GGraph
    dual: BipartiteDualGraph
    projection: dict[str, str]
    copy_label: dict[str, str]


def _left_cosets(group: PermGroup, sub: PermGroup) -> list[frozenset]:
    seen: set = set()
    cosets = []
    for g in group.elements:
        if g in seen:
            continue
        c = frozenset(compose(g, h) for h in sub.elements)
        seen |= c
        cosets.append(c)
    return cosets


def base_change(rg: ReductionGraph) -> BaseChange:
    """The dual graph after splitting every label: the coset construction.

    A vertex with label ``H`` becomes the left cosets ``gH``; an incidence
    between a point and a component joins ``gH_P`` to ``gH_Gamma`` (well
    defined because ``H_P <= H_Gamma``).  The Galois group acts by left
    multiplication; its image in the vertex permutations is the acting group.
    """
    if rg._bc is not None:
        return rg._bc
    gm = rg.galois
    g_elems = gm.group.elements
    names: list[str] = []
    proj: dict[str, str] = {}
    label: dict[str, str] = {}
    coset_of: dict[str, dict] = {}
    layout = [(c.id, c.stab) for c in rg.components] + [(p.id, p.residue) for p in rg.intersections]
    for vid, sid in layout:
        cosets = _left_cosets(gm.group, gm[sid].group)
        lookup = {}
        for k, c in enumerate(cosets):
            name = f"{vid}#{k}"
            names.append(name)
            proj[name] = vid
            label[name] = sid
            for g in c:
                lookup[g] = name
        coset_of[vid] = lookup
    if len(set(names)) != len(names):
        raise InvalidInstance("vertex ids collide after base change; avoid '#' in ids")
    edges = []
    for p in rg.intersections:
        for end in p.between:
            for g in g_elems:
                a, b = coset_of[p.id][g], coset_of[end][g]
                edges.append((a, b))
    graph = MultiGraph(names, {e: 1 for e in set(tuple(sorted(e)) for e in edges)})
    verts = graph.vertices
    index = {v: i for i, v in enumerate(verts)}
    rep = {}
    for vid, lookup in coset_of.items():
        for g, name in lookup.items():
            rep.setdefault(name, g)
    perms = set()
    for g in g_elems:
        perm = [0] * len(verts)
        for v in verts:
            perm[index[v]] = index[coset_of[proj[v]][compose(g, rep[v])]]
        perms.add(tuple(perm))
    image = PermGroup(verts, perms)
    gg = GGraph(graph, image, check=False)
    if not generators_preserve_edges(graph, image.generators):
        raise CrossCheckError("base change action does not preserve edges")
    cyan = [v for v in verts if proj[v] in rg.comp]
    purple = [v for v in verts if proj[v] in rg.point]
    bc = BaseChange(gg, BipartiteDualGraph(cyan, purple, graph), proj, label)
    rg._bc = bc
    return bc


def omega_rat_int(rg: ReductionGraph) -> frozenset[str]:
    """Components meeting another component in a point rational over their constants."""
    out = set()
    for p in rg.intersections:
        for end in p.between:
            if p.residue == rg.comp[end].stab:
                out.add(end)
    return frozenset(out)


Property = Callable[[str], bool]


def property_of(rg: ReductionGraph, name: str) -> Property:
    """``"empty"`` holds for every field; ``"nonreal"`` reads the Galois flags."""
    if name == "empty":
        return lambda sid: True
    if name == "nonreal":
        return rg.galois.nonreal
    raise ValueError(f"unknown field property {name!r}")


def omega_P(rg: ReductionGraph, prop: str | Property = "nonreal") -> frozenset[str]:
    """Components all of whose point fields have the property."""
    holds = property_of(rg, prop) if isinstance(prop, str) else prop
    return frozenset(c.id for c in rg.components if all(holds(h) for h in c.point_fields))


def singular_cyan_orbit_count(rg: ReductionGraph) -> int:
    bc = base_change(rg)
    count = 0
    for orbit in bc.ggraph.rigidity_orbits().orbits:
        r = orbit[0]
        if r.singular and bc.projection[r.vertex_set[0]] in rg.comp:
            count += 1
    return count


def singular_rigidity_orbit_count(rg: ReductionGraph) -> int:
    """|components| - |rational-intersection components|, confirmed on the base change."""
    labels = len(rg.components) - len(omega_rat_int(rg))
    graph_side = singular_cyan_orbit_count(rg)
    if labels != graph_side:
        raise CrossCheckError(f"label count {labels} != singular cyan orbit count {graph_side}\n{rg.dumps()}")
    return labels


@dataclass(frozen=True)
class SubcurveCandidate:
    components: tuple[str, ...]
    normal_closure_label: str

    @property
    def singular(self) -> bool:
        return len(self.components) == 1


def subcurve_conditions(rg: ReductionGraph, ys: Iterable[str], label: str,
                        conjugate_labels: bool = False) -> bool:
    """Literal test of the three conditions for a set of components to be a rigidity class.

    (i) every component has constants ``label`` (or a conjugate, if allowed);
    (ii) the set stays connected through points whose residue field is no
    bigger than the constants; (iii) every component meeting the set in such
    a point belongs to it.
    """
    gm = rg.galois
    y = set(ys)
    if not y or not y <= set(rg.comp):
        return False
    for cid in y:
        s = rg.comp[cid].stab
        if not (s == label or (conjugate_labels and gm.conjugate(s, label))):
            return False
    links: dict[str, list[str]] = {cid: [] for cid in y}
    for p in rg.intersections:
        a, b = p.between
        for here, there in ((a, b), (b, a)):
            if here in y and p.residue == rg.comp[here].stab:
                if there not in y:
                    return False
                links[here].append(there)
    start = next(iter(y))
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in links[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen == y


def rigidity_subcurves(rg: ReductionGraph, *, cross_check: bool = True) -> list[SubcurveCandidate]:
    """Component sets corresponding to G-orbits of rigidities of the base change.

    Each component grows a class along points rational over its constants;
    the class counts when every component reached has the same constants.
    """
    out = []
    assigned: set[str] = set()
    for c in rg.components:
        if c.id in assigned:
            continue
        cls = {c.id}
        queue = deque([c.id])
        ok = True
        while queue:
            cur = queue.popleft()
            stab = rg.comp[cur].stab
            for p in rg.intersections:
                if cur not in p.between or p.residue != stab:
                    continue
                other = p.between[1] if p.between[0] == cur else p.between[0]
                if rg.comp[other].stab != stab:
                    ok = False
                if other not in cls:
                    cls.add(other)
                    queue.append(other)
        if ok:
            assigned |= cls
            cand = SubcurveCandidate(tuple(sorted(cls)), c.stab)
            if not subcurve_conditions(rg, cand.components, cand.normal_closure_label):
                raise CrossCheckError(f"class {cand.components} fails the literal conditions")
            out.append(cand)
    out.sort(key=lambda s: s.components)
    if cross_check:
        _cross_check_subcurves(rg, out)
    return out


def _cross_check_subcurves(rg: ReductionGraph, subcurves: list[SubcurveCandidate]) -> None:
    bc = base_change(rg)
    projected = {}
    for orbit in bc.ggraph.rigidity_orbits().orbits:
        for r in orbit:
            cyan = tuple(sorted({bc.projection[v] for v in r.vertex_set if bc.projection[v] in rg.comp}))
            key = (cyan, r.singular)
            projected.setdefault(key, set()).add(id(orbit))
    expected = {(s.components, s.singular) for s in subcurves}
    orbits = bc.ggraph.rigidity_orbits().orbits
    if len(subcurves) != len(orbits) or set(projected) != expected or any(len(v) != 1 for v in projected.values()):
        raise CrossCheckError(
            f"{len(subcurves)} subcurve classes vs {len(orbits)} rigidity orbits\n{rg.dumps()}")


def neg_minimal_labels(rg: ReductionGraph, holds: Property) -> frozenset[str]:
    """Labels whose field lacks the property, has points on the fiber, and has no proper subfield with points."""
    gm = rg.galois
    union = rg.point_field_union
    return frozenset(h for h in union
                     if not holds(h) and not any(gm.lt(h, k) for k in union))


def _betti_prime(rg: ReductionGraph) -> int:
    return betti(base_change(rg).ggraph.graph)


def check_nonrat_bound(rg: ReductionGraph, prop: str = "nonreal") -> Verdict:
    """|Omega^P minus rational-intersection components| <= beta' + 1, with both strictness cases."""
    holds = property_of(rg, prop)
    rat = omega_rat_int(rg)
    omega_p = omega_P(rg, holds)
    middle_set = sorted(omega_p - rat)
    middle = len(middle_set)
    left = sum(1 for cid in middle_set if rg.comp[cid].stab not in rg.comp[cid].point_fields)
    bp = _betti_prime(rg)
    rhs = bp + 1
    hyp_i = [cid for cid in middle_set if rg.comp[cid].stab in rg.comp[cid].point_fields]
    minimal = neg_minimal_labels(rg, holds)
    hyp_ii = [p.id for p in rg.intersections
              if p.residue in minimal and all(e in rat for e in p.between)]
    failures = []
    if middle > rhs:
        failures.append("bound")
    if hyp_i and not left < middle:
        failures.append("strict (i)")
    if hyp_ii and not middle < rhs:
        failures.append("strict (ii)")
    detail = {
        "property": prop, "left": left, "middle": middle, "rhs": rhs, "betti_prime": bp,
        "components": middle_set, "hypothesis_i": hyp_i, "hypothesis_ii": hyp_ii,
        "failures": failures,
    }
    status = VIOLATED if failures else HOLDS
    return Verdict("nonrat", status, middle == rhs, detail)


def check_nonrat_all(rg: ReductionGraph) -> Verdict:
    """The bound for both the empty property and the nonreal property."""
    results = [check_nonrat_bound(rg, "empty"), check_nonrat_bound(rg, "nonreal")]
    bad = [v for v in results if not v.ok]
    chosen = bad[0] if bad else results[0]
    detail = {v.detail["property"]: dict(v.detail) for v in results}
    return Verdict("nonrat", chosen.status, any(v.tight for v in results), detail)


def betti_monotone_check(rg: ReductionGraph) -> Verdict:
    """beta(D) <= beta(D') through the epimorphism that collapses each coset family."""
    bc = base_change(rg)
    verdict = check_betti_epimorphism(bc.dual, rg.underlying, bc.projection)
    gm = rg.galois
    want_i = {p.id: gm.index(p.residue) for p in rg.intersections}
    want_e = {c.id: gm.index(c.stab) for c in rg.components}
    if verdict.detail["i_purple"] != want_i or verdict.detail["e_cyan"] != want_e:
        raise CrossCheckError("fiber sizes of the projection differ from the subgroup indices")
    return Verdict("betti_monotone", verdict.status, verdict.tight,
                   {"lhs": verdict.detail["betti_dst"], "rhs": verdict.detail["betti_src"],
                    "i_x": want_i, "e_gamma": want_e})


def genus_sum(rg: ReductionGraph) -> int:
    """Sum over components of [G:stab] times genus."""
    return sum(rg.galois.index(c.stab) * c.genus for c in rg.components)


def arithmetic_genus(rg: ReductionGraph) -> int:
    """Arithmetic genus of the reduced fiber, 1 - chi(O), from the labels alone.

    chi = sum of [G:stab](1 - genus) over components minus sum of [G:residue]
    over points, all measured over the ground field.
    """
    gm = rg.galois
    chi = sum(gm.index(c.stab) * (1 - c.genus) for c in rg.components)
    chi -= sum(gm.index(p.residue) for p in rg.intersections)
    return 1 - chi


def real_classes(rg: ReductionGraph) -> tuple[list[str], list[str]]:
    """Components with real function field, and those with nonreal function field over real constants."""
    gm = rg.galois
    real, nonreal_over_real = [], []
    for c in rg.components:
        if gm.nonreal(c.stab):
            continue
        if any(not gm.nonreal(h) for h in c.point_fields):
            real.append(c.id)
        else:
            nonreal_over_real.append(c.id)
    return real, nonreal_over_real


def genus_budget_check(rg: ReductionGraph, g_F: int | None = None, real_F: bool | None = None,
                       henselian: bool | None = None) -> Verdict:
    """Consistency of the labels with a declared generic genus.

    (a) beta' + sum <= g_F; (b) |Omega \\ rat_int| + sum <= g_F + 1, and with
    a ground-field point the count of components without rational places
    drops by one more; (c) for a real generic fiber over a henselian base, a
    real point must exist and the real/nonreal-over-real sum is <= g_F.
    """
    d = rg.declared
    g_F = d.g_F if g_F is None else g_F
    real_F = d.real_F if real_F is None else real_F
    henselian = d.henselian if henselian is None else henselian
    if g_F is None:
        return Verdict("genus_budget", "not applicable", detail={"reason": "no genus declared"})
    gm = rg.galois
    s = genus_sum(rg)
    bp = _betti_prime(rg)
    rat = omega_rat_int(rg)
    n_nonrat = len(rg.components) - len(rat)
    failures = []
    detail: dict = {"g_F": g_F, "sum": s, "betti_prime": bp}
    detail["a"] = {"lhs": bp + s, "rhs": g_F}
    if bp + s > g_F:
        failures.append("a")
    detail["b"] = {"lhs": n_nonrat + s, "rhs": g_F + 1}
    if n_nonrat + s > g_F + 1:
        failures.append("b")
    if gm.full_id in rg.point_field_union:
        without_place = sum(1 for c in rg.components
                            if c.id not in rat and c.stab not in c.point_fields)
        detail["b_strict"] = {"lhs": without_place + s, "rhs": g_F}
        if without_place + s > g_F:
            failures.append("b_strict")
    if real_F and henselian:
        real_points = [h for h in rg.point_field_union if not gm.nonreal(h)]
        real, nr = real_classes(rg)
        lhs = sum(gm.index(rg.comp[c].stab) * rg.comp[c].genus for c in real)
        lhs += sum(1 + gm.index(rg.comp[c].stab) * rg.comp[c].genus for c in nr)
        detail["c"] = {"lhs": lhs, "rhs": g_F, "real_point": bool(real_points), "real_ground": gm.real}
        if not real_points:
            failures.append("c: no real point")
        if not gm.real:
            failures.append("c: ground field nonreal")
        if lhs > g_F:
            failures.append("c")
    detail["failures"] = failures
    return Verdict("genus_budget", INCONSISTENT if failures else HOLDS, False, detail)


def reduction_quantities(rg: ReductionGraph) -> dict:
    bc = base_change(rg)
    rat = omega_rat_int(rg)
    return {
        "components": len(rg.components),
        "intersections": len(rg.intersections),
        "group_order": rg.galois.group.order,
        "betti": betti(rg.underlying.underlying),
        "betti_prime": betti(bc.ggraph.graph),
        "base_change_vertices": bc.ggraph.graph.num_vertices,
        "base_change_cyan": len(bc.dual.cyan),
        "base_change_purple": len(bc.dual.purple),
        "omega_rat_int": sorted(rat),
        "omega_nonreal": sorted(omega_P(rg, "nonreal")),
        "N": singular_rigidity_orbit_count(rg),
        "subcurves": [list(s.components) for s in rigidity_subcurves(rg)],
        "genus_sum": genus_sum(rg),
    }
