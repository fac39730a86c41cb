"""Counting bounds on rigidities of G-graphs, checked instance by instance.

Each ``check_*`` function evaluates one inequality on a concrete G-graph and
returns a :class:`Verdict`.  A verdict never raises on a failed inequality;
the batch driver decides what a violation means.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .graphs import BipartiteDualGraph, betti, is_connected
from .groups import GGraph

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not applicable"
HYPOTHESIS_VIOLATED = "hypothesis violated"


class EpimorphismError(ValueError):
    """The supplied vertex map is not a color-respecting epimorphism."""


@dataclass(frozen=True)
class Verdict:
    theorem: str
    status: str
    tight: bool = False
    detail: Mapping = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status != VIOLATED

    def __str__(self) -> str:
        if self.status == HOLDS:
            return "holds (tight)" if self.tight else "holds"
        return self.status

    def to_json(self) -> dict:
        return {"status": self.status, "tight": self.tight, "detail": _jsonable(self.detail)}


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _compare(theorem: str, lhs, rhs, **detail) -> Verdict:
    status = HOLDS if lhs <= rhs else VIOLATED
    return Verdict(theorem, status, lhs == rhs, {"lhs": lhs, "rhs": rhs, **detail})


def check_tree_bound(gg: GGraph) -> Verdict:
    """A tree carries at most one rigidity."""
    b = betti(gg.graph)
    if b != 0:
        return Verdict("tree", NOT_APPLICABLE, detail={"betti": b})
    return _compare("tree", len(gg.rigidities()), 1)


def check_fixpoint_bound(gg: GGraph) -> Verdict:
    """|D_G| <= beta + 1 whenever some rigidity is fixed by the whole group."""
    orb = gg.rigidity_orbits()
    if not orb.fixed:
        return Verdict("fixpoint", NOT_APPLICABLE, detail={"fixed_rigidities": 0})
    return _compare("fixpoint", len(gg.rigidities()), betti(gg.graph) + 1,
                    fixed_rigidities=len(orb.fixed))


def check_orbit_avoid_bound(gg: GGraph, v: str) -> Verdict:
    """Rigidities missing the orbit Gv number at most beta + |Gv| - 1."""
    orbit = set(gg.orbit(v))
    avoiding = sum(1 for r in gg.rigidities() if orbit.isdisjoint(r.vertex_set))
    return _compare("orbit_avoid", avoiding, betti(gg.graph) + len(orbit) - 1,
                    vertex=v, orbit_size=len(orbit))


def check_orbit_avoid_all(gg: GGraph) -> Verdict:
    """The orbit-avoid bound at every vertex; reports the first failure or the tightest case."""
    worst = None
    for v in gg.graph.vertices:
        verdict = check_orbit_avoid_bound(gg, v)
        if not verdict.ok:
            return verdict
        slack = verdict.detail["rhs"] - verdict.detail["lhs"]
        if worst is None or slack < worst[0]:
            worst = (slack, verdict)
    return worst[1]


def check_main_bound(gg: GGraph) -> Verdict:
    """|D_G| <= beta + 2d - 1 and #orbits <= (beta - 1)/d + 2, d the least orbit size."""
    rigs = gg.rigidities()
    if not rigs:
        return Verdict("main", NOT_APPLICABLE, detail={"rigidities": 0})
    orb = gg.rigidity_orbits()
    d = orb.min_orbit_size
    b = betti(gg.graph)
    count_rhs = b + 2 * d - 1
    orbit_rhs = Fraction(b - 1, d) + 2
    n_orbits = len(orb.orbits)
    ok = len(rigs) <= count_rhs and n_orbits <= orbit_rhs
    tight = len(rigs) == count_rhs or n_orbits == orbit_rhs
    return Verdict("main", HOLDS if ok else VIOLATED, tight,
                   {"rigidities": len(rigs), "count_rhs": count_rhs,
                    "orbits": n_orbits, "orbit_rhs": orbit_rhs, "d": d})


def check_corollary(gg: GGraph) -> Verdict:
    """#orbits <= beta + 1, and equality forces (all rigidities fixed) or (beta = 1, none fixed)."""
    orb = gg.rigidity_orbits()
    b = betti(gg.graph)
    n_orbits = len(orb.orbits)
    all_fixed = len(orb.fixed) == len(gg.rigidities())
    none_fixed = not orb.fixed
    detail = {"lhs": n_orbits, "rhs": b + 1, "all_fixed": all_fixed, "none_fixed": none_fixed}
    if n_orbits > b + 1:
        return Verdict("corollary", VIOLATED, False, detail)
    if n_orbits == b + 1 and not (all_fixed or (b == 1 and none_fixed)):
        return Verdict("corollary", VIOLATED, True, detail)
    return Verdict("corollary", HOLDS, n_orbits == b + 1, detail)


def _fixpoint_off_by_one(gg: GGraph) -> Verdict:
    # Deliberately wrong (|D_G| <= beta); used only to self-test the harness.
    orb = gg.rigidity_orbits()
    if not orb.fixed:
        return Verdict("fixpoint", NOT_APPLICABLE)
    return _compare("fixpoint", len(gg.rigidities()), betti(gg.graph))


THEOREMS: dict[str, Callable[[GGraph], Verdict]] = {
    "tree": check_tree_bound,
    "fixpoint": check_fixpoint_bound,
    "orbit_avoid": check_orbit_avoid_all,
    "main": check_main_bound,
    "corollary": check_corollary,
}

MUTANTS: dict[str, Callable[[GGraph], Verdict]] = {
    "fixpoint": _fixpoint_off_by_one,
}


@dataclass
class BoundReport:
    instance_id: str
    quantities: dict
    verdicts: dict[str, Verdict]
    instance: dict | None = None

    @property
    def violated(self) -> list[str]:
        return [name for name, v in self.verdicts.items() if not v.ok]

    def to_json(self, include_instance: bool = False) -> dict:
        data = {
            "id": self.instance_id,
            "quantities": _jsonable(self.quantities),
            "verdicts": {k: v.to_json() for k, v in self.verdicts.items()},
        }
        if include_instance or self.violated:
            data["instance"] = self.instance
        return data


def ggraph_quantities(gg: GGraph) -> dict:
    rigs = gg.rigidities()
    orb = gg.rigidity_orbits()
    return {
        "vertices": gg.graph.num_vertices,
        "edges": gg.graph.num_edges,
        "group_order": gg.group.order,
        "betti": betti(gg.graph),
        "rigidities": len(rigs),
        "singular": sum(r.singular for r in rigs),
        "orbits": len(orb.orbits),
        "d": orb.min_orbit_size,
        "fixed": len(orb.fixed),
        "all_fixed": len(orb.fixed) == len(rigs),
    }


def analyze_ggraph(gg: GGraph, instance_id: str = "", theorems=None, mutants=()) -> BoundReport:
    names = list(theorems) if theorems else list(THEOREMS)
    verdicts = {}
    for name in names:
        fn = MUTANTS[name] if name in mutants else THEOREMS[name]
        verdicts[name] = fn(gg)
    return BoundReport(instance_id, ggraph_quantities(gg), verdicts, gg.to_json())


def check_betti_epimorphism(src: BipartiteDualGraph, dst: BipartiteDualGraph,
                            vmap: Mapping[str, str]) -> Verdict:
    """Betti monotonicity along an epimorphism ``vmap: src -> dst`` of bipartite dual graphs.

    Structural problems (not a map, not color-respecting, not an epimorphism,
    purple degree != 2, ``src`` disconnected) raise EpimorphismError.  A map
    that is an epimorphism but misses the fiber-size hypothesis
    ``i_x >= e_Gamma`` yields status "hypothesis violated"; otherwise the
    verdict compares betti(dst) with betti(src).
    """
    g_src, g_dst = src.underlying, dst.underlying
    if set(vmap) != set(g_src.vertices):
        raise EpimorphismError("vertex map must be defined on exactly the source vertices")
    for v, x in vmap.items():
        if x not in g_dst:
            raise EpimorphismError(f"{v} maps to unknown vertex {x!r}")
        if src.color(v) != dst.color(x):
            raise EpimorphismError(f"{v} ({src.color(v)}) maps to {x} ({dst.color(x)})")
    if set(vmap.values()) != set(g_dst.vertices):
        raise EpimorphismError("vertex map is not surjective")
    for v, w in g_src.edge_mult:
        if g_dst.mult(vmap[v], vmap[w]) == 0:
            raise EpimorphismError(f"edge {v}-{w} maps to a non-edge")
    images = {tuple(sorted((vmap[v], vmap[w]))) for v, w in g_src.edge_mult}
    for pair in g_dst.edge_mult:
        if pair not in images:
            raise EpimorphismError(f"edge {pair[0]}-{pair[1]} has no preimage edge")
    for side, g in (("source", src), ("target", dst)):
        if not g.purple_degrees_ok():
            raise EpimorphismError(f"{side} has a purple vertex whose degree is not 2")
    if not is_connected(g_src):
        raise EpimorphismError("source graph must be connected")

    fiber: dict[str, int] = {x: 0 for x in g_dst.vertices}
    for x in vmap.values():
        fiber[x] += 1
    e_cyan = {c: fiber[c] for c in sorted(dst.cyan)}
    i_purple = {x: fiber[x] for x in sorted(dst.purple)}
    e_purple = {}
    bad = []
    for x in sorted(dst.purple):
        ends = [c for c, m in g_dst.neighbors(x).items() for _ in range(m)]
        e_purple[x] = Fraction(sum(e_cyan[c] for c in ends), 2)
        bad.extend((x, c) for c in sorted(set(ends)) if i_purple[x] < e_cyan[c])
    detail = {"e_cyan": e_cyan, "i_purple": i_purple, "e_purple": e_purple,
              "betti_src": betti(g_src), "betti_dst": betti(g_dst)}
    if bad:
        return Verdict("betti_epimorphism", HYPOTHESIS_VIOLATED, detail={**detail, "failing": bad})
    lhs, rhs = detail["betti_dst"], detail["betti_src"]
    return Verdict("betti_epimorphism", HOLDS if lhs <= rhs else VIOLATED, lhs == rhs, detail)
