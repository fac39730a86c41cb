
import pytest
from conftest import make_gg
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import all_subgroups_naive, rigidities_bruteforce, rigidity_orbit_sizes
from strategies import multigraphs

from riglab.graphs import GraphError, MultiGraph, is_connected
from riglab.groups import (
    GGraph,
    GroupError,
    GroupTooLarge,
    InvalidAction,
    all_subgroups,
    automorphism_group,
    compose,
    enumerate_group,
    fixed_subgraph,
    invert,
    rigidities,
    rigidity_orbits,
    subgroup_classes,
    trivial_group,
    validate_action,
    vertex_stabilizer,
)

TRIANGLE = ["v1", "v2", "v3"]


def test_enumerate_group_examples():
    assert enumerate_group([], TRIANGLE).order == 1
    assert enumerate_group([{"v1": "v2", "v2": "v1"}], TRIANGLE).order == 2
    s3 = enumerate_group([{"v1": "v2", "v2": "v1"}, {"v2": "v3", "v3": "v2"}], TRIANGLE)
    assert s3.order == 6
    assert s3.element_set == {(0, 1, 2), (1, 0, 2), (0, 2, 1), (1, 2, 0), (2, 0, 1), (2, 1, 0)}


def test_enumerate_group_cap_is_an_error():
    names = [f"v{i}" for i in range(6)]
    cycle = {names[i]: names[(i + 1) % 6] for i in range(6)}
    with pytest.raises(GroupTooLarge):
        enumerate_group([cycle, {"v0": "v1", "v1": "v0"}], names, cap=100)


def test_enumerate_group_rejects_bad_maps():
    with pytest.raises(GroupError):
        enumerate_group([{"v1": "v2"}], TRIANGLE)
    with pytest.raises(GroupError):
        enumerate_group([{"v1": "v9", "v9": "v1"}], TRIANGLE)


def test_composition_convention():
    p, q = (1, 2, 0), (1, 0, 2)
    assert compose(p, q) == tuple(p[q[i]] for i in range(3))
    assert compose(p, invert(p)) == (0, 1, 2)


def test_validate_action_examples():
    path = MultiGraph.from_edges(TRIANGLE, [("v1", "v2"), ("v2", "v3")])
    assert validate_action(path, trivial_group(TRIANGLE)) is None
    edge = MultiGraph.from_edges(["a", "b"], [("a", "b")])
    assert validate_action(edge, enumerate_group([{"a": "b", "b": "a"}], ["a", "b"])) is None
    rotation = enumerate_group([{"v1": "v2", "v2": "v3", "v3": "v1"}], TRIANGLE)
    bad = validate_action(path, rotation)
    assert bad is not None
    assert bad.mult != bad.image_mult
    with pytest.raises(InvalidAction):
        GGraph(path, rotation)


def test_ggraph_requires_connected_graph():
    g = MultiGraph(["a", "b"])
    with pytest.raises(GroupError):
        GGraph(g, trivial_group(g.vertices))


def test_stabilizers_on_square(square_reflection):
    gg = square_reflection
    assert vertex_stabilizer(gg, "v2") == gg.group
    assert vertex_stabilizer(gg, "v1").order == 1
    assert vertex_stabilizer(make_gg(["a"], [], []), "a").order == 1
    with pytest.raises(GraphError):
        vertex_stabilizer(gg, "v9")


def test_fixed_subgraph_examples(square_reflection):
    gg = square_reflection
    assert fixed_subgraph(gg, trivial_group(gg.graph.vertices)) == gg.graph
    fixed = fixed_subgraph(gg, gg.group)
    assert fixed.vertices == ("v2", "v4") and fixed.num_edges == 0
    tri = make_gg(TRIANGLE, [("v1", "v2"), ("v2", "v3"), ("v1", "v3")],
                  [{"v1": "v2", "v2": "v1"}, {"v2": "v3", "v3": "v2"}])
    assert fixed_subgraph(tri, tri.group).num_vertices == 0
    other = enumerate_group([{"v1": "v2", "v2": "v1"}], gg.graph.vertices)
    with pytest.raises(GroupError):
        fixed_subgraph(gg, other)


def test_rigidities_trivial_group():
    gg = make_gg(TRIANGLE, [("v1", "v2"), ("v2", "v3")], [])
    (r,) = rigidities(gg)
    assert r.vertex_set == tuple(TRIANGLE) and r.rigidifier.order == 1 and not r.singular
    (single,) = rigidities(make_gg(["a"], [], []))
    assert single.singular


def test_rigidities_square(square_reflection):
    rigs = rigidities(square_reflection)
    assert [r.vertex_set for r in rigs] == [("v2",), ("v4",)]
    assert all(r.singular and r.rigidifier == square_reflection.group for r in rigs)


def test_rigidities_path(path_reflection):
    rigs = rigidities(path_reflection)
    assert [r.vertex_set for r in rigs] == [("v2",)]


def test_orbits_examples(square_reflection, hexagon_swap):
    orb = rigidity_orbits(make_gg(TRIANGLE, [("v1", "v2"), ("v2", "v3")], []))
    assert [len(o) for o in orb.orbits] == [1] and orb.min_orbit_size == 1
    orb = rigidity_orbits(square_reflection)
    assert [len(o) for o in orb.orbits] == [1, 1] and len(orb.fixed) == 2
    orb = rigidity_orbits(hexagon_swap)
    assert [[r.vertex_set for r in o] for o in orb.orbits] == [[("v1",), ("v4",)]]
    assert orb.min_orbit_size == 2 and orb.fixed == ()


def test_subgroup_counts_of_symmetric_groups():
    for n, expected in [(3, 6), (4, 30)]:
        names = [str(i) for i in range(n)]
        sym = enumerate_group([{"0": "1", "1": "0"}, {names[i]: names[(i + 1) % n] for i in range(n)}], names)
        subs = all_subgroups(sym)
        assert len(subs) == expected
        assert {h.element_set for h in subs} == all_subgroups_naive(sym.elements, n)
        assert sum(1 for _ in subgroup_classes(sym)) == {3: 4, 4: 11}[n]


def test_subgroup_order_cap():
    names = [str(i) for i in range(4)]
    s4 = enumerate_group([{"0": "1", "1": "0"}, {"0": "1", "1": "2", "2": "3", "3": "0"}], names)
    assert all(h.order <= 4 for h in all_subgroups(s4, 4))
    # trivial, 9 of order 2, 4 of order 3, 3 cyclic and 4 Klein of order 4
    assert len(all_subgroups(s4, 4)) == 1 + 9 + 4 + 3 + 4
    assert {h.element_set for h in all_subgroups(s4, 4)} == {
        h for h in all_subgroups_naive(s4.elements, 4) if len(h) <= 4}


def test_automorphism_group_respects_multiplicity():
    g = MultiGraph(["a", "b", "c"], {("a", "b"): 2, ("b", "c"): 1})
    assert automorphism_group(g).order == 1
    h = MultiGraph(["a", "b", "c"], {("a", "b"): 2, ("b", "c"): 2})
    assert automorphism_group(h).order == 2


def test_json_round_trip(square_reflection):
    data = square_reflection.to_json()
    assert data["generators"] == [{"v1": "v3", "v3": "v1"}]
    again = GGraph.from_json(data)
    assert again.group == square_reflection.group and again.graph == square_reflection.graph


def _as_oracle_tuples(gg):
    return {(frozenset(r.vertex_set), r.rigidifier.element_set, r.singular) for r in rigidities(gg)}


@settings(max_examples=60, deadline=None)
@given(multigraphs(max_vertices=6, max_mult=2), st.randoms(use_true_random=False))
def test_rigidities_match_bruteforce_on_random_subgroups(g, rnd):
    if not g.num_vertices or not is_connected(g):
        return
    aut = automorphism_group(g)
    subs = all_subgroups(aut, 48)
    h = rnd.choice(subs)
    gg = GGraph(g, h)
    assert _as_oracle_tuples(gg) == rigidities_bruteforce(g, h.elements, g.num_vertices)
    assert sorted(len(o) for o in rigidity_orbits(gg).orbits) == rigidity_orbit_sizes(g, h.elements)


@settings(max_examples=60, deadline=None)
@given(multigraphs(max_vertices=6, max_mult=2), st.randoms(use_true_random=False))
def test_rigidity_invariants(g, rnd):
    if not g.num_vertices or not is_connected(g):
        return
    h = rnd.choice(all_subgroups(automorphism_group(g), 48))
    gg = GGraph(g, h)
    rigs = rigidities(gg)
    seen = set()
    for r in rigs:
        assert seen.isdisjoint(r.vertex_set)
        seen |= set(r.vertex_set)
    by_set = {frozenset(r.vertex_set): r for r in rigs}
    fixed = fixed_subgraph(gg, h)
    from riglab.graphs import connected_components
    for comp in connected_components(fixed):
        assert by_set[frozenset(comp)].rigidifier == h
    verts = g.vertices
    for p in h.elements:
        for r in rigs:
            image = frozenset(verts[p[g.index(v)]] for v in r.vertex_set)
            assert by_set[image].rigidifier == r.rigidifier.conjugate(p)
    for r in rigidity_orbits(gg).fixed:
        if r.singular:
            assert r.rigidifier == h
