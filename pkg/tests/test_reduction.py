import itertools
import json

import pytest
from conftest import c2_galois, make_rg
from oracles import rigidities_bruteforce

from riglab.generate import ReductionParams, group_catalog, random_reduction_graph
from riglab.graphs import betti, degree
from riglab.groups import enumerate_group, validate_action
from riglab.reduction import (
    HOLDS,
    INCONSISTENT,
    GaloisModel,
    InvalidInstance,
    ReductionGraph,
    Subgroup,
    arithmetic_genus,
    base_change,
    betti_monotone_check,
    check_nonrat_bound,
    genus_budget_check,
    genus_sum,
    omega_P,
    omega_rat_int,
    rigidity_subcurves,
    singular_rigidity_orbit_count,
    subcurve_conditions,
)


def test_base_change_gamma_delta(gamma_delta):
    bc = base_change(gamma_delta)
    g = bc.ggraph.graph
    assert g.num_vertices == 5 and g.num_edges == 4 and betti(g) == 0
    copies = {}
    for v, src in bc.projection.items():
        copies[src] = copies.get(src, 0) + 1
    assert copies == {"Gamma": 2, "Delta": 1, "P": 2}
    assert degree(g, "Delta#0") == 2
    assert validate_action(g, bc.ggraph.group) is None


def test_base_change_two_rational(two_rational_one_point):
    g = base_change(two_rational_one_point).ggraph.graph
    assert (g.num_vertices, g.num_edges, betti(g)) == (4, 4, 1)


def test_base_change_trivial_group():
    gm = GaloisModel(enumerate_group([], ["0"]))
    assert gm.full_id == gm.trivial_id == "1"
    rg = make_rg(gm, [("A", "1", 1, {"1"}), ("B", "1", 0, {"1"}), ("C", "1", 0, {"1"})],
                 [("P", "A", "B", "1"), ("Q", "B", "C", "1"), ("R", "A", "C", "1")])
    bc = base_change(rg)
    assert bc.ggraph.graph.num_vertices == 6 and bc.ggraph.group.order == 1
    assert betti(bc.ggraph.graph) == betti(rg.underlying.underlying) == 1
    assert set(bc.projection.values()) == {"A", "B", "C", "P", "Q", "R"}
    v = betti_monotone_check(rg)
    assert v.status == HOLDS and v.tight


def test_omega_sets_gamma_delta(gamma_delta):
    assert omega_rat_int(gamma_delta) == {"Gamma"}
    assert singular_rigidity_orbit_count(gamma_delta) == 1
    subs = rigidity_subcurves(gamma_delta)
    assert [(s.components, s.singular) for s in subs] == [(("Delta",), True)]


def test_single_component():
    rg = make_rg(c2_galois(), [("X", "G", 0, {"1"})], [])
    assert omega_rat_int(rg) == set()
    assert singular_rigidity_orbit_count(rg) == 1
    assert [s.components for s in rigidity_subcurves(rg)] == [("X",)]
    v = check_nonrat_bound(rg, "empty")
    assert (v.detail["middle"], v.detail["rhs"]) == (1, 1)


def test_all_rational_intersections():
    rg = make_rg(c2_galois(), [("A", "G", 0, {"1", "G"}), ("B", "G", 0, {"1", "G"}), ("C", "G", 0, {"1", "G"})],
                 [("P", "A", "B", "G"), ("Q", "B", "C", "G")])
    assert omega_rat_int(rg) == {"A", "B", "C"}
    assert singular_rigidity_orbit_count(rg) == 0
    # the group fixes the whole base change: one rigidity spanning every component
    assert [(s.components, s.singular) for s in rigidity_subcurves(rg)] == [(("A", "B", "C"), False)]


def test_split_chain_needs_a_joining_point():
    # two swapped copies of a chain are not connected; the base change is rejected
    with pytest.raises(InvalidInstance):
        make_rg(c2_galois(), [("A", "1", 0, {"1"}), ("B", "1", 0, {"1"}), ("C", "1", 0, {"1"})],
                [("P", "A", "B", "1"), ("Q", "B", "C", "1")])


def test_equal_stab_joined_by_rational_point():
    s3 = group_catalog()["S3"]
    gm = GaloisModel(s3)
    h = next(s.id for s in gm.subgroups if s.group.order == 2)
    comps = [("A", h, 0, {h, "1"}), ("B", h, 0, {h, "1"}), ("C", "G", 0, {"1", h})]
    rg = make_rg(gm, comps, [("P", "A", "B", h), ("Q", "B", "C", "1")])
    subs = rigidity_subcurves(rg)
    assert {(s.components, s.singular) for s in subs} == {(("A", "B"), False), (("C",), True)}
    assert omega_rat_int(rg) == {"A", "B"}
    # an h-rational contact with C (constants G) breaks the closure condition
    rg = make_rg(gm, comps, [("P", "A", "B", h), ("Q", "B", "C", h)])
    assert not subcurve_conditions(rg, ("A", "B"), h)
    assert {(s.components, s.singular) for s in rigidity_subcurves(rg)} == {(("C",), True)}


def test_omega_P():
    gm = c2_galois(nonreal={"1"})
    rg = make_rg(gm, [("A", "G", 0, {"1"}), ("B", "G", 0, {"1", "G"})], [("P", "A", "B", "1")])
    assert omega_P(rg, "nonreal") == {"A"}
    assert omega_P(rg, "empty") == {"A", "B"}
    everything = c2_galois(nonreal={"1", "G"})
    rg2 = make_rg(everything, [("A", "G", 0, {"1"}), ("B", "G", 0, {"1", "G"})], [("P", "A", "B", "1")])
    assert omega_P(rg2, "nonreal") == {"A", "B"}
    rg3 = make_rg(c2_galois(), [("A", "G", 0, {"1"}), ("B", "G", 0, {"1", "G"})], [("P", "A", "B", "1")])
    assert omega_P(rg3, "nonreal") == set()


def test_nonrat_strict_case_ii():
    gm = c2_galois(nonreal={"1"})
    # P is a rational real point joining two components rational at it; C only has nonreal points
    rg = make_rg(gm, [("A", "G", 0, {"1", "G"}), ("B", "G", 0, {"1", "G"}), ("C", "G", 0, {"1"})],
                 [("P", "A", "B", "G"), ("Q", "B", "C", "1")])
    v = check_nonrat_bound(rg, "nonreal")
    assert v.detail["hypothesis_ii"] == ["P"]
    assert v.detail["components"] == ["C"]
    assert (v.detail["middle"], v.detail["rhs"]) == (1, 2)
    assert v.status == HOLDS
    # only nonreal labels carry points: nothing is minimal without the property
    rg2 = make_rg(gm, [("A", "1", 0, {"1"}), ("B", "1", 0, {"1"}), ("C", "G", 0, {"1"})],
                  [("P", "A", "B", "1"), ("Q", "B", "C", "1")])
    assert check_nonrat_bound(rg2, "nonreal").detail["hypothesis_ii"] == []


def test_nonrat_on_tree_after_base_change(gamma_delta):
    v = check_nonrat_bound(gamma_delta, "empty")
    assert v.detail["betti_prime"] == 0 and v.detail["middle"] <= 1


def test_betti_monotone_examples(gamma_delta, two_rational_one_point):
    v = betti_monotone_check(gamma_delta)
    assert (v.detail["lhs"], v.detail["rhs"]) == (0, 0)
    v = betti_monotone_check(two_rational_one_point)
    assert (v.detail["lhs"], v.detail["rhs"]) == (0, 1)
    assert v.detail["i_x"] == {"P": 2} and v.detail["e_gamma"] == {"Gamma": 1, "Delta": 1}


def test_genus_budget_examples():
    comps = [("Gamma", "G", 1, {"1"}), ("Delta", "G", 0, {"1"})]
    rg = make_rg(c2_galois(), comps, [("P", "Gamma", "Delta", "1")], g_F=2)
    assert genus_sum(rg) == 1
    assert genus_budget_check(rg).status == HOLDS
    assert genus_budget_check(rg, g_F=1).status == INCONSISTENT
    assert "a" in genus_budget_check(rg, g_F=1).detail["failures"]
    lone = make_rg(GaloisModel(enumerate_group([], ["0"])), [("X", "1", 0, {"1"})], [], g_F=0)
    assert genus_budget_check(lone).status == HOLDS


def test_genus_budget_real_case():
    gm = c2_galois(nonreal={"1"})
    comps = [("A", "G", 0, {"1"}), ("B", "G", 0, {"1"})]
    rg = make_rg(gm, comps, [("P", "A", "B", "1")], g_F=1, real_F=True, henselian=True)
    v = genus_budget_check(rg)
    assert v.status == INCONSISTENT and "c: no real point" in v.detail["failures"]
    comps = [("A", "G", 0, {"1", "G"}), ("B", "G", 0, {"1"})]
    rg = make_rg(gm, comps, [("P", "A", "B", "1")], g_F=1, real_F=True, henselian=True)
    v = genus_budget_check(rg)
    assert v.status == HOLDS and v.detail["c"]["lhs"] == 1


def test_arithmetic_genus_dominates_budget():
    for seed in range(200):
        rg = random_reduction_graph(seed)
        assert arithmetic_genus(rg) == betti(base_change(rg).ggraph.graph) + genus_sum(rg)


def _connected_subsets(rg):
    ids = [c.id for c in rg.components]
    for r in range(1, len(ids) + 1):
        yield from itertools.combinations(ids, r)


@pytest.mark.parametrize("seed", range(60))
def test_subcurves_match_literal_conditions(seed):
    rg = random_reduction_graph(seed, ReductionParams(max_components=4))
    found = {(s.components, s.normal_closure_label) for s in rigidity_subcurves(rg)}
    brute = {(ys, lab) for ys in _connected_subsets(rg) for lab in (s.id for s in rg.galois.subgroups)
             if subcurve_conditions(rg, ys, lab)}
    assert found == brute


@pytest.mark.parametrize("seed", range(60))
def test_subcurves_match_bruteforce_rigidities(seed):
    rg = random_reduction_graph(seed, ReductionParams(max_components=4, max_order=8))
    gg = base_change(rg).ggraph
    proj = base_change(rg).projection
    rigs = rigidities_bruteforce(gg.graph, gg.group.elements, gg.graph.num_vertices)
    shadows = {(tuple(sorted({proj[v] for v in vs if proj[v] in rg.comp})), singular)
               for vs, _, singular in rigs}
    assert shadows == {(s.components, s.singular) for s in rigidity_subcurves(rg)}
    n_singular_cyan = {tuple(sorted(proj[v] for v in vs)) for vs, _, sing in rigs
                       if sing and proj[next(iter(vs))] in rg.comp}
    assert len(n_singular_cyan) == singular_rigidity_orbit_count(rg)


def test_json_round_trip():
    for seed in range(30):
        rg = random_reduction_graph(seed)
        again = ReductionGraph.from_json(json.loads(rg.dumps()))
        assert again.dumps() == rg.dumps()


def test_galois_json_round_trip_keeps_flags():
    gm = c2_galois(nonreal={"1"})
    back = GaloisModel.from_json(gm.to_json())
    assert [(s.id, s.nonreal) for s in back.subgroups] == [("1", True), ("G", False)]


def _base_json(gamma_delta):
    return json.loads(gamma_delta.dumps())


@pytest.mark.parametrize("mutate", [
    lambda d: d["components"][0].update(stab="nope"),
    lambda d: d["components"][0].update(genus=-1),
    lambda d: d["intersections"][0].update(between=["Delta", "Delta"]),
    lambda d: d["intersections"][0].update(between=["Delta", "Zeta"]),
    lambda d: d["components"][0].update(point_fields=[]),
    lambda d: d.update(components=[]),
    lambda d: d["galois"].update(elements=[[0, 1]]),
    lambda d: d["galois"]["subgroups"][0].update(elements=[0, 5]),
    lambda d: d.update(declared={"g_F": -2}),
    lambda d: d["intersections"].append({"id": "Q", "between": ["Gamma"], "residue": "1"}),
])
def test_invalid_instances_rejected(gamma_delta, mutate):
    data = _base_json(gamma_delta)
    mutate(data)
    with pytest.raises(InvalidInstance):
        ReductionGraph.from_json(data)


def test_point_field_must_sit_below_constants():
    with pytest.raises(InvalidInstance):
        make_rg(c2_galois(), [("A", "1", 0, {"1", "G"}), ("B", "G", 0, {"1"})], [("P", "A", "B", "1")])


def test_residue_must_sit_below_constants():
    with pytest.raises(InvalidInstance):
        make_rg(c2_galois(), [("A", "1", 0, {"1"}), ("B", "G", 0, {"1", "G"})], [("P", "A", "B", "G")])


def test_disconnected_base_change_rejected():
    # both components split into two copies joined copywise: the base change falls apart
    with pytest.raises(InvalidInstance):
        make_rg(c2_galois(), [("A", "1", 0, {"1"}), ("B", "1", 0, {"1"})], [("P", "A", "B", "1")])


def test_nonreal_flag_must_pass_down():
    group = enumerate_group([{"0": "1", "1": "0"}], ["0", "1"])
    gm = GaloisModel(group)
    subs = [Subgroup(s.id, s.group, s.id == "G") for s in gm.subgroups]
    with pytest.raises(InvalidInstance):
        GaloisModel(group, subs)
