import sys

import pytest

from riglab.graphs import MultiGraph
from riglab.groups import GGraph, enumerate_group


def make_gg(vertices, edges, generators):
    g = MultiGraph.from_edges(vertices, edges)
    return GGraph(g, enumerate_group(generators, g.vertices))


@pytest.fixture
def square_reflection():
    """4-cycle v1..v4 with the reflection swapping v1 and v3."""
    return make_gg(["v1", "v2", "v3", "v4"],
                   [("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")],
                   [{"v1": "v3", "v3": "v1"}])


@pytest.fixture
def path_reflection():
    return make_gg(["v1", "v2", "v3"], [("v1", "v2"), ("v2", "v3")], [{"v1": "v3", "v3": "v1"}])


@pytest.fixture
def hexagon_swap():
    """6-cycle with a Klein four-group whose half-turn swaps the two fixed points of a reflection."""
    names = [f"v{i}" for i in range(1, 7)]
    half_turn = {names[i]: names[(i + 3) % 6] for i in range(6)}
    reflection = {"v2": "v6", "v6": "v2", "v3": "v5", "v5": "v3"}
    return make_gg(names, [(names[i], names[(i + 1) % 6]) for i in range(6)], [half_turn, reflection])


def c2_galois(nonreal=()):
    """Order-2 Galois group {e, s}; subgroup ids "1" and "G"."""
    from riglab.reduction import GaloisModel, Subgroup

    group = enumerate_group([{"0": "1", "1": "0"}], ["0", "1"])
    if not nonreal:
        return GaloisModel(group)
    gm = GaloisModel(group)
    return GaloisModel(group, [Subgroup(s.id, s.group, s.id in nonreal) for s in gm.subgroups])


def make_rg(galois, components, intersections, **declared):
    """components: (id, stab, genus, point_fields); intersections: (id, a, b, residue)."""
    from riglab.reduction import Component, Declared, Intersection, ReductionGraph

    comps = [Component(i, s, g, frozenset(pf)) for i, s, g, pf in components]
    points = [Intersection(i, (a, b), r) for i, a, b, r in intersections]
    return ReductionGraph(galois, comps, points, Declared(**declared))


@pytest.fixture
def gamma_delta():
    """Gamma with constants of degree 2 meets Delta (rational constants) in a point of degree 2."""
    return make_rg(c2_galois(), [("Gamma", "1", 0, {"1"}), ("Delta", "G", 0, {"1"})],
                   [("P", "Gamma", "Delta", "1")])


@pytest.fixture
def two_rational_one_point():
    """Two components with rational constants meeting in a single point of degree 2."""
    return make_rg(c2_galois(), [("Gamma", "G", 0, {"1"}), ("Delta", "G", 0, {"1"})],
                   [("P", "Gamma", "Delta", "1")])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
