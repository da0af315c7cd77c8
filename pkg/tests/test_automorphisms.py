import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import random_digraph, vf2_aut_count
from omsr.automorphisms import (automorphism_group, brute_force_automorphisms, check_omsr, haar_equivalence,
                                has_automorphism_beyond, is_vertex_transitive)
from omsr.catalog import get_group
from omsr.constructions import exceptional_omsr, orr_lift_o2sr, orr_lift_omsr, trivial_omsr, z2_large_o2sr
from omsr.digraph import Digraph, directed_cycle, edgeless
from omsr.mcayley import ConnectionSets, build, right_action_generators


@pytest.mark.parametrize("n", [3, 5, 8, 12])
def test_directed_cycle(n):
    assert automorphism_group(directed_cycle(n), method="search").order() == n


@pytest.mark.parametrize("n", [1, 4, 7])
def test_edgeless(n):
    assert automorphism_group(edgeless(n), method="search").order() == math.factorial(n)


def test_generators_preserve_arcs_and_are_deterministic():
    rng = random.Random(3)
    for _ in range(20):
        g = random_digraph(rng, 9, 0.3)
        A = automorphism_group(g, method="search")
        B = automorphism_group(g, method="search")
        assert A.generators == B.generators
        arcs = set(g.arcs())
        for s in A.generators:
            assert {(s[u], s[v]) for u, v in arcs} == arcs


def test_matches_vf2_on_random_mid_size_digraphs():
    rng = random.Random(11)
    for _ in range(40):
        g = random_digraph(rng, rng.randint(7, 10), rng.choice([0.1, 0.25, 0.5]))
        assert automorphism_group(g, method="search").order() == vf2_aut_count(g)


def test_matches_vf2_on_built_mcayley_digraphs():
    G = get_group("Z4xZ2")
    T = ConnectionSets.from_words(G, 2, {(0, 0): ["x"], (1, 1): ["y"], (0, 1): ["1"], (1, 0): ["xy"]})
    g = build(T).digraph
    assert automorphism_group(g).order() == vf2_aut_count(g)


def test_trivial_group_seven_parts_is_rigid():
    g = build(trivial_omsr(7)).digraph
    assert automorphism_group(g).order() == 1


def test_has_automorphism_beyond():
    G = get_group("Z3")
    gamma = build(ConnectionSets(G, 1, {(0, 0): [1]}))
    assert has_automorphism_beyond(gamma.digraph, right_action_generators(gamma)) is None
    gamma = build(ConnectionSets(get_group("Z4"), 1, {(0, 0): [1]}))
    assert has_automorphism_beyond(gamma.digraph, right_action_generators(gamma)) is None
    gamma = build(ConnectionSets(get_group("Z2^2"), 2, {(0, 1): [0], (1, 0): [1]}))
    assert has_automorphism_beyond(gamma.digraph, right_action_generators(gamma)) is not None


def test_check_omsr_examples():
    Z1 = get_group("Z1")
    tri = ConnectionSets(Z1, 3, {(0, 1): [0], (1, 2): [0], (2, 0): [0]})
    v = check_omsr(Z1, tri)
    assert not v.is_omsr and v.aut_order == 3 and v.witness is not None
    v = check_omsr(get_group("Z2^5"), z2_large_o2sr(5))
    assert v.is_omsr and v.orbit_count == 2 and v.stabilizer_order == 1
    assert check_omsr(get_group("Q8"), exceptional_omsr("Q8", 3)).is_omsr


def test_orr_lift_bicayley_is_not_vertex_transitive():
    G = get_group("Z3")
    assert not is_vertex_transitive(build(orr_lift_o2sr(G, {1}, 1)).digraph)
    assert is_vertex_transitive(directed_cycle(6))


def test_point_stabilizer_trivial_for_orr_lift():
    G = get_group("Z5")
    A = automorphism_group(build(orr_lift_omsr(G, {1}, 1, 4)).digraph)
    assert A.point_stabilizer_order(0) == 1


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["Z6", "Q8", "GD(Z4)"]), st.data())
def test_verdict_invariant_under_group_automorphisms(name, data):
    from omsr.groups import automorphism_table
    G = get_group(name)
    cells = {}
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        s = data.draw(st.sets(st.integers(1 if i == j else 0, G.order - 1), max_size=2))
        cells[(i, j)] = s
    T = ConnectionSets(G, 2, cells)
    table = automorphism_table(G)
    alpha = table[data.draw(st.integers(0, len(table) - 1))]
    a, b = check_omsr(G, T), check_omsr(G, T.apply(alpha))
    assert (a.is_omsr, a.aut_order) == (b.is_omsr, b.aut_order)


def test_haar_equivalence_trivial_cases():
    G = get_group("Z2^3")
    S, T = {0, 1, 2}, {3, 5}
    assert haar_equivalence(G, S, T, list(range(8))) == (True, True)
    for h in range(8):
        sigma = [int(G.mul[g, h]) for g in range(8)]
        assert haar_equivalence(G, S, T, sigma) == (True, True)
