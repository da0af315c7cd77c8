import itertools
import json
from math import comb

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from networkx.algorithms.isomorphism import DiGraphMatcher

from omsr.automorphisms import check_omsr
from omsr.catalog import get_group
from omsr.groups import automorphism_table
from omsr.mcayley import ConnectionSets, build, validate
from omsr.search import (BudgetExceeded, Certificate, SearchSpace, _Enumerator, certificate_path,
                         closed_form_count, find_omsr, find_orr, prove_nonexistence, size_matrices,
                         write_certificate)


def all_tables(space):
    """Every table the enumerator emits for a space, as ConnectionSets."""
    G, m = space.group, space.m
    E = _Enumerator(G, m, space.group_automorphism_orbits)
    out = []
    for d in space.valencies:
        for sizes in size_matrices(G, m, d, space.part_symmetry):
            for cells in E.tables(sizes):
                out.append(ConnectionSets(G, m, cells))
    return out


@pytest.mark.parametrize("name", ["Z2", "Z2^2"])
def test_unreduced_count_matches_closed_form(name):
    G = get_group(name)
    space = SearchSpace(G, 2)
    cert = prove_nonexistence(space)
    n = G.order
    assert cert.candidates_examined == sum(comb(n, d) * comb(n - d, d) for d in range(n))
    assert cert.candidates_examined == closed_form_count(G, 2, space.valencies)


def test_unreduced_count_brute_force_cross_check():
    # every oriented regular m=2 table over Z2^2, counted by direct product over all cell subsets
    G = get_group("Z2^2")
    subsets = [frozenset(s) for k in range(5) for s in itertools.combinations(range(4), k)]
    count = 0
    for A, B in itertools.product(subsets, repeat=2):
        T = ConnectionSets(G, 2, {(0, 1): A, (1, 0): B})
        if validate(T).oriented and T.valency() is not None:
            count += 1
    assert count == len(all_tables(SearchSpace(G, 2)))


def test_elementary_abelian_diagonals_are_empty():
    for T in all_tables(SearchSpace(get_group("Z2^2"), 3, (0, 2))):
        assert all(not T[i, i] for i in range(3))
        rep = validate(T)
        assert rep.oriented and rep.loop_free


def _canonical(T, auts, m):
    best = None
    for alpha in auts:
        U = T.apply(alpha)
        for pi in itertools.permutations(range(m)):
            k = U.permute_parts(pi).key()
            if best is None or k < best:
                best = k
    return best


@pytest.mark.parametrize("name,m,vals", [("Z3", 2, (0, 2)), ("Z2^2", 2, (0, 3)), ("Z4", 2, (0, 2)),
                                         ("Z2", 3, (0, 2))])
def test_reduced_space_meets_every_orbit(name, m, vals):
    G = get_group(name)
    auts = automorphism_table(G)
    full = {_canonical(T, auts, m) for T in all_tables(SearchSpace(G, m, vals))}
    reduced = [_canonical(T, auts, m) for T in all_tables(SearchSpace(G, m, vals, True, True))]
    assert set(reduced) == full
    assert len(reduced) <= len(all_tables(SearchSpace(G, m, vals)))


def _arc_set(T):
    return set(build(T).digraph.arcs())


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["Z6", "Q8", "Z2^3", "GD(Z4)"]), st.data())
def test_group_automorphism_reduction_is_an_isomorphism(name, data):
    G = get_group(name)
    n, m = G.order, data.draw(st.integers(1, 3))
    cells = {(i, j): data.draw(st.sets(st.integers(0, n - 1), max_size=3)) for i in range(m) for j in range(m)}
    T = ConnectionSets(G, m, {k: v - {0} if k[0] == k[1] else v for k, v in cells.items()})
    table = automorphism_table(G)
    alpha = table[data.draw(st.integers(0, len(table) - 1))]
    phi = lambda v: (v // n) * n + int(alpha[v % n])          # g_i -> alpha(g)_i
    assert {(phi(u), phi(v)) for u, v in _arc_set(T)} == _arc_set(T.apply(alpha))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["Z5", "Q8", "Z2^2"]), st.data())
def test_part_permutation_reduction_is_an_isomorphism(name, data):
    G = get_group(name)
    n, m = G.order, data.draw(st.integers(2, 4))
    cells = {(i, j): data.draw(st.sets(st.integers(0, n - 1), max_size=2)) for i in range(m) for j in range(m)}
    T = ConnectionSets(G, m, {k: v - {0} if k[0] == k[1] else v for k, v in cells.items()})
    pi = data.draw(st.permutations(range(m)))
    phi = lambda v: pi[v // n] * n + v % n                   # g_i -> g_pi(i)
    assert {(phi(u), phi(v)) for u, v in _arc_set(T)} == _arc_set(T.permute_parts(pi))


def test_find_orr_examples():
    c = find_orr(get_group("Z3"))
    assert c.kind == "orr_witness" and c.connection_sets[0, 0] == {1}
    assert find_orr(get_group("Z2^2")).kind == "orr_nonexistence"
    assert find_orr(get_group("Q8")).kind == "orr_nonexistence"
    c = find_orr(get_group("Z5"))
    assert c.verify() and len(c.connection_sets[0, 0]) == 1


def test_find_orr_respects_bound():
    with pytest.raises(BudgetExceeded):
        find_orr(get_group("Z2^5"))


def test_nonexistence_examples():
    assert prove_nonexistence(SearchSpace(get_group("Z1"), 2)).kind == "nonexistence"
    assert prove_nonexistence(SearchSpace(get_group("Z1"), 5)).kind == "nonexistence"
    assert find_omsr(get_group("Z1"), 6, valency_cap=2).kind == "nonexistence"
    assert find_omsr(get_group("Z1"), 3).kind == "nonexistence"


def test_trivial_group_seven_parts_falsifies_nonexistence():
    cert = prove_nonexistence(SearchSpace(get_group("Z1"), 7, (2, 2), False, True))
    assert cert.kind == "omsr_witness" and cert.verify()


def test_witness_found_for_z3():
    cert = find_omsr(get_group("Z3"), 2)
    assert cert.kind == "omsr_witness" and cert.verify()


def _oriented_2_regular_on_six():
    """All labeled oriented digraphs on 6 vertices with in/out valency 2."""
    out = []
    choices = [[p for p in itertools.combinations(range(6), 2) if v not in p] for v in range(6)]

    def rec(v, outs, indeg):
        if v == 6:
            if all(d == 2 for d in indeg):
                out.append(list(outs))
            return
        for p in choices[v]:
            if any(indeg[w] >= 2 or (w < v and v in outs[w]) for w in p):
                continue
            for w in p:
                indeg[w] += 1
            outs.append(p)
            rec(v + 1, outs, indeg)
            outs.pop()
            for w in p:
                indeg[w] -= 1

    rec(0, [], [0] * 6)
    return out


def test_no_oriented_three_semiregular_representation_of_z2():
    # an oriented digraph on 6 vertices has valency <= 2; valency 0 and 1 graphs are
    # edgeless or unions of directed cycles (|Aut| >= 3), so valency 2 decides it
    digraphs = _oriented_2_regular_on_six()
    orders = set()
    for outs in digraphs:
        g = nx.DiGraph([(v, w) for v, p in enumerate(outs) for w in p])
        orders.add(sum(1 for _ in DiGraphMatcher(g, g).isomorphisms_iter()))
    assert len(digraphs) == 570
    assert 2 not in orders
    assert find_omsr(get_group("Z2"), 3, valency_cap=2).kind == "nonexistence"
    assert prove_nonexistence(SearchSpace(get_group("Z2"), 3)).kind == "nonexistence"


def test_certificates_are_deterministic(tmp_path):
    space = SearchSpace(get_group("Z2^2"), 2, None, True, True)
    a, b = prove_nonexistence(space), prove_nonexistence(space)
    assert a.dumps() == b.dumps()
    assert "wall_time" not in json.loads(a.dumps())
    assert "wall_time" in json.loads(a.dumps(include_time=True))
    p = certificate_path(space, str(tmp_path))
    assert p == certificate_path(space, str(tmp_path))
    write_certificate(a, p)
    assert open(p).read().strip() == a.dumps()


def test_parallel_run_matches_serial():
    G = get_group("Z2^2")
    space = SearchSpace(G, 3, (0, 2), True, True)
    assert prove_nonexistence(space).dumps() == prove_nonexistence(space, workers=2).dumps()
    space = SearchSpace(get_group("Z3"), 2, None, True, True)
    assert prove_nonexistence(space).dumps() == prove_nonexistence(space, workers=2).dumps()


def test_budget_is_explicit():
    with pytest.raises(BudgetExceeded):
        prove_nonexistence(SearchSpace(get_group("Z1"), 6), max_candidates=10)


def test_space_rejects_impossible_valency():
    with pytest.raises(ValueError):
        SearchSpace(get_group("Z2"), 2, (0, 2))
