import itertools
import math

from hypothesis import given, settings, strategies as st

from omsr.digraph import (Digraph, directed_cycle, edgeless, is_oriented, is_regular, parse_dot, to_dot,
                          is_connected_underlying)
from omsr.perm import PermGroup, inverse, mul


def test_symmetric_group_order():
    assert PermGroup(4, [(1, 2, 3, 0), (1, 0, 2, 3)]).order() == 24


def test_identity_group():
    P = PermGroup(5)
    assert P.order() == 1
    assert len(P.orbits()) == 5
    assert P.point_stabilizer_order(3) == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.permutations(range(6)), min_size=1, max_size=3))
def test_chain_order_matches_enumeration(gens):
    P = PermGroup(6, gens)
    # close the generators under multiplication by breadth-first search
    seen = {tuple(range(6))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = mul(p, g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    assert P.order() == len(seen)
    assert all(P.contains(p) for p in seen)
    assert P.contains(inverse(gens[0]))


def test_membership_rejects_outsiders():
    P = PermGroup(4, [(1, 2, 3, 0)])
    assert not P.contains((1, 0, 2, 3))


def test_cycle_and_edgeless_basics():
    c = directed_cycle(5)
    assert is_regular(c) == 1 and is_oriented(c) and is_connected_underlying(c)
    assert is_regular(edgeless(3)) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                                            .filter(lambda a: a[0] != a[1])))))
def test_dot_round_trip(data):
    n, arcs = data
    g = Digraph.from_arcs(n, sorted(arcs))
    h, labels = parse_dot(to_dot(g, [f"v{i}" for i in range(n)]))
    assert h.arcs() == g.arcs()
    assert labels == [f"v{i}" for i in range(n)]
