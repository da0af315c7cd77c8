"""Digraph automorphism groups by individualization and refinement.

Colour refinement uses the signature (colour, sorted out-neighbour colours,
sorted in-neighbour colours).  New colours are the ranks of signatures in
lexicographic order, so every step is label independent and two nodes of the
search tree can be compared through a digest of the signatures seen while
refining them.

The search follows the first-path scheme: the leftmost leaf is the reference
labelling, and for every node on that path each other child is explored only
until one leaf equivalent to the reference is found.  Every candidate map is
checked against the arc set before it is kept.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .digraph import Digraph
from .mcayley import ConnectionSets, build, right_action, validate, right_action_generators
from .digraph import is_regular
from .perm import PermGroup, orbit_partition

ENGINE_VERSION = "omsr-ir-1"
BRUTE_FORCE_LIMIT = 6


def _padded(adj, n):
    width = max((len(a) for a in adj), default=0)
    out = np.full((n, width), n, dtype=np.int64)
    for v, a in enumerate(adj):
        out[v, :len(a)] = a
    return out


class _Refiner:
    def __init__(self, g: Digraph):
        self.n = g.n
        self.out_pad = _padded(g.out_adj, g.n)
        self.in_pad = _padded(g.in_adj, g.n)
        self.adj = g.adjacency()
        arr = g.arc_array()
        self.src, self.dst = arr[:, 0], arr[:, 1]

    def refine(self, colors, k, reference=None):
        """Refine to equitable; returns (colors, k, trace) or None on mismatch with ``reference``."""
        n = self.n
        trace = []
        while True:
            ext = np.append(colors, -1)
            sig = np.concatenate([colors[:, None],
                                  np.sort(ext[self.out_pad], axis=1),
                                  np.sort(ext[self.in_pad], axis=1)], axis=1)
            order = np.lexsort(sig.T[::-1])
            s = sig[order]
            step = np.empty(n, dtype=bool)
            step[0] = True
            step[1:] = np.any(s[1:] != s[:-1], axis=1)
            ids = np.cumsum(step) - 1
            new = np.empty(n, dtype=np.int64)
            new[order] = ids
            k_new = int(ids[-1]) + 1
            h = hashlib.blake2b(s[step].tobytes(), digest_size=12)
            h.update(np.diff(np.flatnonzero(np.append(step, True))).tobytes())
            d = h.digest()
            if reference is not None and (len(trace) >= len(reference) or reference[len(trace)] != d):
                return None
            trace.append(d)
            if k_new == k or k_new == n:
                if reference is not None and len(trace) != len(reference):
                    return None
                return new, k_new, tuple(trace)
            colors, k = new, k_new

    @staticmethod
    def individualize(colors, v):
        key = colors * 2 + 1
        key[v] -= 1
        return np.unique(key, return_inverse=True)[1].astype(np.int64).reshape(-1)

    @staticmethod
    def target_cell(colors, k):
        counts = np.bincount(colors, minlength=k)
        sizes = np.where(counts > 1, counts, np.iinfo(np.int64).max)
        c = int(np.argmin(sizes))
        return [int(v) for v in np.flatnonzero(colors == c)]

    def leaf_map(self, ref, leaf):
        """The map sending the reference leaf to ``leaf`` (both discrete colourings)."""
        inv = np.empty(self.n, dtype=np.int64)
        inv[leaf] = np.arange(self.n)
        return inv[ref]

    def is_automorphism(self, sigma) -> bool:
        return bool(self.adj[sigma[self.src], sigma[self.dst]].all())


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0


def _search(g: Digraph, seeds=(), stop_on_new=False, stats: SearchStats | None = None) -> list:
    """Generators of Aut(g) beyond ``seeds`` (which must be automorphisms)."""
    n = g.n
    R = _Refiner(g)
    stats = stats if stats is not None else SearchStats()
    colors, k, trace = R.refine(np.zeros(n, dtype=np.int64), 1)
    nodes = [(colors, k)]
    traces = [trace]
    cells, chosen = [], []
    while k < n:
        cell = R.target_cell(colors, k)
        v = cell[0]
        cells.append(cell)
        chosen.append(v)
        colors, k, trace = R.refine(R.individualize(colors, v), k + 1)
        nodes.append((colors, k))
        traces.append(trace)
        stats.nodes += 1
    ref_leaf = colors
    gens = [tuple(int(x) for x in s) for s in seeds]
    found = []

    def explore(colors, k, depth):
        # iterative depth-first search for a leaf equivalent to the reference
        stack = [(colors, k, depth)]
        while stack:
            colors, k, depth = stack.pop()
            res = R.refine(colors, k, traces[depth])
            stats.nodes += 1
            if res is None:
                continue
            colors, k, _ = res
            if k == n:
                stats.leaves += 1
                sigma = R.leaf_map(ref_leaf, colors)
                if R.is_automorphism(sigma):
                    return tuple(int(x) for x in sigma)
                continue
            cell = R.target_cell(colors, k)
            for w in reversed(cell):
                stack.append((R.individualize(colors, w), k + 1, depth + 1))
        return None

    for level in reversed(range(len(cells))):
        prefix = chosen[:level]
        stab = [s for s in gens if all(s[p] == p for p in prefix)]
        v = chosen[level]
        bad = []
        colors, k = nodes[level]
        orbit_of = _orbit_lookup(n, stab)
        for w in cells[level]:
            if w == v:
                continue
            if orbit_of[w] == orbit_of[v] or any(orbit_of[w] == orbit_of[b] for b in bad):
                continue
            sigma = explore(R.individualize(colors, w), k + 1, level + 1)
            if sigma is None:
                bad.append(w)
                continue
            gens.append(sigma)
            stab.append(sigma)
            found.append(sigma)
            if stop_on_new:
                return found
            orbit_of = _orbit_lookup(n, stab)
    return found


def _orbit_lookup(n, gens):
    lookup = np.empty(n, dtype=np.int64)
    for k, orb in enumerate(orbit_partition(n, gens)):
        lookup[orb] = k
    return lookup


def brute_force_automorphisms(g: Digraph) -> list:
    """Every automorphism, by testing all n! permutations."""
    n = g.n
    A = g.adjacency()
    P = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    ok = np.all(A[P[:, :, None], P[:, None, :]] == A[None, :, :], axis=(1, 2))
    return [tuple(int(x) for x in p) for p in P[ok]]


def automorphism_group(g: Digraph, method: str = "auto", seeds: Sequence = ()) -> PermGroup:
    """Full automorphism group of ``g``.

    ``method`` is "auto" (brute force when n <= 6, search otherwise),
    "search" or "brute".  ``seeds`` are known automorphisms used only for
    pruning; they are verified first.
    """
    if method == "brute" or (method == "auto" and g.n <= BRUTE_FORCE_LIMIT):
        return PermGroup.from_elements(g.n, brute_force_automorphisms(g))
    R = _Refiner(g)
    seeds = [tuple(s) for s in seeds]
    for s in seeds:
        if not R.is_automorphism(np.asarray(s)):
            raise ValueError("seed is not an automorphism")
    found = _search(g, seeds)
    return PermGroup(g.n, seeds + found)


def has_automorphism_beyond(g: Digraph, seeds: Sequence) -> tuple | None:
    """An automorphism outside <seeds> when the seeds act semiregularly, else None."""
    found = _search(g, seeds, stop_on_new=True)
    return found[0] if found else None


def group_order(P: PermGroup) -> int:
    return P.order()


def orbits(P: PermGroup) -> list:
    return P.orbits()


def is_semiregular(P: PermGroup) -> bool:
    return P.is_semiregular()


def point_stabilizer_order(P: PermGroup, v: int) -> int:
    return P.point_stabilizer_order(v)


def is_vertex_transitive(g: Digraph) -> bool:
    return automorphism_group(g).is_transitive()


@dataclass(frozen=True)
class OmsrVerdict:
    is_omsr: bool
    aut_order: int
    witness: tuple | None
    orbit_count: int
    oriented: bool
    regular: bool
    valency: int | None
    stabilizer_order: int

    def to_json(self) -> dict:
        return {"is_omsr": self.is_omsr, "aut_order": self.aut_order,
                "witness": list(self.witness) if self.witness else None,
                "orbit_count": self.orbit_count, "oriented": self.oriented,
                "regular": self.regular, "valency": self.valency,
                "stabilizer_order": self.stabilizer_order}


def check_omsr(G, T: ConnectionSets, method: str = "auto") -> OmsrVerdict:
    """Decide whether T defines an oriented m-semiregular representation of G."""
    if T.group is not G and T.group.order != G.order:
        raise ValueError("connection sets are over a different group")
    report = validate(T)
    gamma = build(T)
    d = is_regular(gamma.digraph)
    A = automorphism_group(gamma.digraph, method=method)
    order = A.order()
    witness = None
    if order > G.order:
        rg = {right_action(gamma, h) for h in range(G.order)}
        witness = next((s for s in A.generators if s not in rg), None)
    ok = report.oriented and d is not None and order == G.order
    return OmsrVerdict(ok, order, witness, len(A.orbits()), report.oriented,
                       d is not None, d, A.point_stabilizer_order(0))


def haar_equivalence(G, S, T, sigma: Sequence[int]) -> tuple:
    """(sigma in Aut Cay(G,S) ∩ Aut Cay(G,T), doubled sigma in Aut BiCay(G,∅,∅,S,T))."""
    sigma = np.asarray(sigma, dtype=np.int64)
    n = G.order
    g = np.arange(n)

    def preserves(conn):
        # arcs g -> s*g of Cay(G, conn)
        A = np.zeros((n, n), dtype=bool)
        for s in conn:
            A[g, G.mul[s, g]] = True
        return bool(np.array_equal(A[sigma[:, None], sigma[None, :]], A))

    lhs = preserves(S) and preserves(T)
    from .mcayley import bicay
    gamma = build(bicay(G, (), (), S, T))
    doubled = np.concatenate([sigma, sigma + n])
    rhs = _Refiner(gamma.digraph).is_automorphism(doubled)
    return lhs, rhs
