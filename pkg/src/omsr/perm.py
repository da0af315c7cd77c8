"""Permutations as image tuples and a Schreier-Sims stabilizer chain.

A permutation ``p`` sends point ``i`` to ``p[i]``.  Products act left to
right: ``mul(p, q)`` is "first p, then q".
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

Permutation = tuple


def identity(n: int) -> tuple:
    return tuple(range(n))


def mul(p: Sequence[int], q: Sequence[int]) -> tuple:
    return tuple(q[i] for i in p)


def inverse(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_identity(p: Sequence[int]) -> bool:
    return all(i == j for i, j in enumerate(p))


def check_perm(p: Sequence[int]) -> None:
    if sorted(p) != list(range(len(p))):
        raise ValueError("not a permutation")


def orbit_partition(n: int, gens: Iterable[Sequence[int]]) -> list:
    """Orbits of <gens> on 0..n-1, each sorted, ordered by least element."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for i, j in enumerate(g):
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


class PermGroup:
    """Permutation group with a base and strong generating set.

    The chain is built once with the textbook deterministic Schreier-Sims
    procedure; order and membership then come from sifting.
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]] = ()):
        self.degree = degree
        gens = []
        for g in generators:
            g = tuple(int(v) for v in g)
            if len(g) != degree:
                raise ValueError("generator degree mismatch")
            check_perm(g)
            if not is_identity(g) and g not in gens:
                gens.append(g)
        self.generators = tuple(gens)
        self.base: list = []
        self._strong: list = []      # level -> list of strong generators
        self._trans: list = []       # level -> {point: coset representative}
        self._build()

    @classmethod
    def from_elements(cls, degree: int, elements: Iterable[Sequence[int]]) -> "PermGroup":
        """Group generated by ``elements``, keeping only those not already reached."""
        G = cls(degree)
        for e in elements:
            if not G.contains(e):
                G = cls(degree, G.generators + (tuple(e),))
        return G

    # -- chain construction
    def _orbit(self, level: int):
        b = self.base[level]
        trans = {b: identity(self.degree)}
        queue = [b]
        for pt in queue:
            u = trans[pt]
            for s in self._strong[level]:
                q = s[pt]
                if q not in trans:
                    trans[q] = mul(u, s)
                    queue.append(q)
        self._trans[level] = trans

    def _new_level(self, g):
        pt = next(i for i, j in enumerate(g) if i != j)
        self.base.append(pt)
        self._strong.append([])
        self._trans.append({})

    def _sift(self, g, start=0):
        for level in range(start, len(self.base)):
            b = self.base[level]
            pt = g[b]
            u = self._trans[level].get(pt)
            if u is None:
                return g, level
            g = mul(g, inverse(u))
        return g, len(self.base)

    def _build(self):
        for g in self.generators:
            if all(g[b] == b for b in self.base):
                self._new_level(g)
        for level in range(len(self.base)):
            fixed = self.base[:level]
            self._strong[level] = [g for g in self.generators if all(g[b] == b for b in fixed)]
            self._orbit(level)
        i = len(self.base) - 1
        while i >= 0:
            restart = False
            trans = self._trans[i]
            for pt, u in list(trans.items()):
                for s in list(self._strong[i]):
                    h = mul(mul(u, s), inverse(trans[s[pt]]))
                    h, j = self._sift(h, i + 1)
                    if not is_identity(h):
                        if j == len(self.base):
                            self._new_level(h)
                        for level in range(i + 1, j + 1):
                            self._strong[level].append(h)
                            self._orbit(level)
                        i = j
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                i -= 1

    # -- queries
    def order(self) -> int:
        return math.prod(len(t) for t in self._trans)

    def contains(self, g: Sequence[int]) -> bool:
        g = tuple(g)
        if len(g) != self.degree:
            return False
        h, j = self._sift(g)
        return j == len(self.base) and is_identity(h)

    def orbits(self) -> list:
        return orbit_partition(self.degree, self.generators)

    def orbit(self, v: int) -> list:
        return next(o for o in self.orbits() if v in o)

    def is_semiregular(self) -> bool:
        order = self.order()
        return all(len(o) == order for o in self.orbits())

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def point_stabilizer_order(self, v: int) -> int:
        return self.order() // len(self.orbit(v))

    def elements(self) -> list:
        """All elements, by walking the transversals (small groups only)."""
        out = [identity(self.degree)]
        for trans in reversed(self._trans):
            out = [mul(g, u) for u in trans.values() for g in out]
        return sorted(out)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order()})"


def group_order(P: PermGroup) -> int:
    return P.order()


def contains(P: PermGroup, g: Sequence[int]) -> bool:
    return P.contains(g)
