"""Connection-set families T[i, j] and the m-Cayley digraph they define.

Vertex ``g_i`` (element g in part i) has index ``i*|G| + g``; every
``t in T[i, j]`` contributes the arcs ``g_i -> (t*g)_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .digraph import Digraph
from .groups import FiniteGroup, set_inverse


@dataclass(frozen=True, eq=False)
class ConnectionSets:
    group: FiniteGroup
    m: int
    cells: Mapping
    notes: tuple = ()

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        clean = {}
        for (i, j), s in sorted(self.cells.items()):
            if not (0 <= i < self.m and 0 <= j < self.m):
                raise ValueError(f"cell {(i, j)} outside Z_{self.m}")
            s = frozenset(int(t) for t in s)
            if any(not 0 <= t < self.group.order for t in s):
                raise ValueError("element index out of range")
            if s:
                clean[(i, j)] = s
        object.__setattr__(self, "cells", clean)

    def __getitem__(self, ij) -> frozenset:
        return self.cells.get(tuple(ij), frozenset())

    @classmethod
    def from_words(cls, group: FiniteGroup, m: int, cells: Mapping, notes=()) -> "ConnectionSets":
        """Cells given as iterables of words, e.g. ``{(0, 1): ["1", "xy"]}``; indices are taken mod m."""
        out = {}
        for (i, j), words in cells.items():
            key = (i % m, j % m)
            out[key] = out.get(key, frozenset()) | frozenset(
                w if isinstance(w, (int, np.integer)) else group.word(w) for w in words)
        return cls(group, m, out, tuple(notes))

    def row_sizes(self) -> list:
        return [sum(len(self[i, j]) for j in range(self.m)) for i in range(self.m)]

    def column_sizes(self) -> list:
        return [sum(len(self[i, j]) for i in range(self.m)) for j in range(self.m)]

    def valency(self):
        """Common row/column size, or None."""
        sizes = set(self.row_sizes()) | set(self.column_sizes())
        return sizes.pop() if len(sizes) == 1 else None

    def apply(self, alpha) -> "ConnectionSets":
        """Image under a group automorphism given as an index array."""
        return ConnectionSets(self.group, self.m,
                              {k: frozenset(int(alpha[t]) for t in s) for k, s in self.cells.items()},
                              self.notes)

    def permute_parts(self, pi) -> "ConnectionSets":
        return ConnectionSets(self.group, self.m,
                              {(pi[i], pi[j]): s for (i, j), s in self.cells.items()}, self.notes)

    def key(self) -> tuple:
        return tuple((i, j, tuple(sorted(s))) for (i, j), s in sorted(self.cells.items()))

    def to_json(self, words: bool = False) -> dict:
        G = self.group
        cells = []
        for (i, j), s in sorted(self.cells.items()):
            elems = [G.name_of(t) for t in sorted(s)] if words else sorted(s)
            cells.append({"i": i, "j": j, "elements": elems})
        out = {"group": G.name, "m": self.m, "cells": cells}
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_json(cls, data: dict, group: FiniteGroup) -> "ConnectionSets":
        cells = {}
        for c in data["cells"]:
            cells[(c["i"], c["j"])] = [e if isinstance(e, int) else group.word(e) for e in c["elements"]]
        return cls(group, data["m"], cells, tuple(data.get("notes", ())))

    def __repr__(self):
        body = ", ".join(f"T{i},{j}={{{','.join(self.group.name_of(t) for t in sorted(s))}}}"
                         for (i, j), s in sorted(self.cells.items()))
        return f"ConnectionSets({self.group.name}, m={self.m}: {body})"


@dataclass(frozen=True)
class ValidationReport:
    oriented: bool
    loop_free: bool


@dataclass(frozen=True, eq=False)
class MCayleyDigraph:
    digraph: Digraph
    source: ConnectionSets

    @property
    def group(self) -> FiniteGroup:
        return self.source.group

    @property
    def m(self) -> int:
        return self.source.m

    def vertex(self, g: int, i: int) -> int:
        return i * self.group.order + g

    def element_part(self, v: int) -> tuple:
        i, g = divmod(v, self.group.order)
        return g, i

    def label(self, v: int) -> str:
        g, i = self.element_part(v)
        return f"{self.group.name_of(g)}_{i}"

    def labels(self) -> list:
        return [self.label(v) for v in range(self.digraph.n)]


def validate(T: ConnectionSets) -> ValidationReport:
    G = T.group
    loop_free = all(G.identity not in T[i, i] for i in range(T.m))
    oriented = all(not (T[i, j] & set_inverse(G, T[j, i]))
                   for i in range(T.m) for j in range(T.m))
    return ValidationReport(oriented, loop_free)


def arc_array(T: ConnectionSets) -> np.ndarray:
    G = T.group
    n = G.order
    g = np.arange(n)
    chunks = []
    for (i, j), s in sorted(T.cells.items()):
        for t in sorted(s):
            chunks.append(np.stack([i * n + g, j * n + G.mul[t, g]], axis=1))
    if not chunks:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(chunks)


def build(T: ConnectionSets) -> MCayleyDigraph:
    if not validate(T).loop_free:
        raise ValueError("identity in a diagonal cell would create loops")
    return MCayleyDigraph(Digraph.from_arc_array(T.m * T.group.order, arc_array(T)), T)


def bicay(G: FiniteGroup, R, L, S, T, notes=()) -> ConnectionSets:
    return ConnectionSets(G, 2, {(0, 0): R, (1, 1): L, (0, 1): S, (1, 0): T}, tuple(notes))


def cayley(G: FiniteGroup, R) -> ConnectionSets:
    return ConnectionSets(G, 1, {(0, 0): R})


def right_action(gamma: MCayleyDigraph, g: int) -> tuple:
    """R(g): x_i -> (x*g)_i."""
    G = gamma.group
    n = G.order
    col = G.mul[:, g]
    return tuple(int(i * n + col[x]) for i in range(gamma.m) for x in range(n))


def right_action_generators(gamma: MCayleyDigraph) -> list:
    return [right_action(gamma, g) for g in gamma.group.generators]


def part_set(gamma: MCayleyDigraph, i: int) -> frozenset:
    n = gamma.group.order
    return frozenset(range(i * n, (i + 1) * n))


def elem_set(gamma: MCayleyDigraph, H: Iterable[int], i: int) -> frozenset:
    n = gamma.group.order
    return frozenset(i * n + h for h in H)
