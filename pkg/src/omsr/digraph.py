"""Loopless digraphs on vertices 0..n-1 with both adjacency directions stored."""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

VertexSet = frozenset


@dataclass(frozen=True, eq=False)
class Digraph:
    n: int
    out_adj: tuple
    in_adj: tuple

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Sequence[int]]) -> "Digraph":
        arr = np.asarray(list(arcs) if not isinstance(arcs, np.ndarray) else arcs, dtype=np.int64)
        return cls.from_arc_array(n, arr.reshape(-1, 2))

    @classmethod
    def from_arc_array(cls, n: int, arr: np.ndarray) -> "Digraph":
        if n < 1:
            raise ValueError("a digraph needs at least one vertex")
        arr = np.asarray(arr, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("arc endpoint out of range")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("loops are not allowed")
        codes = np.unique(arr[:, 0] * n + arr[:, 1])
        src, dst = codes // n, codes % n
        out_adj = _split(n, src, dst)
        order = np.lexsort((src, dst))
        in_adj = _split(n, dst[order], src[order])
        return cls(n, out_adj, in_adj)

    @property
    def arc_count(self) -> int:
        return sum(len(a) for a in self.out_adj)

    def arcs(self) -> list:
        return [(u, v) for u in range(self.n) for v in self.out_adj[u]]

    def arc_array(self) -> np.ndarray:
        a = self.arcs()
        return np.array(a, dtype=np.int64).reshape(-1, 2)

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=bool)
        arr = self.arc_array()
        A[arr[:, 0], arr[:, 1]] = True
        return A

    def has_arc(self, u: int, v: int) -> bool:
        adj = self.out_adj[u]
        i = np.searchsorted(adj, v)
        return i < len(adj) and adj[i] == v

    def to_json(self) -> dict:
        return {"n": self.n, "arcs": [list(a) for a in self.arcs()]}

    @classmethod
    def from_json(cls, data: dict) -> "Digraph":
        return cls.from_arcs(data["n"], data["arcs"])

    def __repr__(self):
        return f"Digraph(n={self.n}, arcs={self.arc_count})"


def _split(n, keys, vals):
    bounds = np.searchsorted(keys, np.arange(n + 1))
    return tuple(tuple(int(v) for v in vals[bounds[i]:bounds[i + 1]]) for i in range(n))


def out_neighbors(g: Digraph, x: int) -> frozenset:
    return frozenset(g.out_adj[x])


def in_neighbors(g: Digraph, x: int) -> frozenset:
    return frozenset(g.in_adj[x])


def arc_count(g: Digraph, X: Iterable[int], Y: Iterable[int]) -> int:
    """Number of arcs (u, v) with u in X and v in Y."""
    Y = set(Y)
    return sum(1 for u in set(X) for v in g.out_adj[u] if v in Y)


def induced(g: Digraph, X: Iterable[int]) -> tuple:
    """Induced subdigraph on X, re-indexed in ascending order, plus the index map."""
    X = sorted(set(X))
    if not X:
        raise ValueError("induced subdigraph needs a non-empty vertex set")
    pos = {v: i for i, v in enumerate(X)}
    arcs = [(pos[u], pos[v]) for u in X for v in g.out_adj[u] if v in pos]
    return Digraph.from_arcs(len(X), arcs), tuple(X)


def is_oriented(g: Digraph) -> bool:
    return not any(g.has_arc(v, u) for u, v in g.arcs())


def is_regular(g: Digraph):
    """The common in/out valency, or None."""
    degs = {len(a) for a in g.out_adj} | {len(a) for a in g.in_adj}
    return degs.pop() if len(degs) == 1 else None


def oriented_3cycles(g: Digraph) -> list:
    """Directed triangles (a, b, c) with a the smallest vertex."""
    out = []
    for a in range(g.n):
        for b in g.out_adj[a]:
            if b <= a:
                continue
            for c in g.out_adj[b]:
                if c > a and g.has_arc(c, a):
                    out.append((a, b, c))
    return sorted(out)


def cycle_vertices(cycles: Iterable[Sequence[int]]) -> frozenset:
    return frozenset(v for c in cycles for v in c)


def cycles_through(cycles: Iterable[Sequence[int]], S: Iterable[int]) -> list:
    S = set(S)
    return [c for c in cycles if S & set(c)]


def closed_neighborhood(g: Digraph, cycles: Iterable[Sequence[int]]) -> frozenset:
    """Vertices of the cycles together with all their in- and out-neighbours."""
    W = cycle_vertices(cycles)
    out = set(W)
    for v in W:
        out.update(g.out_adj[v])
        out.update(g.in_adj[v])
    return frozenset(out)


def is_connected_underlying(g: Digraph) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in g.out_adj[u] + g.in_adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == g.n


def directed_cycle(n: int) -> Digraph:
    return Digraph.from_arcs(n, [(i, (i + 1) % n) for i in range(n)] if n > 1 else [])


def edgeless(n: int) -> Digraph:
    return Digraph.from_arcs(n, [])


def to_dot(g: Digraph, labels: Sequence[str] | None = None, name: str = "G") -> str:
    labels = labels or [str(v) for v in range(g.n)]
    lines = [f"digraph {name} {{"]
    for v in range(g.n):
        lines.append(f'  {v} [label="{labels[v]}"];')
    for u, v in g.arcs():
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_NODE = re.compile(r'^\s*(\d+)\s*\[label="([^"]*)"\];\s*$')
_EDGE = re.compile(r"^\s*(\d+)\s*->\s*(\d+);\s*$")


def parse_dot(text: str) -> tuple:
    """Inverse of ``to_dot`` for its own output: (digraph, labels)."""
    labels, arcs = {}, []
    for line in text.splitlines():
        m = _NODE.match(line)
        if m:
            labels[int(m.group(1))] = m.group(2)
            continue
        m = _EDGE.match(line)
        if m:
            arcs.append((int(m.group(1)), int(m.group(2))))
    n = len(labels)
    return Digraph.from_arcs(n, arcs), [labels[v] for v in range(n)]


def dumps(g: Digraph) -> str:
    return json.dumps(g.to_json(), separators=(",", ":"))
