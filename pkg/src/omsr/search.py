"""Exhaustive searches over connection-set tables.

The space for (G, m) is every oriented table T[i, j] without loops whose row
and column sizes all equal a given valency.  Cell sizes are fixed first (row and column sums
equal the valency), then cell contents are filled row-major.  Two optional
reductions keep one table per equivalence class:

* group automorphisms: alpha in Aut(G) applied to every cell gives an
  isomorphic digraph (g_i -> alpha(g)_i); a table is kept only when it is
  lexicographically least in its Aut(G)-orbit, tested cell by cell against
  the stabilizer of the earlier cells;
* part relabelling: a permutation pi of the parts gives an isomorphic digraph
  (g_i -> g_pi(i)); a table is kept only when its matrix of cell sizes is the
  least under all of Sym(m).

Each surviving table is built and handed to the automorphism engine, seeded
with the right translations.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .automorphisms import ENGINE_VERSION, check_omsr, has_automorphism_beyond
from .groups import FiniteGroup, automorphism_table
from .mcayley import ConnectionSets, build, right_action_generators


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchSpace:
    group: FiniteGroup
    m: int
    valency_range: tuple | None = None
    group_automorphism_orbits: bool = False
    part_symmetry: bool = False
    require_oriented: bool = True
    require_regular: bool = True

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        if not (self.require_oriented and self.require_regular):
            raise ValueError("only oriented regular spaces are supported")
        if self.valency_range is not None and self.valency_range[1] > self.max_valency:
            raise ValueError(f"valency {self.valency_range[1]} exceeds the bound {self.max_valency} for oriented digraphs")

    @property
    def max_valency(self) -> int:
        return (self.m * self.group.order - 1) // 2

    @property
    def valencies(self) -> tuple:
        if self.valency_range is None:
            return tuple(range(0, self.max_valency + 1))
        lo, hi = self.valency_range
        return tuple(range(lo, min(hi, self.max_valency) + 1))

    @property
    def constraints(self) -> dict:
        return {"require_oriented": True, "require_regular": True,
                "valency_range": [self.valencies[0], self.valencies[-1]] if self.valencies else None}

    @property
    def reductions(self) -> dict:
        return {"group_automorphism_orbits": self.group_automorphism_orbits,
                "part_symmetry": self.part_symmetry}

    def key(self) -> dict:
        return {"group": self.group.name, "m": self.m, "constraints": self.constraints,
                "reductions": self.reductions, "engine_version": ENGINE_VERSION}


@dataclass
class Certificate:
    kind: str
    group: str
    m: int
    connection_sets: ConnectionSets | None
    aut_order: int | None
    candidates_examined: int
    reductions_used: dict
    engine_version: str = ENGINE_VERSION
    constraints: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self, include_time: bool = False) -> dict:
        out = {"kind": self.kind, "group": self.group, "m": self.m,
               "connection_sets": self.connection_sets.to_json() if self.connection_sets else None,
               "aut_order": self.aut_order, "candidates_examined": self.candidates_examined,
               "reductions_used": self.reductions_used, "constraints": self.constraints,
               "engine_version": self.engine_version}
        if include_time:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def dumps(self, include_time: bool = False) -> str:
        """Canonical JSON; wall time is left out unless asked for, so reruns are byte identical."""
        return json.dumps(self.to_json(include_time), sort_keys=True, separators=(",", ":"))

    def verify(self) -> bool:
        """Witness certificates re-check under check_omsr; others are trusted."""
        if self.kind in ("omsr_witness", "orr_witness"):
            T = self.connection_sets
            return check_omsr(T.group, T).is_omsr
        return True


def certificate_path(space: SearchSpace, directory: str) -> str:
    digest = hashlib.sha256(json.dumps(space.key(), sort_keys=True).encode()).hexdigest()[:16]
    return os.path.join(directory, f"{space.group.name}_m{space.m}_{digest}.json")


def write_certificate(cert: Certificate, path: str) -> None:
    """Atomic write: temp file then rename."""
    d = os.path.dirname(path) or "."
    os.makedirs(d, exist_ok=True)
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(cert.dumps() + "\n")
    os.replace(tmp, path)


# ------------------------------------------------------------- enumeration

def _diagonal_pool(G: FiniteGroup) -> list:
    """Elements allowed in a diagonal cell (not 1, not an involution)."""
    return [g for g in range(G.order) if g != G.identity and int(G.inv[g]) != g]


def _max_diagonal(G: FiniteGroup) -> int:
    return len(_diagonal_pool(G)) // 2


def size_matrices(G: FiniteGroup, m: int, d: int, part_symmetry: bool = False):
    """Cell-size matrices with all row and column sums d, in lexicographic order."""
    n, hmax = G.order, _max_diagonal(G)
    cells = [(i, j) for i in range(m) for j in range(m)]
    M = np.zeros((m, m), dtype=np.int64)
    perms = [np.array(p) for p in itertools.permutations(range(m))] if part_symmetry and m > 1 else []

    def rec(c, row_left, col_left):
        if c == len(cells):
            if part_symmetry:
                flat = M.flatten()
                for p in perms:
                    other = M[np.ix_(p, p)].flatten()
                    diff = np.flatnonzero(other != flat)
                    if diff.size and other[diff[0]] < flat[diff[0]]:
                        return
            yield M.copy()
            return
        i, j = cells[c]
        last_in_row = j == m - 1
        last_in_col = i == m - 1
        hi = min(row_left[i], col_left[j], hmax if i == j else n)
        if i > j:
            hi = min(hi, n - M[j, i])
        lo = 0
        if last_in_row:
            lo = hi = row_left[i] if row_left[i] <= hi else -1
            if lo < 0:
                return
        if last_in_col:
            if col_left[j] < lo or col_left[j] > hi:
                return
            lo = hi = col_left[j]
        for k in range(lo, hi + 1):
            M[i, j] = k
            row_left[i] -= k
            col_left[j] -= k
            yield from rec(c + 1, row_left, col_left)
            row_left[i] += k
            col_left[j] += k
        M[i, j] = 0

    yield from rec(0, [d] * m, [d] * m)


def _subsets(pool, k):
    for combo in itertools.combinations(pool, k):
        yield combo


class _Enumerator:
    """Fills cell contents for fixed sizes, optionally up to Aut(G)."""

    def __init__(self, G: FiniteGroup, m: int, use_aut: bool):
        self.G, self.m, self.n = G, m, G.order
        self.diag_pool = _diagonal_pool(G)
        self.aut = automorphism_table(G, bound=max(32, G.order)) if use_aut else None
        self.cells = [(i, j) for i in range(m) for j in range(m)]

    def _mask(self, S) -> int:
        out = 0
        for s in S:
            out |= 1 << s
        return out

    def _images(self, S, stab):
        """Bitmask images of S under the automorphisms with row indices ``stab``."""
        if not S:
            return np.zeros(len(stab), dtype=np.uint64)
        rows = self.aut[stab][:, list(S)].astype(np.uint64)
        return np.bitwise_or.reduce(np.left_shift(np.uint64(1), rows), axis=1)

    def tables(self, sizes, prefix=None):
        """Yield cell dicts for the size matrix ``sizes``; ``prefix`` pins the first non-empty cell."""
        G, inv = self.G, self.G.inv
        cells = [c for c in self.cells if sizes[c] > 0]
        chosen = {}
        stab0 = np.arange(len(self.aut)) if self.aut is not None else None

        def rec(c, stab, first):
            if c == len(cells):
                yield dict(chosen)
                return
            i, j = cells[c]
            k = int(sizes[i, j])
            if i == j:
                pool = self.diag_pool
            else:
                banned = {int(inv[t]) for t in chosen.get((j, i), ())}
                pool = [g for g in range(self.n) if g not in banned]
            options = [prefix] if first and prefix is not None else _subsets(pool, k)
            for S in options:
                if i == j and any(int(inv[s]) in S for s in S):
                    continue
                new_stab = stab
                if stab is not None:
                    mask = np.uint64(self._mask(S))
                    imgs = self._images(S, stab)
                    if imgs.min() < mask:
                        continue
                    new_stab = stab[imgs == mask]
                chosen[(i, j)] = S
                yield from rec(c + 1, new_stab, False)
                del chosen[(i, j)]

        yield from rec(0, stab0, True)

    def first_cells(self, sizes) -> list:
        """Admissible contents of the first non-empty cell (the unit of parallel work)."""
        cells = [c for c in self.cells if sizes[c] > 0]
        if not cells:
            return [None]
        i, j = cells[0]
        k = int(sizes[i, j])
        pool = self.diag_pool if i == j else list(range(self.n))
        out = []
        for S in _subsets(pool, k):
            if i == j and any(int(self.G.inv[s]) in S for s in S):
                continue
            if self.aut is not None:
                mask = np.uint64(self._mask(S))
                if self._images(S, np.arange(len(self.aut))).min() < mask:
                    continue
            out.append(S)
        return out


def _is_representation(G: FiniteGroup, T: ConnectionSets) -> bool:
    """True when Aut of the built digraph is exactly R(G)."""
    gamma = build(T)
    seeds = right_action_generators(gamma)
    return has_automorphism_beyond(gamma.digraph, seeds) is None


def _run_task(args):
    G, m, use_aut, sizes, prefix, budget = args
    E = _Enumerator(G, m, use_aut)
    count = 0
    for cells in E.tables(sizes, prefix):
        count += 1
        if budget is not None and count > budget:
            return count, None, True
        T = ConnectionSets(G, m, cells)
        if _is_representation(G, T):
            return count, T.to_json(), False
    return count, None, False


def _tasks(space: SearchSpace, max_candidates):
    G, m = space.group, space.m
    E = _Enumerator(G, m, space.group_automorphism_orbits)
    for d in space.valencies:
        for sizes in size_matrices(G, m, d, space.part_symmetry):
            for prefix in E.first_cells(sizes):
                yield (G, m, space.group_automorphism_orbits, sizes, prefix, max_candidates)


def _explore(space: SearchSpace, max_candidates=None, workers: int = 1):
    """(witness ConnectionSets or None, candidates examined)."""
    G = space.group
    total = 0
    tasks = _tasks(space, max_candidates)

    def consume(results):
        nonlocal total
        for count, witness, over in results:
            total += count
            if over or (max_candidates is not None and total > max_candidates):
                raise BudgetExceeded(f"more than {max_candidates} candidates")
            if witness is not None:
                return ConnectionSets.from_json(witness, G)
        return None

    if workers <= 1:
        return consume(_run_task(t) for t in tasks), total
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # results are consumed in task order, so counts match the serial run
        return consume(pool.map(_run_task, tasks, chunksize=8)), total


def prove_nonexistence(space: SearchSpace, max_candidates=None, workers: int = 1) -> Certificate:
    """Full traversal; a nonexistence certificate, or the witness that refutes it."""
    t0 = time.perf_counter()
    witness, count = _explore(space, max_candidates, workers)
    kind = "nonexistence" if witness is None else "omsr_witness"
    if space.m == 1:
        kind = "orr_nonexistence" if witness is None else "orr_witness"
    return Certificate(kind, space.group.name, space.m, witness,
                       space.group.order if witness is not None else None, count,
                       space.reductions, constraints=space.constraints,
                       wall_time=time.perf_counter() - t0)


def find_omsr(G: FiniteGroup, m: int, valency_cap: int | None = None, reductions: bool = True,
              max_candidates=None, workers: int = 1) -> Certificate:
    """First witness in enumeration order with valency <= cap, or nonexistence up to the cap."""
    cap = (m * G.order - 1) // 2 if valency_cap is None else min(valency_cap, (m * G.order - 1) // 2)
    space = SearchSpace(G, m, (0, cap), reductions and _aut_ok(G), reductions)
    return prove_nonexistence(space, max_candidates, workers)


def _aut_ok(G: FiniteGroup) -> bool:
    # brute-force Aut tables stay cheap up to order 16
    return G.order <= 16


def find_orr(G: FiniteGroup, bound: int = 16, reductions: bool = True, max_candidates=None) -> Certificate:
    """Smallest oriented regular representation Cay(G, R), or an exhaustive nonexistence."""
    if G.order > bound:
        raise BudgetExceeded(f"|G| = {G.order} exceeds the exhaustive bound {bound}")
    t0 = time.perf_counter()
    aut = automorphism_table(G, bound=max(32, G.order)) if reductions else None
    pool = _diagonal_pool(G)
    count = 0
    for k in range(0, len(pool) // 2 + 1):
        for R in itertools.combinations(pool, k):
            if any(int(G.inv[r]) in R for r in R):
                continue
            if aut is not None and R:
                mask = sum(1 << r for r in R)
                imgs = np.bitwise_or.reduce(np.left_shift(np.uint64(1), aut[:, list(R)].astype(np.uint64)), axis=1)
                if imgs.min() < np.uint64(mask):
                    continue
            count += 1
            if max_candidates is not None and count > max_candidates:
                raise BudgetExceeded(f"more than {max_candidates} candidates")
            T = ConnectionSets(G, 1, {(0, 0): R})
            if _is_representation(G, T):
                return Certificate("orr_witness", G.name, 1, T, G.order, count,
                                   {"group_automorphism_orbits": reductions, "part_symmetry": False},
                                   constraints={"require_oriented": True, "require_regular": True,
                                                "valency_range": None},
                                   wall_time=time.perf_counter() - t0)
    return Certificate("orr_nonexistence", G.name, 1, None, None, count,
                       {"group_automorphism_orbits": reductions, "part_symmetry": False},
                       constraints={"require_oriented": True, "require_regular": True, "valency_range": None},
                       wall_time=time.perf_counter() - t0)


def closed_form_count(G: FiniteGroup, m: int, valencies) -> int | None:
    """Size of the unreduced space where a formula is known: m = 2 over Z2^k (Haar type)."""
    n = G.order
    if m != 2 or _diagonal_pool(G):
        return None
    return sum(comb(n, d) * comb(n - d, d) for d in valencies)
