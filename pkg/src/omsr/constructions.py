"""Explicit connection-set families and the arc-count claims attached to them.

Every builder returns a ``ConnectionSets``.  Where a printed table had to be
corrected to be oriented or regular, the correction is applied here and
recorded in the ``notes`` of the result; ``literal=True`` reproduces the
table exactly as printed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .catalog import EXCEPTIONAL, NO_ORR_ABELIAN, UnknownGroup, get_group, info
from .digraph import arc_count, induced, out_neighbors
from .groups import FiniteGroup, element_order, generalized_dihedral, set_inverse, set_product
from .mcayley import ConnectionSets, bicay, build, cayley


class ConstructionError(ValueError):
    pass


def _inv(G: FiniteGroup, A) -> frozenset:
    return set_inverse(G, A)


def _require_orr_input(G: FiniteGroup, R, a):
    R = frozenset(R)
    if G.identity in R or R & _inv(G, R):
        raise ConstructionError("R must avoid 1 and satisfy R ∩ R^-1 = ∅")
    if a not in R:
        raise ConstructionError("a must lie in R")
    return R


# ------------------------------------------------------------ ORR lift

def orr_lift_o2sr(G: FiniteGroup, R, a: int) -> ConnectionSets:
    """BiCay(G, R, R^-1, {1}, {a^-1}) for an ORR connection set R and a in R."""
    if G.order < 3:
        raise ConstructionError("needs |G| >= 3")
    R = _require_orr_input(G, R, a)
    return bicay(G, R, _inv(G, R), {G.identity}, {int(G.inv[a])})


def orr_lift_omsr(G: FiniteGroup, R, a: int, m: int) -> ConnectionSets:
    """Cyclic chain of m copies of Cay(G, R) with valency |R|+2 (m >= 3)."""
    if m < 3:
        raise ConstructionError("needs m >= 3")
    if G.order < 3:
        raise ConstructionError("needs |G| >= 3")
    R = _require_orr_input(G, R, a)
    one, ai = G.identity, int(G.inv[a])
    cells = {}
    for i in range(m):
        cells[(i, (i - 1) % m)] = {one} if i != 1 else set()
        cells[(i, i)] = set(R) if i != 1 else set(_inv(G, R))
        if i not in (0, m - 1):
            cells[(i, i + 1)] = {ai}
    cells[(0, 1)] = {one}
    cells[(1, 0)] = {ai}
    cells[(m - 1, 0)] = {a}
    return ConnectionSets(G, m, cells)


def triple_count(G: FiniteGroup, R) -> int:
    """k = #{(x, y, z) in R^3 : xy = z}, the arc count of Cay(G, R) inside the out-neighbourhood of 1."""
    R = sorted(R)
    Rs = set(R)
    return sum(1 for x in R for y in R if int(G.mul[x, y]) in Rs)


@dataclass(frozen=True)
class ClaimReport:
    k: int
    measured: dict
    expected: dict

    @property
    def matches(self) -> bool:
        return self.measured == self.expected

    def to_json(self) -> dict:
        return {"k": self.k, "measured": {str(i): v for i, v in sorted(self.measured.items())},
                "expected": {str(i): v for i, v in sorted(self.expected.items())},
                "matches": self.matches}


def out_neighbourhood_arcs(T: ConnectionSets, parts=None) -> dict:
    """Part i -> number of arcs inside the out-neighbourhood of 1_i."""
    gamma = build(T)
    g = gamma.digraph
    out = {}
    for i in (range(T.m) if parts is None else parts):
        N = out_neighbors(g, gamma.vertex(T.group.identity, i))
        out[i] = arc_count(g, N, N)
    return out


def claim_orr_lift(G: FiniteGroup, R, a: int, m: int) -> ClaimReport:
    k = triple_count(G, R)
    if m == 2:
        T = orr_lift_o2sr(G, R, a)
        # the first part sees k, the second at least k+1; the exact second value is measured only
        measured = out_neighbourhood_arcs(T)
        return ClaimReport(k, {0: measured[0]}, {0: k})
    T = orr_lift_omsr(G, R, a, m)
    expected = {i: k for i in range(m)}
    expected[0] = k + 2 if m == 3 else k + 1
    expected[1] = k + 3 if m == 3 else k + 2
    expected[m - 1] = k + 1
    return ClaimReport(k, out_neighbourhood_arcs(T), expected)


# ------------------------------------------------------ trivial group

def _cycle_cells(m: int, walks) -> dict:
    cells = {}
    for w in walks:
        for u, v in zip(w, w[1:]):
            if (u, v) in cells:
                raise ConstructionError(f"arc {u}->{v} used twice")
            cells[(u, v)] = {0}
    return cells


def trivial_walks(m: int) -> list:
    """The three closed walks whose arcs make up the trivial-group digraph for m >= 12."""
    if m < 12:
        raise ConstructionError("closed-walk form needs m >= 12")
    first = [0, 1, 2, 3, 4, 5, 6, 0]
    if m % 2 == 0:
        second = [9] + list(range(10, m - 1, 2)) + [m - 1] + list(range(m - 3, 10, -2)) + [1, 9]
        third = [0, 4, 2, 6, 7, 8, 3, 5, 7, m - 2, 8, m - 1]
        for i in range(m - 4, 9, -2):
            third += [i, i + 1]
        third += [9, 0]
    else:
        second = [9] + list(range(10, m - 2, 2)) + [8, m - 1] + list(range(m - 2, 10, -2)) + [1, 9]
        third = [0, 4, 2, 6, 7, 8, 3, 5, 7, m - 1]
        for i in range(m - 3, 9, -2):
            third += [i, i + 1]
        third += [9, 0]
    return [first, second, third]


# 7 <= m <= 11: the printed table repeats the arc 1_1 -> 1_2 in reverse (T_{2,1}
# together with T_{1,2} from the i -> i+1 rule), which is a digon.  Exchanging the
# heads of 1_2 -> 1_1 and 1_3 -> 1_4 is the smallest change found that gives an
# oriented regular digraph, and the engine confirms it for every m in range.
TRIVIAL_SMALL_REPAIR = "T[2,1],T[3,4] -> T[2,4],T[3,1] (printed table has the digon 1_1 <-> 1_2)"


def trivial_small_arcs(m: int, literal: bool = False) -> set:
    arcs = {(0, 3), (1, 4), (2, 1), (m - 1, 2)} | {(j, j + 2) for j in range(3, m - 1)}
    arcs |= {(i, i + 1) for i in range(m)}
    arcs = {(i % m, j % m) for i, j in arcs}
    if not literal:
        arcs = (arcs - {(2, 1), (3, 4)}) | {(2, 4), (3, 1)}
    return arcs


def trivial_omsr(m: int, literal: bool = False) -> ConnectionSets:
    """Valency-2 m-Cayley digraph of the trivial group (m >= 7)."""
    G = get_group("Z1")
    if m < 7:
        raise ConstructionError("the trivial group needs m >= 7")
    if m <= 11:
        notes = () if literal else (TRIVIAL_SMALL_REPAIR,)
        return ConnectionSets(G, m, {a: {0} for a in trivial_small_arcs(m, literal)}, notes)
    return ConnectionSets(G, m, _cycle_cells(m, trivial_walks(m)))


# ------------------------------------------------ Z2^n with n <= 4

def _z2_small_table(n: int, m: int):
    """Printed tables for 3 <= m <= 11 as {cell: [words]}."""
    c = {}

    def put(word, *cells):
        for ij in cells:
            c.setdefault(ij, []).append(word)

    if n == 1:
        if m == 3:
            put("1", (0, 1), (0, 2), (2, 0)); put("x", (1, 0), (1, 2), (2, 1))
        elif m == 4:
            put("1", (0, 1), (0, 2), (3, 0), (3, 1)); put("x", (1, 0), (1, 2))
            put("1", (2, 3)); put("x", (2, 3))
        elif m == 5:
            put("1", (0, 1), (0, 3), (2, 0), (2, 4), (3, 1), (3, 4), (4, 3), (4, 2))
            put("x", (1, 0), (1, 2))
        elif m == 6:
            put("1", (0, 1), (0, 3), (2, 0), (2, 5), (3, 1), (3, 4), (4, 3), (5, 4))
            put("x", (1, 0), (1, 2), (4, 5), (5, 2))
        else:
            put("1", (0, 1), (0, 3), (2, 0), (2, 5), (3, 1), (3, 4), (4, 3), (5, 6), (m - 1, 4),
                *[(i, i + 1) for i in range(6, m - 1)])
            put("x", (1, 0), (1, 2), (4, m - 1), (5, 2), (m - 1, m - 2),
                *[(i, i - 1) for i in range(6, m - 1)])
    elif n == 2:
        if m == 3:
            put("1", (0, 1), (1, 2)); put("x", (2, 1)); put("y", (1, 0), (2, 0)); put("xy", (0, 2))
        elif m == 4:
            put("1", (0, 1), (1, 3), (3, 2)); put("x", (2, 3), (3, 1)); put("y", (1, 0), (2, 0))
            put("xy", (0, 2))
        else:
            put("1", (0, 1), (1, 3), (3, 4), (m - 1, 2), *[(i, i + 1) for i in range(4, m - 1)])
            put("y", (1, 0), (2, 0)); put("xy", (0, 2))
            put("x", (2, m - 1), (3, 1), (m - 1, m - 2), *[(i, i - 1) for i in range(4, m - 1)])
    elif n == 3:
        if m == 3:
            put("1", (0, 1), (1, 2)); put("x", (2, 1)); put("y", (2, 0)); put("z", (1, 0), (0, 2))
        elif m == 4:
            put("1", (0, 1), (1, 3), (3, 2)); put("x", (2, 3), (3, 1)); put("y", (2, 0)); put("z", (0, 2))
        else:
            put("1", (0, 1), (1, 3), (3, 4), (m - 1, 2), *[(i, i + 1) for i in range(4, m - 1)])
            put("y", (2, 0)); put("z", (1, 0), (0, 2))
            put("x", (2, m - 1), (3, 1), (m - 1, m - 2), *[(i, i - 1) for i in range(4, m - 1)])
    elif n == 4:
        for w in ("1", "y", "xy"):
            put(w, (0, 1))
        for w in ("1", "z", "w"):
            put(w, (1, 2))
        for w in ("y", "w", "xw"):
            put(w, (m - 1, 0))
        for i in range(2, m - 1):
            for w in ("x", "y", "w"):
                put(w, (i, i + 1))
    return c


# Corrections to printed tables, as (n, m-range) -> (cell overrides, note).
# A value of None empties the cell.  Each is the smallest change found for which
# the engine confirms the O m SR property; see the decisions ledger.
Z2_SMALL_REPAIRS = {
    (1, 5): ({(4, 3): ["x"], (4, 2): ["x"]}, "T[4,3]={x}, T[4,2]={x} (printed T[3,4]=T[4,3]={1} is a digon)"),
    (1, 6): ({(4, 3): ["x"], (3, 1): ["x"]}, "T[4,3]={x}, T[3,1]={x} (printed T[3,4]=T[4,3]={1} is a digon)"),
    (1, 7): ({(4, 3): ["x"], (3, 1): ["x"]}, "T[4,3]={x}, T[3,1]={x} (printed T[3,4]=T[4,3]={1} is a digon)"),
    (3, 4): ({(1, 0): ["z"]}, "T[1,0]={z} (printed table leaves part 1 with out-valency 1)"),
}


def _z2_small_repair(n: int, m: int):
    if n == 1 and 7 <= m <= 11:
        return Z2_SMALL_REPAIRS[(1, 7)]
    return Z2_SMALL_REPAIRS.get((n, m))


Z2_LARGE_M_OVERRIDES = {1: {(6, 0): "x"}, 2: {(6, 0): "x", (1, 2): "y"},
                        3: {(6, 0): "x", (1, 2): "y", (8, 3): "z"},
                        4: {(6, 0): "x", (1, 2): "y", (8, 3): "z", (4, 5): "w"}}


def z2_small_omsr(n: int, m: int, literal: bool = False) -> ConnectionSets:
    """Z2^n (1 <= n <= 4), m >= 3: printed tables for m <= 11, relabelled trivial-group walks beyond."""
    if not 1 <= n <= 4:
        raise ConstructionError("n must be in 1..4")
    if m < 3:
        raise ConstructionError("needs m >= 3")
    G = get_group(f"Z2^{n}" if n > 1 else "Z2")
    if m >= 12:
        cells = {ij: ["1"] for ij in _cycle_cells(m, trivial_walks(m))}
        for ij, w in Z2_LARGE_M_OVERRIDES[n].items():
            if ij not in cells:
                raise ConstructionError(f"cell {ij} is not an arc of the trivial digraph")
            cells[ij] = [w]
        return ConnectionSets.from_words(G, m, cells)
    cells = _z2_small_table(n, m)
    notes = ()
    repair = None if literal else _z2_small_repair(n, m)
    if repair:
        overrides, note = repair
        for ij, w in overrides.items():
            if w is None:
                cells.pop(ij, None)
            else:
                cells[ij] = w
        notes = (note,)
    return ConnectionSets.from_words(G, m, cells, notes)


# ------------------------------------------------ Z2^n with n >= 5

def z2_large_sets(n: int) -> tuple:
    """(S, R, T) in Z2^n with S = {1, x_i}, R = xS for x = x_1...x_n, and T of size n+1."""
    if n < 5:
        raise ConstructionError("needs n >= 5")
    G = get_group(f"Z2^{n}")
    xs = [1 << i for i in range(n)]
    x = (1 << n) - 1
    S = frozenset([0] + xs)
    R = frozenset(x ^ s for s in S)
    T = frozenset([xs[0] ^ xs[1] ^ xs[n - 3] ^ xs[n - 2], xs[0] ^ xs[1] ^ xs[n - 2] ^ xs[n - 1]]
                  + [xs[i] ^ xs[i + 1] for i in range(n - 1)])
    return S, R, T


def z2_large_identities(n: int) -> dict:
    G = get_group(f"Z2^{n}")
    S, R, T = z2_large_sets(n)
    SR, ST = set_product(G, S, R), set_product(G, S, T)
    return {"R=xS": R == frozenset(((1 << n) - 1) ^ s for s in S),
            "S2": len(set_product(G, S, S)), "R2": len(set_product(G, R, R)), "SR": len(SR),
            "ST": len(ST), "RT": len(set_product(G, R, T)),
            "ST_not_in_SR": not ST <= SR, "SR_not_in_ST": not SR <= ST,
            "expected_square": 1 + n + n * (n - 1) // 2, "expected_ST": n * n - n - 3}


def z2_large_o2sr(n: int) -> ConnectionSets:
    G = get_group(f"Z2^{n}")
    S, _, T = z2_large_sets(n)
    return bicay(G, (), (), S, T)


def z2_large_omsr(n: int, m: int) -> ConnectionSets:
    if m < 3:
        raise ConstructionError("needs m >= 3")
    G = get_group(f"Z2^{n}")
    S, R, T = z2_large_sets(n)
    cells = {}
    for i in range(m):
        cells[(i, (i + 1) % m)] = S
        if i != 1:
            cells[(i, (i - 1) % m)] = R
    cells[(1, 0)] = T
    return ConnectionSets(G, m, cells)


# ----------------------------------------- generalized dihedral groups

def _gd_input(H: FiniteGroup, R_H, a):
    if not H.is_abelian():
        raise ConstructionError("H must be abelian")
    if all(element_order(H, h) <= 2 for h in range(H.order)):
        raise ConstructionError("H must have exponent > 2")
    G = generalized_dihedral(H, name=f"GD({H.name})")
    R = _require_orr_input(G, R_H, a)
    return G, R


GD_O2SR_NOTE = "T11=R, the part-1 cell the arc counts are argued with; literal=True gives T11=R^-1"


def gendihedral_orr_o2sr(H: FiniteGroup, R_H, a: int, literal: bool = False) -> ConnectionSets:
    """BiCay(G, R, R, {1, a}, {a, b}) over G = GD(H); ``literal`` puts R^-1 in part 1."""
    G, R = _gd_input(H, R_H, a)
    b = G.generator_labels["b"]
    if literal:
        return bicay(G, R, _inv(G, R), {G.identity, a}, {a, b})
    return bicay(G, R, R, {G.identity, a}, {a, b}, (GD_O2SR_NOTE,))


def gendihedral_orr_omsr(H: FiniteGroup, R_H, a: int, m: int) -> ConnectionSets:
    if m < 3:
        raise ConstructionError("needs m >= 3")
    G, R = _gd_input(H, R_H, a)
    b = G.generator_labels["b"]
    one = G.identity
    cells = {}
    for i in range(m):
        cells[(i, i)] = set(R) if i in (0, 1, m - 1) else set(_inv(G, R))
        if i != 1:
            cells[(i, (i - 1) % m)] = {one}
        if i not in (0, m - 2, m - 1):
            cells[(i, i + 1)] = {a}
    cells[(1, 0)] = {a}
    cells[(0, 1)] = {one}
    cells[(m - 2, m - 1)] = {b}
    cells[(m - 1, 0)] = {int(G.inv[a])}
    return ConnectionSets(G, m, cells)


def gendihedral_orr(H: FiniteGroup, R_H, a: int, m: int, literal: bool = False) -> ConnectionSets:
    return gendihedral_orr_o2sr(H, R_H, a, literal) if m == 2 else gendihedral_orr_omsr(H, R_H, a, m)


def claim_gendihedral(H: FiniteGroup, R_H, a: int, m: int, literal: bool = False) -> ClaimReport:
    G, R = _gd_input(H, R_H, a)
    k = triple_count(G, R)
    if m == 2:
        T = gendihedral_orr_o2sr(H, R_H, a, literal)
        sq = int(G.mul[a, a]) in R
        expected = {0: k + 4 if sq else k + 3, 1: k + 2 if sq else k + 1}
        return ClaimReport(k, out_neighbourhood_arcs(T), expected)
    T = gendihedral_orr_omsr(H, R_H, a, m)
    expected = {i: k for i in range(m)}
    if m == 3:
        expected[0], expected[1] = k + 2, k + 1
    else:
        expected[0], expected[1] = k + 1, k + 2
    return ClaimReport(k, out_neighbourhood_arcs(T), expected)


# (R, L) word lists; families (1) and (2) print R = {x, xb}, which is not a subset of H
# and contains an involution.  The builder uses {x, xy} instead (see the ledger).
GD_NOORR_FAMILIES = {
    "Z4xZ2": (["x", "xy"], ["x", "x^-1y"], ["x", "xb"]),
    "Z3^2": (["x", "xy"], ["x", "x^-1y"], ["x", "xb"]),
    "Z4xZ2^2": (["x", "xy"], ["x", "x^-1yz"], None),
    "Z3xZ2^3": (["x", "xy", "xz", "xw"], ["x", "xz", "xzw", "x^-1yzw"], None),
    "Z4xZ2^3": (["x", "xy", "xz", "xw"], ["x", "xz", "xzw", "x^-1yzw"], None),
    "Z4xZ2^4": (["x", "xy", "xz", "xw", "xu"], ["x", "xz", "x^-1zw", "xyzw", "x^-1zwu"], None),
}

GD_SUBSTITUTION_NOTE = "R={x,xy} used in place of the printed R={x,xb}"


def _chain_template(G: FiniteGroup, m: int, R, L, link01, literal_note=()) -> ConnectionSets:
    """T00=R, T_ii=L, T10={x^-1}, T_{i,i+1}={1}, T_{i,i-1}={x}, with T01=link01.

    For m=2 the two parts are joined only by T01=link01 and T10={x^-1}.
    """
    x = G.word("x")
    xi, one = int(G.inv[x]), G.identity
    cells = {(0, 0): R}
    if m == 2:
        cells[(1, 1)] = L
        cells[(0, 1)] = link01
        cells[(1, 0)] = {xi}
        return ConnectionSets(G, m, cells, literal_note)
    for i in range(1, m):
        cells[(i, i)] = L
    for i in range(m):
        cells[(i, (i + 1) % m)] = {one}
        if i != 1:
            cells[(i, (i - 1) % m)] = {x}
    cells[(1, 0)] = {xi}
    cells[(0, 1)] = link01
    return ConnectionSets(G, m, cells, literal_note)


def gendihedral_noorr_omsr(H_name: str, m: int, literal: bool = False) -> ConnectionSets:
    """GD(H) for the six abelian H without an ORR, m >= 2."""
    H_name = _canonical_abelian(H_name, NO_ORR_ABELIAN)
    if m < 2:
        raise ConstructionError("needs m >= 2")
    G = get_group(f"GD({H_name})")
    R_words, L_words, printed_R = GD_NOORR_FAMILIES[H_name]
    notes = ()
    if not literal and m == 2 and f"GD({H_name})" in M2_FALLBACKS:
        return _m2_fallback(G, f"GD({H_name})")
    if literal and printed_R is not None:
        R_words = printed_R
    elif printed_R is not None:
        notes = (GD_SUBSTITUTION_NOTE,)
    R, L = G.subset(*R_words), G.subset(*L_words)
    return _chain_template(G, m, R, L, {G.generator_labels["b"]}, notes)


EXCEPTIONAL_FAMILIES = {
    1: (["x", "xy"], ["x", "x^-1y"]),
    4: (["x", "xy", "xz"], ["x", "x^-1y", "x^-1yz"]),
    5: (["x", "xy", "xz", "xw"], ["x", "x^-1y", "x^-1yz", "x^-1yzw"]),
    7: (["x", "xy", "xz", "xw", "xu"], ["x", "x^-1y", "x^-1yz", "x^-1yzw", "x^-1yzwu"]),
}
_EXCEPTIONAL_SHAPE = {1: 1, 2: 1, 3: 1, 8: 1, 4: 4, 9: 4, 10: 4, 5: 5, 6: 5, 11: 5, 7: 7}


def exceptional_sets(name: str) -> tuple:
    G = get_group(_exceptional_name(name))
    idx = EXCEPTIONAL.index(_exceptional_name(name)) + 1
    R_words, L_words = EXCEPTIONAL_FAMILIES[_EXCEPTIONAL_SHAPE[idx]]
    return G.subset(*R_words), G.subset(*L_words)


def _exceptional_name(name: str) -> str:
    if name in EXCEPTIONAL:
        return name
    i = info(name).exceptional_index
    if i is None:
        raise ConstructionError(f"{name} is not one of the eleven exceptional groups")
    return EXCEPTIONAL[i - 1]


# The printed R and L for these four groups contain involutions, so the
# template is never oriented.  These replacements keep the template and were
# found by a minimal-change search, checked for m = 2..6.
EXCEPTIONAL_SUBSTITUTES = {
    "H1": (["x", "y"], ["x", "y"]),
    "H2": (["x", "y", "xz"], ["x", "y", "xz"]),
    "H3": (["x", "y", "z"], ["x", "y", "xzx"]),
    "D4oD4": (["x", "z", "xw", "yz"], ["x", "z", "yxz", "yz"]),
}

# m = 2 tables for the two groups where the template has extra automorphisms;
# each is the first valency-3 witness (the template's valency) found by the search.
M2_FALLBACKS = {
    "Z4xZ2": {(0, 1): ["1", "y", "x"], (1, 0): ["xy", "x^2", "x^3y"]},
    "GD(Z4xZ2)": {(0, 1): ["1", "y", "x"], (1, 0): ["x", "x^2", "b"]},
}


def _m2_fallback(G: FiniteGroup, key: str) -> ConnectionSets:
    return ConnectionSets.from_words(G, 2, M2_FALLBACKS[key],
                                     (f"m=2 template has extra automorphisms; search witness used for {key}",))


def exceptional_omsr(name: str, m: int, literal: bool = False) -> ConnectionSets:
    """Chain template over one of the eleven groups without ORR (m >= 2)."""
    if m < 2:
        raise ConstructionError("needs m >= 2")
    key = _exceptional_name(name)
    G = get_group(key)
    if not literal and m == 2 and key in M2_FALLBACKS:
        return _m2_fallback(G, key)
    if not literal and key in EXCEPTIONAL_SUBSTITUTES:
        R_words, L_words = EXCEPTIONAL_SUBSTITUTES[key]
        note = (f"R={{{','.join(R_words)}}}, L={{{','.join(L_words)}}} used in place of the printed sets",)
        return _chain_template(G, m, G.subset(*R_words), G.subset(*L_words), {G.identity}, note)
    R, L = exceptional_sets(name)
    return _chain_template(G, m, R, L, {G.identity})


def _canonical_abelian(name: str, options) -> str:
    if name in options:
        return name
    inv = info(name).abelian_invariants
    for o in options:
        if info(o).abelian_invariants == inv:
            return o
    raise ConstructionError(f"{name} is not one of {', '.join(options)}")


def stated_valency(T: ConnectionSets, family: str, params: dict):
    """The valency a family promises, or None when it is not fixed in advance."""
    m = T.m
    if family == "trivial":
        return 2
    if family == "z2_small":
        return 3 if params.get("n") == 4 and m <= 11 else 2
    if family == "z2_large":
        n = params["n"]
        return n + 1 if m == 2 else 2 * n + 2
    r = len(T[0, 0])                # T00 = R in every diagonal-carrying family
    if family == "orr_lift":
        return r + 1 if m == 2 else r + 2
    if family == "gendihedral_orr":
        return r + 2
    if family == "gendihedral_noorr":
        r = len(GD_NOORR_FAMILIES[_canonical_abelian(params["H"], NO_ORR_ABELIAN)][0])
    if family == "exceptional":
        r = len(exceptional_sets(params["G"])[0])
    if family in ("gendihedral_noorr", "exceptional"):
        return r + 1 if m == 2 else r + 2
    return None


# ------------------------------------------------------ identifiers

FAMILIES = ("orr_lift", "trivial", "z2_small", "z2_large", "gendihedral_orr", "gendihedral_noorr", "exceptional")


@dataclass(frozen=True)
class ConstructionId:
    family: str
    params: dict = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str) -> "ConstructionId":
        """``family:key=value,...``; a value may be a brace list such as ``R={x,xy}``."""
        fam, _, rest = text.strip().partition(":")
        if fam not in FAMILIES:
            raise ConstructionError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
        params = {}
        for key, val in _split_params(rest):
            if key in ("m", "n"):
                params[key] = int(val)
            elif key == "R":
                params[key] = tuple(v for v in re.split(r"[;,\s]+", val.strip("{}")) if v)
            elif key == "literal":
                params[key] = val.lower() in ("1", "true", "yes")
            else:
                params[key] = val
        return cls(fam, params)

    def __str__(self):
        parts = []
        for k, v in self.params.items():
            if isinstance(v, tuple):
                v = "{" + ",".join(v) + "}" if len(v) > 1 else v[0]
            parts.append(f"{k}={v}")
        return f"{self.family}:{','.join(parts)}"


def _split_params(text: str):
    depth, cur, out = 0, "", []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    for item in out:
        key, eq, val = item.partition("=")
        if not eq:
            raise ConstructionError(f"parameter {item!r} needs key=value")
        yield key.strip(), val.strip()


def _orr_input(G: FiniteGroup, params: dict):
    if "R" in params:
        R = frozenset(G.word(w) for w in params["R"])
    else:
        from .search import find_orr
        cert = find_orr(G)
        if cert.kind != "orr_witness":
            raise ConstructionError(f"{G.name} has no ORR")
        R = cert.connection_sets[0, 0]
    a = G.word(params["a"]) if "a" in params else min(R, default=G.identity)
    return R, a


def construct(cid) -> ConnectionSets:
    if isinstance(cid, str):
        cid = ConstructionId.parse(cid)
    p = cid.params
    if "m" not in p:
        raise ConstructionError("parameter m is required")
    m = p["m"]
    lit = p.get("literal", False)
    fam = cid.family
    if fam == "trivial":
        return trivial_omsr(m, lit)
    if fam == "z2_small":
        return z2_small_omsr(p["n"], m, lit)
    if fam == "z2_large":
        return z2_large_o2sr(p["n"]) if m == 2 else z2_large_omsr(p["n"], m)
    if fam == "orr_lift":
        G = get_group(p["G"])
        R, a = _orr_input(G, p)
        if m == 1:
            return cayley(G, R)
        return orr_lift_o2sr(G, R, a) if m == 2 else orr_lift_omsr(G, R, a, m)
    if fam == "gendihedral_orr":
        H = get_group(p["H"])
        R, a = _orr_input(H, p)
        return gendihedral_orr(H, R, a, m, lit)
    if fam == "gendihedral_noorr":
        return gendihedral_noorr_omsr(p["H"], m, lit)
    if fam == "exceptional":
        return exceptional_omsr(p["G"], m, lit)
    raise ConstructionError(fam)


def claims(cid) -> ClaimReport:
    if isinstance(cid, str):
        cid = ConstructionId.parse(cid)
    p = cid.params
    if cid.family == "orr_lift":
        G = get_group(p["G"])
        R, a = _orr_input(G, p)
        return claim_orr_lift(G, R, a, p["m"])
    if cid.family == "gendihedral_orr":
        H = get_group(p["H"])
        R, a = _orr_input(H, p)
        return claim_gendihedral(H, R, a, p["m"], p.get("literal", False))
    raise ConstructionError(f"no arc-count claim for family {cid.family}")


# ------------------------------------------------------ theorem dispatch

@dataclass(frozen=True)
class DispatchVerdict:
    verdict: str                    # construction | no_omsr_by_theorem | out_of_catalog
    branch: int | None
    construction: ConstructionId | None = None
    reason: str = ""

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "branch": self.branch,
                "construction": str(self.construction) if self.construction else None,
                "reason": self.reason}


def theorem_dispatch(name: str, m: int) -> DispatchVerdict:
    """Which branch of the classification applies to (G, m), with a construction for branch 1."""
    if m < 1:
        raise ConstructionError("m must be positive")
    try:
        gi = info(name)
    except UnknownGroup:
        return DispatchVerdict("out_of_catalog", None, reason=f"{name} is not a catalog group")
    rank = gi.elementary_rank
    trivial = gi.order == 1
    if m == 1 and (gi.is_generalized_dihedral or gi.exceptional_index is not None):
        return DispatchVerdict("no_omsr_by_theorem", 2, reason="no ORR: generalized dihedral of order > 2 or exceptional")
    if m == 2 and (trivial or (rank is not None and rank <= 4)):
        return DispatchVerdict("no_omsr_by_theorem", 3, reason="m = 2 with Z1 or Z2^n, n <= 4")
    if 3 <= m <= 6 and trivial:
        return DispatchVerdict("no_omsr_by_theorem", 4, reason="trivial group with 3 <= m <= 6")

    def hit(family, **params):
        return DispatchVerdict("construction", 1, ConstructionId(family, {**params, "m": m}))

    if m == 1:
        return hit("orr_lift", G=name)
    if trivial:
        return hit("trivial")
    if rank is not None:
        return hit("z2_small", n=rank) if rank <= 4 else hit("z2_large", n=rank)
    if gi.exceptional_index is not None:
        return hit("exceptional", G=name)
    if gi.dihedral_base is not None:
        H = gi.dihedral_base
        if info(H).exceptional_index is not None:
            return hit("gendihedral_noorr", H=H)
        return hit("gendihedral_orr", H=H)
    return hit("orr_lift", G=name)
