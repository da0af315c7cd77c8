"""Finite groups stored as dense multiplication tables.

Elements are the integers ``0..order-1`` and the identity is always ``0``.
A product ``g*h`` is ``G.mul[g, h]``.  Subsets of a group (``ElementSet``) are
plain frozensets of indices.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

ElementSet = frozenset

# a word is a tuple of (generator label, +1 | -1)
Word = tuple


class GroupError(ValueError):
    pass


class CosetEnumerationOverflow(RuntimeError):
    """Raised when coset enumeration needs more rows than allowed."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mul: np.ndarray
    inv: np.ndarray
    generator_labels: dict
    name: str = ""
    display_names: tuple | None = None
    identity: int = 0

    def __post_init__(self):
        mul = np.asarray(self.mul, dtype=np.int64)
        n = mul.shape[0]
        if mul.shape != (n, n) or n < 1:
            raise GroupError("multiplication table must be square")
        mul.setflags(write=False)
        inv = np.asarray(self.inv, dtype=np.int64)
        inv.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "inv", inv)
        object.__setattr__(self, "generator_labels", dict(self.generator_labels))
        if self.display_names is None:
            object.__setattr__(self, "display_names", _shortest_words(mul, self.generator_labels))

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    @property
    def generators(self) -> tuple:
        """Distinct generator indices in label order (aliases collapsed)."""
        seen = []
        for g in self.generator_labels.values():
            if g not in seen:
                seen.append(g)
        return tuple(seen)

    def product(self, *elements: int) -> int:
        out = self.identity
        for g in elements:
            out = int(self.mul[out, g])
        return out

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = int(self.inv[g]), -k
        out = self.identity
        for _ in range(k):
            out = int(self.mul[out, g])
        return out

    def evaluate(self, word: Sequence) -> int:
        out = self.identity
        for label, sign in word:
            g = self.generator_labels[label]
            out = int(self.mul[out, g if sign > 0 else self.inv[g]])
        return out

    def word(self, text: str) -> int:
        """Element named by a word such as ``"x^-1yzw"`` or ``"(xy)^2"``."""
        return self.evaluate(parse_word(text, self.generator_labels))

    def subset(self, *words: str) -> frozenset:
        return frozenset(self.word(w) for w in words)

    def name_of(self, g: int) -> str:
        return self.display_names[g]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def relabeled(self, labels: dict, name: str | None = None) -> "FiniteGroup":
        """Same table with a new label -> element mapping."""
        return FiniteGroup(self.mul, self.inv, labels, name if name is not None else self.name)


def _shortest_words(mul: np.ndarray, labels: dict) -> tuple:
    """Breadth-first names for every element using the first label of each generator."""
    n = mul.shape[0]
    gens = []
    for lab, g in labels.items():
        if g not in [h for _, h in gens] and g != 0:
            gens.append((lab, g))
    names = [None] * n
    names[0] = "1"
    queue = deque([0])
    words = {0: []}
    while queue:
        e = queue.popleft()
        for lab, g in gens:
            f = int(mul[e, g])
            if names[f] is None:
                words[f] = words[e] + [lab]
                names[f] = _compress(words[f])
                queue.append(f)
    return tuple(nm if nm is not None else f"g{i}" for i, nm in enumerate(names))


def _compress(letters: list) -> str:
    out = []
    for lab, grp in itertools.groupby(letters):
        k = len(list(grp))
        out.append(lab if k == 1 else f"{lab}^{k}")
    return "".join(out)


# ---------------------------------------------------------------- words

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z][0-9]*)|(?P<num>-?\d+)|(?P<sym>[()^=,*]))")


def _tokens(text: str):
    text = text.replace("{", "(").replace("}", ")").replace("⁻¹", "^-1")
    pos = 0
    out = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise GroupError(f"cannot parse {text!r} at {pos}")
        if m.group("name"):
            out.append(("name", m.group("name")))
        elif m.group("num") is not None:
            out.append(("num", int(m.group("num"))))
        else:
            out.append(("sym", m.group("sym")))
        pos = m.end()
    return out


def _invert_word(w):
    return tuple((lab, -s) for lab, s in reversed(w))


class _WordParser:
    def __init__(self, tokens, labels):
        self.toks = tokens
        self.i = 0
        self.labels = labels

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def word(self):
        out = []
        while True:
            kind, val = self.peek()
            if kind == "name" or (kind == "sym" and val == "(") or (kind == "num" and val == 1):
                out.extend(self.term())
            else:
                return tuple(out)

    def term(self):
        base = self.atom()
        while self.peek() == ("sym", "^"):
            self.take()
            kind, val = self.peek()
            if kind == "num":
                self.take()
                base = base * val if val >= 0 else _invert_word(base) * (-val)
            elif kind == "sym" and val == "(":
                self.take()
                # exponent in brackets: either an integer or a conjugating word
                if self.peek()[0] == "num":
                    k = self.take()[1]
                    self._expect(")")
                    base = base * k if k >= 0 else _invert_word(base) * (-k)
                else:
                    c = self.word()
                    self._expect(")")
                    base = _invert_word(c) + base + c
            else:
                c = self.atom()
                base = _invert_word(c) + base + c
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "name":
            if val not in self.labels:
                raise GroupError(f"unknown generator {val!r}")
            return ((val, 1),)
        if kind == "num" and val == 1:
            return ()
        if kind == "sym" and val == "(":
            w = self.word()
            self._expect(")")
            return w
        raise GroupError(f"unexpected token {val!r}")

    def _expect(self, sym):
        if self.take() != ("sym", sym):
            raise GroupError(f"expected {sym!r}")


def parse_word(text: str, labels: Iterable[str]) -> tuple:
    """Parse a word into a tuple of ``(label, ±1)`` letters.

    ``a^b`` with a generator or bracketed word as exponent is the conjugate
    ``b^-1 a b``.
    """
    labels = set(labels)
    p = _WordParser(_tokens(text), labels)
    w = p.word()
    if p.i != len(p.toks):
        raise GroupError(f"trailing input in {text!r}")
    return w


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple

    @property
    def generator_count(self) -> int:
        return len(self.generators)

    @classmethod
    def parse(cls, generators: Sequence[str], text: str) -> "Presentation":
        """Relations separated by commas; ``a=b=c`` chains become ``ab^-1, bc^-1``."""
        rels = []
        for chunk in text.split(","):
            sides = [parse_word(s, generators) for s in chunk.split("=")]
            if len(sides) == 1:
                rels.append(sides[0])
            for a, b in zip(sides, sides[1:]):
                rels.append(a + _invert_word(b))
        return cls(tuple(generators), tuple(r for r in rels if r))


# ---------------------------------------------------------- constructors

def _from_table(mul, labels, name) -> FiniteGroup:
    mul = np.asarray(mul, dtype=np.int64)
    inv = np.argmax(mul == 0, axis=1)
    return FiniteGroup(mul, inv, labels, name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("n must be positive")
    a = np.arange(n)
    labels = {"x": 1} if n > 1 else {}
    return _from_table((a[:, None] + a[None, :]) % n, labels, f"Z{n}")


def elementary_abelian_2(n: int) -> FiniteGroup:
    """Z2^n with element index = bitmask; generators x1..xn (x,y,z,w when n <= 4)."""
    if n < 0:
        raise GroupError("n must be non-negative")
    a = np.arange(2 ** n)
    labels = {f"x{i + 1}": 1 << i for i in range(n)}
    if n <= 4:
        labels.update({s: 1 << i for i, s in enumerate("xyzw"[:n])})
    return _from_table(a[:, None] ^ a[None, :], labels, f"Z2^{n}" if n != 1 else "Z2")


def direct_product(A: FiniteGroup, B: FiniteGroup, labels: dict | None = None, name: str | None = None) -> FiniteGroup:
    """Element (a, b) has index ``a*|B| + b``.

    Generator labels default to ``A.<label>`` and ``B.<label>``; pass
    ``labels`` (new label -> (a, b) pair) to name them directly.
    """
    nb = B.order
    mul = A.mul[:, None, :, None] * nb + B.mul[None, :, None, :]
    mul = mul.reshape(A.order * nb, A.order * nb)
    if labels is None:
        labels = {f"A.{k}": (v, 0) for k, v in A.generator_labels.items()}
        labels.update({f"B.{k}": (0, v) for k, v in B.generator_labels.items()})
    lab = {k: a * nb + b for k, (a, b) in labels.items()}
    return _from_table(mul, lab, name or f"{A.name}x{B.name}")


def abelian(orders: Sequence[int], labels: Sequence[str], name: str | None = None) -> FiniteGroup:
    """Direct product of cyclic groups of the given orders, one label per factor."""
    G = cyclic(1)
    for k in orders:
        G = direct_product(G, cyclic(k), labels={})
    mul = G.mul
    idx = []
    for pos in range(len(orders)):
        coords = [0] * len(orders)
        coords[pos] = 1
        idx.append(_mixed_radix(coords, orders))
    lab = dict(zip(labels, idx))
    return _from_table(mul, lab, name or "x".join(f"Z{k}" for k in orders))


def _mixed_radix(coords, orders):
    out = 0
    for c, k in zip(coords, orders):
        out = out * k + c
    return out


def generalized_dihedral(H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """H ⋊ <b> with b acting by inversion; H keeps indices 0..|H|-1, h·b is ``|H| + h``."""
    if not H.is_abelian():
        raise GroupError("generalized dihedral groups need an abelian H")
    n = H.order
    h = np.arange(n)
    mul = np.empty((2 * n, 2 * n), dtype=np.int64)
    # (h1 b^e1)(h2 b^e2) = h1 * h2^((-1)^e1) * b^(e1+e2)
    for e1 in (0, 1):
        for e2 in (0, 1):
            right = h if e1 == 0 else H.inv[h]
            prod = H.mul[h[:, None], right[None, :]]
            mul[e1 * n:(e1 + 1) * n, e2 * n:(e2 + 1) * n] = prod + ((e1 + e2) % 2) * n
    labels = dict(H.generator_labels)
    labels["b"] = n
    return _from_table(mul, labels, name or f"GD({H.name})")


def quaternion() -> FiniteGroup:
    """Q8 from unit quaternion arithmetic, x = i and y = j."""
    # basis (1, i, j, k) with sign; element index = 2*basis + (sign < 0)
    table = {("1", b): (b, 1) for b in "1ijk"}
    table.update({(b, "1"): (b, 1) for b in "1ijk"})
    table.update({("i", "i"): ("1", -1), ("j", "j"): ("1", -1), ("k", "k"): ("1", -1),
                  ("i", "j"): ("k", 1), ("j", "k"): ("i", 1), ("k", "i"): ("j", 1),
                  ("j", "i"): ("k", -1), ("k", "j"): ("i", -1), ("i", "k"): ("j", -1)})
    basis = "1ijk"
    elems = [(b, s) for b in basis for s in (1, -1)]
    index = {e: t for t, e in enumerate(elems)}
    mul = np.zeros((8, 8), dtype=np.int64)
    for (a, sa), p in index.items():
        for (b, sb), q in index.items():
            c, sc = table[(a, b)]
            mul[p, q] = index[(c, sa * sb * sc)]
    return _from_table(mul, {"x": index[("i", 1)], "y": index[("j", 1)]}, "Q8")


def quotient(G: FiniteGroup, N: Iterable[int], labels: dict | None = None, name: str = "") -> FiniteGroup:
    """G/N for a normal subgroup N, cosets numbered by least representative."""
    N = sorted(set(int(x) for x in N))
    coset_of = -np.ones(G.order, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if coset_of[g] < 0:
            members = G.mul[g, N]
            if (coset_of[members] >= 0).any():
                raise GroupError("N is not a subgroup")
            coset_of[members] = len(reps)
            reps.append(g)
    k = len(reps)
    r = np.array(reps)
    mul = coset_of[G.mul[r[:, None], r[None, :]]]
    # normality: product must not depend on representatives
    for n0 in N:
        if not np.array_equal(coset_of[G.mul[G.mul[r, n0][:, None], r[None, :]]], mul):
            raise GroupError("N is not normal")
    lab = {k2: int(coset_of[v]) for k2, v in (labels or G.generator_labels).items()}
    return _from_table(mul, lab, name)


def dihedral_d4(labels=("x", "y")) -> FiniteGroup:
    """<x, y | x^4 = y^2 = 1, x^y = x^-1>, built as GD(Z4)."""
    D = generalized_dihedral(cyclic(4))
    return D.relabeled({labels[0]: 1, labels[1]: 4}, "D4")


def central_product_d4_d4() -> FiniteGroup:
    """(D4 x D4)/<(x^2, z^2)>; generators x, y from the first factor, z, w from the second."""
    A = dihedral_d4(("x", "y"))
    B = dihedral_d4(("z", "w"))
    P = direct_product(A, B, labels={"x": (A.word("x"), 0), "y": (A.word("y"), 0),
                                     "z": (0, B.word("z")), "w": (0, B.word("w"))})
    c = P.word("x^2z^2")
    return quotient(P, [0, c], name="D4oD4")


# ------------------------------------------------------ coset enumeration

def coset_enumerate(p: Presentation, order_bound: int, name: str = "") -> FiniteGroup:
    """HLT coset enumeration over the trivial subgroup.

    ``order_bound`` caps the number of live cosets; when the cap is hit a
    lookahead pass is tried before giving up with CosetEnumerationOverflow.
    """
    ngens = p.generator_count
    gidx = {g: k for k, g in enumerate(p.generators)}
    rels = [[2 * gidx[lab] + (0 if s > 0 else 1) for lab, s in r] for r in p.relators]
    ncols = 2 * ngens
    table = [[-1] * ncols]
    fwd = [0]
    live = [1]

    def rep(c):
        r = c
        while fwd[r] != r:
            r = fwd[r]
        while fwd[c] != r:
            fwd[c], c = r, fwd[c]
        return r

    def merge(a, b, queue):
        a, b = rep(a), rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        fwd[b] = a
        live[0] -= 1
        queue.append(b)

    def coincidence(a, b):
        queue = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(ncols):
                f = table[e][x]
                if f < 0:
                    continue
                if table[f][x ^ 1] == e:
                    table[f][x ^ 1] = -1
                e1, f1 = rep(e), rep(f)
                if table[e1][x] >= 0:
                    merge(f1, table[e1][x], queue)
                elif table[f1][x ^ 1] >= 0:
                    merge(e1, table[f1][x ^ 1], queue)
                else:
                    table[e1][x] = f1
                    table[f1][x ^ 1] = e1

    def define(c, x):
        if live[0] >= order_bound:
            lookahead()
            if live[0] >= order_bound or fwd[c] != c:
                raise CosetEnumerationOverflow(f"more than {order_bound} cosets needed")
        n = len(table)
        table.append([-1] * ncols)
        fwd.append(n)
        live[0] += 1
        table[c][x] = n
        table[n][x ^ 1] = c

    def scan(c, w, fill):
        f = b = c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            if not fill:
                return
            define(f, w[i])

    def lookahead():
        for c in range(len(table)):
            for w in rels:
                if fwd[c] != c:
                    break
                scan(c, w, False)

    c = 0
    while c < len(table):
        for w in rels:
            if fwd[c] != c:
                break
            scan(c, w, True)
        for x in range(ncols):
            if fwd[c] == c and table[c][x] < 0:
                define(c, x)
        c += 1

    alive = [c for c in range(len(table)) if fwd[c] == c]
    # renumber in breadth-first order from the trivial coset
    order = {0: 0}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in range(0, ncols, 2):
            d = rep(table[c][x])
            if d not in order:
                order[d] = len(order)
                queue.append(d)
    if len(order) != len(alive):
        raise GroupError("coset table is not connected")
    n = len(order)
    gen_perm = np.zeros((ngens, n), dtype=np.int64)
    for c, k in order.items():
        for g in range(ngens):
            gen_perm[g, k] = order[rep(table[c][2 * g])]
    return _group_from_regular_action(gen_perm, list(p.generators), name)


def _group_from_regular_action(gen_perm: np.ndarray, labels: list, name: str) -> FiniteGroup:
    """Build the table from generator permutations of a regular right action on 0..n-1."""
    ngens, n = gen_perm.shape
    perms = {0: np.arange(n)}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for g in range(ngens):
            d = int(gen_perm[g, c])
            if d not in perms:
                perms[d] = gen_perm[g][perms[c]]
                queue.append(d)
    P = np.array([perms[k] for k in range(n)])
    # element d is the one taking 0 to d; c*d = image of c under d
    mul = P.T.copy()
    lab = {l: int(gen_perm[g, 0]) for g, l in enumerate(labels)}
    return _from_table(mul, lab, name)


# ------------------------------------------------------------ operations

def element_order(G: FiniteGroup, g: int) -> int:
    k, h = 1, g
    while h != G.identity:
        h = int(G.mul[h, g])
        k += 1
    return k


def exponent(G: FiniteGroup) -> int:
    return math.lcm(*(element_order(G, g) for g in range(G.order)))


def set_product(G: FiniteGroup, A: Iterable[int], B: Iterable[int]) -> frozenset:
    A, B = list(A), list(B)
    if not A or not B:
        return frozenset()
    return frozenset(int(v) for v in np.unique(G.mul[np.ix_(A, B)]))


def set_inverse(G: FiniteGroup, A: Iterable[int]) -> frozenset:
    return frozenset(int(G.inv[a]) for a in A)


def center(G: FiniteGroup) -> frozenset:
    return frozenset(int(g) for g in range(G.order) if np.array_equal(G.mul[g], G.mul[:, g]))


def closure(G: FiniteGroup, gens: Iterable[int]) -> frozenset:
    seen = {G.identity}
    queue = deque([G.identity])
    gens = list(gens)
    while queue:
        e = queue.popleft()
        for s in gens:
            f = int(G.mul[e, s])
            if f not in seen:
                seen.add(f)
                queue.append(f)
    return frozenset(seen)


def is_associative(G: FiniteGroup) -> bool:
    M = G.mul
    a = np.arange(G.order)
    left = M[M[:, :, None], a[None, None, :]]   # (ab)c
    right = M[a[:, None, None], M[None, :, :]]  # a(bc)
    return bool(np.array_equal(left, right))


def check_group_axioms(G: FiniteGroup) -> None:
    n = G.order
    a = np.arange(n)
    if not (np.array_equal(G.mul[0], a) and np.array_equal(G.mul[:, 0], a)):
        raise GroupError("0 is not the identity")
    if not (np.all(G.mul[a, G.inv] == 0) and np.all(G.mul[G.inv, a] == 0)):
        raise GroupError("inverse table is wrong")
    if not is_associative(G):
        raise GroupError("not associative")
    if len(closure(G, G.generators)) != n:
        raise GroupError("generators do not generate the group")


def _generating_subset(G: FiniteGroup) -> list:
    gens = []
    span = frozenset([G.identity])
    for g in G.generators:
        if g not in span:
            gens.append(g)
            span = closure(G, gens)
    if len(span) != G.order:
        raise GroupError("generators do not generate the group")
    return gens


def automorphism_table(G: FiniteGroup, bound: int = 32) -> np.ndarray:
    """All automorphisms of G as rows of an (|Aut G|, |G|) array.

    Brute force over images of a generating set, keeping the assignments that
    extend to a bijective homomorphism.
    """
    if G.order > bound:
        raise GroupError(f"group order {G.order} exceeds the automorphism bound {bound}")
    n = G.order
    gens = _generating_subset(G)
    if not gens:
        return np.zeros((1, n), dtype=np.int64)
    orders = np.array([element_order(G, g) for g in range(n)])
    choices = [np.flatnonzero(orders == orders[g]) for g in gens]
    images = np.array(list(itertools.product(*choices)), dtype=np.int64)
    # spanning tree of the Cayley graph: element -> (parent, generator slot)
    parent = {0: None}
    seq = []
    queue = deque([0])
    while queue:
        e = queue.popleft()
        for k, s in enumerate(gens):
            f = int(G.mul[e, s])
            if f not in parent:
                parent[f] = (e, k)
                seq.append((f, e, k))
                queue.append(f)
    phi = np.zeros((len(images), n), dtype=np.int64)
    for f, e, k in seq:
        phi[:, f] = G.mul[phi[:, e], images[:, k]]
    ok = np.ones(len(images), dtype=bool)
    for k, s in enumerate(gens):
        ok &= np.all(phi[:, G.mul[:, s]] == G.mul[phi, images[:, k][:, None]], axis=1)
    ok &= np.all(np.sort(phi, axis=1) == np.arange(n), axis=1)
    return phi[ok]


def group_automorphisms(G: FiniteGroup, bound: int = 32):
    from .perm import PermGroup

    table = automorphism_table(G, bound)
    return PermGroup.from_elements(G.order, [tuple(int(v) for v in row) for row in table])


def apply_automorphism(G: FiniteGroup, alpha: Sequence[int], A: Iterable[int]) -> frozenset:
    return frozenset(int(alpha[a]) for a in A)
