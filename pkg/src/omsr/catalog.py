"""Named groups: "Z1", "Z7", "Z2^4", "Z4xZ2^2", "Q8", "H1", "D4oD4", "GD(Z3^2)", ...

Abelian products get generator labels x, y, z, w, u in factor order (x1..xk
beyond five factors).  Elementary abelian 2-groups written ``Z2^n`` use the
bitmask representation of ``elementary_abelian_2``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .groups import (FiniteGroup, GroupError, Presentation, abelian, central_product_d4_d4,
                     coset_enumerate, cyclic, elementary_abelian_2, generalized_dihedral, quaternion)

PRESENTATIONS = {
    "H1": ("xy", "x^4=y^4=(xy)^2=(xy^-1)^2=1", 16),
    "H2": ("xyz", "x^4=y^4=z^4=(yx)^2=(yx^-1)^2=(yz)^2=(yz^-1)^2=1, x^2=y^2=z^2, x^z=x^-1", 16),
    "H3": ("xyz", "x^4=y^4=z^4=(xy)^2=(xy^-1)^2=(xz)^2=(xz^-1)^2=(yz)^2=(yz^-1)^2=x^2y^2z^2=1", 32),
}

# the eleven groups without an oriented regular representation outside the
# generalized dihedral family, in the order used by the constructions
EXCEPTIONAL = ("Z4xZ2", "Q8", "Z3^2", "Z4xZ2^2", "Z3xZ2^3", "Z4xZ2^3", "Z4xZ2^4",
               "H1", "H2", "H3", "D4oD4")

# abelian H whose generalized dihedral group needs the second construction
NO_ORR_ABELIAN = ("Z4xZ2", "Z3^2", "Z4xZ2^2", "Z3xZ2^3", "Z4xZ2^3", "Z4xZ2^4")

LABELS = "xyzwu"


class UnknownGroup(KeyError):
    pass


def _factors(name: str):
    """'Z4xZ2^2' -> [4, 2, 2]; None if the name is not an abelian product."""
    parts = name.split("x")
    out = []
    for p in parts:
        m = re.fullmatch(r"Z(\d+)(?:\^(\d+))?", p)
        if not m:
            return None
        out += [int(m.group(1))] * int(m.group(2) or 1)
    return out


def primary_invariants(orders) -> tuple:
    """Sorted prime-power decomposition of a product of cyclic groups."""
    out = []
    for k in orders:
        p = 2
        while k > 1:
            if k % p == 0:
                q = 1
                while k % p == 0:
                    k //= p
                    q *= p
                out.append(q)
            p += 1
    return tuple(sorted(out, reverse=True))


@dataclass(frozen=True)
class GroupInfo:
    """What the theorem dispatcher needs to know about a catalog name."""
    name: str
    order: int
    kind: str                       # cyclic | elem_abelian_2 | direct_product | gen_dihedral | presentation | central_product | quaternion
    abelian_invariants: tuple | None
    dihedral_base: str | None = None

    @property
    def elementary_rank(self):
        inv = self.abelian_invariants
        if inv is not None and all(q == 2 for q in inv):
            return len(inv)
        return None

    @property
    def exceptional_index(self):
        for k, nm in enumerate(EXCEPTIONAL):
            if self._same(nm):
                return k + 1
        return None

    def _same(self, other: str) -> bool:
        if self.name == other:
            return True
        f = _factors(other)
        return f is not None and self.abelian_invariants == primary_invariants(f) and self.dihedral_base is None

    @property
    def is_generalized_dihedral(self) -> bool:
        """Generalized dihedral of order > 2 (this includes Z2^n for n >= 2)."""
        if self.dihedral_base is not None:
            return self.order > 2
        r = self.elementary_rank
        return r is not None and r >= 2


def info(name: str) -> GroupInfo:
    name = name.strip()
    m = re.fullmatch(r"GD\((.+)\)", name)
    if m:
        H = info(m.group(1))
        if H.abelian_invariants is None:
            raise UnknownGroup(name)
        if H.elementary_rank is not None:
            r = H.elementary_rank + 1
            return GroupInfo(name, 2 * H.order, "gen_dihedral", (2,) * r, m.group(1))
        return GroupInfo(name, 2 * H.order, "gen_dihedral", None, m.group(1))
    f = _factors(name)
    if f is not None:
        inv = primary_invariants(f)
        order = 1
        for k in f:
            order *= k
        kind = "cyclic" if len(f) == 1 and not re.search(r"\^", name) else "direct_product"
        if all(k == 2 for k in f) or order == 1:
            kind = "elem_abelian_2" if order > 1 else "cyclic"
        return GroupInfo(name, order, kind, inv)
    if name == "Q8":
        return GroupInfo(name, 8, "quaternion", None)
    if name in PRESENTATIONS:
        return GroupInfo(name, PRESENTATIONS[name][2], "presentation", None)
    if name == "D4oD4":
        return GroupInfo(name, 32, "central_product", None)
    raise UnknownGroup(name)


@lru_cache(maxsize=None)
def get_group(name: str) -> FiniteGroup:
    name = name.strip()
    m = re.fullmatch(r"GD\((.+)\)", name)
    if m:
        H = get_group(m.group(1))
        return generalized_dihedral(H, name=name)
    f = _factors(name)
    if f is not None:
        if all(k == 2 for k in f):
            G = elementary_abelian_2(len(f))
            return G.relabeled(G.generator_labels, name)
        if len(f) == 1:
            G = cyclic(f[0])
            return G.relabeled(G.generator_labels, name)
        labels = list(LABELS) if len(f) <= len(LABELS) else [f"x{i + 1}" for i in range(len(f))]
        return abelian(f, labels[:len(f)], name=name)
    if name == "Q8":
        return quaternion()
    if name in PRESENTATIONS:
        gens, rels, order = PRESENTATIONS[name]
        return coset_enumerate(Presentation.parse(list(gens), rels), 4 * order, name=name)
    if name == "D4oD4":
        return central_product_d4_d4()
    raise UnknownGroup(name)


def load_catalog(path=None) -> list:
    """Catalog entries ``{name, kind, parameters, relators?}``."""
    if path is None:
        text = resources.files("omsr").joinpath("catalog.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


def catalog_names(path=None) -> list:
    return [e["name"] for e in load_catalog(path)]


def group_from_entry(entry: dict) -> FiniteGroup:
    """Build a group from one catalog record (relators are used for presentations)."""
    if entry.get("kind") == "presentation" and "relators" in entry:
        gens = entry["parameters"]["generators"]
        order = entry["parameters"]["order"]
        return coset_enumerate(Presentation.parse(list(gens), ", ".join(entry["relators"])),
                               4 * order, name=entry["name"])
    return get_group(entry["name"])
