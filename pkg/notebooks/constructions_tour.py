# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Building and verifying OmSR tables
#
# Each construction family returns a `ConnectionSets` table.  `check_omsr`
# builds the m-Cayley digraph and compares its full automorphism group with
# the right translations.

# +
from omsr.automorphisms import check_omsr
from omsr.constructions import construct, theorem_dispatch

for text in ["trivial:m=9", "z2_small:n=3,m=6", "z2_large:n=5,m=2", "exceptional:G=Q8,m=3",
             "gendihedral_noorr:H=Z3^2,m=4"]:
    T = construct(text)
    v = check_omsr(T.group, T)
    print(f"{text:36s} vertices={T.m * T.group.order:4d} valency={v.valency} |Aut|={v.aut_order} omsr={v.is_omsr}")
# -

# ## Which branch applies
#
# The dispatcher names a construction or the reason no table exists.

# +
for name, m in [("Z1", 4), ("Z2^4", 2), ("Q8", 1), ("Q8", 3), ("GD(Z5)", 2), ("Z2^6", 7)]:
    print(name, m, theorem_dispatch(name, m).to_json())
# -

# ## Repaired tables
#
# Some printed tables are not oriented.  `literal=True` reproduces them as
# printed; the default carries a repair, noted on the table.

# +
from omsr.mcayley import validate

for text in ["trivial:m=7", "z2_small:n=1,m=5", "exceptional:G=H1,m=3"]:
    fixed = construct(text)
    raw = construct(text + ",literal=true")
    print(text, "printed oriented:", validate(raw).oriented, "repaired omsr:", check_omsr(fixed.group, fixed).is_omsr)
    print("   notes:", fixed.notes)
# -
