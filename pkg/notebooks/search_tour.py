# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Exhaustive searches
#
# `prove_nonexistence` walks every oriented regular table for (G, m), modulo
# the enabled reductions, and asks the engine whether each one has an
# automorphism beyond the right translations.

# +
import time

from omsr.catalog import get_group
from omsr.search import SearchSpace, find_omsr, find_orr, prove_nonexistence

for name, m in [("Z1", 5), ("Z2", 2), ("Z2^2", 2), ("Z2^3", 2)]:
    for reduce in (False, True):
        t0 = time.perf_counter()
        cert = prove_nonexistence(SearchSpace(get_group(name), m, None, reduce, reduce))
        print(f"{name:5s} m={m} reductions={reduce!s:5s} {cert.kind:12s} "
              f"candidates={cert.candidates_examined:5d} {time.perf_counter() - t0:.2f}s")
# -

# ## Smallest oriented regular representations

# +
for name in ["Z3", "Z5", "Z6", "Z2^2", "Q8", "GD(Z3)"]:
    cert = find_orr(get_group(name))
    R = cert.connection_sets
    print(name, cert.kind, R if R is None else sorted(R.group.name_of(r) for r in R[0, 0]))
# -

# ## Z2 with three parts
#
# Every oriented 2-regular digraph on six vertices has more than two
# automorphisms, so the search reports nonexistence here.

# +
print(find_omsr(get_group("Z2"), 3, valency_cap=2).dumps())
# -
