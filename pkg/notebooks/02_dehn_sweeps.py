"""Exact areas and Dehn-function sweeps on small presentations.

Run: python3 notebooks/02_dehn_sweeps.py
"""

from dehnlab.estimator import NoCertWithin, dehn_sweep, growth_fit, l2_search
from dehnlab.presentations import builtin

ex21, ex23 = builtin("ex21"), builtin("ex23")

# Free abelian group of rank two: commutators [a^i, b^j] need j faces.
for i in range(1, 4):
    for j in range(1, 4):
        w = "a" * i + "b" * j + "A" * i + "B" * j
        r = l2_search(ex21, w, j + 1)
        print(f"L2({w}) = {r.value}  (bound {r.conj_bound}, {r.states} states)")

# Trivial group given by a^i and a^i b^(k_i), K = (1, 2, 5): area 2 exactly on K.
for k in range(1, 6):
    try:
        print(f"b^{k}: {l2_search(ex23, 'b' * k, 2, k + 8).value} factors")
    except NoCertWithin:
        print(f"b^{k}: no certificate with 2 factors")

rows = dehn_sweep(ex21, 8)
for r in rows:
    print(r.as_dict())
print(growth_fit(rows))

rows = dehn_sweep(builtin("gamma1"), 5)
for r in rows:
    print(r.as_dict())
