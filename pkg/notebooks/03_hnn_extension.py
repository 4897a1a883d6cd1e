"""Removing the stable letter in the HNN extension and auditing the bounds.

Run: python3 notebooks/03_hnn_extension.py
"""

import random

from dehnlab.certificates import verify
from dehnlab.hnn import audit_gamma_t_bounds, decompose_gamma_t, random_trivial_word, t_eliminate_trace

rng = random.Random(20240601)
for _ in range(5):
    w = random_trivial_word(rng, 14)
    tr = t_eliminate_trace(w)
    c = decompose_gamma_t(w)
    print(f"{w:>16} -> {tr.u!r:24} steps={tr.steps:3d} factors={len(c.factors):4d} verified={verify(c)}")

rep = audit_gamma_t_bounds(14, samples=200)
print({k: v for k, v in rep.items() if k != "rows"})
