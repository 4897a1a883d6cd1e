"""Word problem and relator certificates in the Grigorchuk group.

Run: python3 notebooks/01_grigorchuk_certificates.py
"""

from dehnlab.certificates import cost_f1_bound, cost_f2, h_star_tuple, verify
from dehnlab.diagrams import fold, from_certificate
from dehnlab.grigorchuk import decompose, decompose_R, is_trivial_gamma, psi0, rewrite_to_H
from dehnlab.words import sigma, sigma_power

# The solver splits a word into its two subtree components and recurses.
for w in ("bcd", "abab", "ad" * 4, "ac" * 8, "ac" * 4):
    print(f"{w:>18}  trivial={is_trivial_gamma(w)}")

# The component map on the generators of the index-two subgroup.
for t in ("b", "c", "d", "aba", "aca", "ada", "aa"):
    print(f"psi0({t}) = {psi0(((t, 1),))}")
for g in "abcd":
    print(f"psi0(sigma({g})) = {psi0(rewrite_to_H(sigma(g)))}")

# Certificates: products of conjugated relators, with relator heights.
for w in ("ac" * 8, "acab" * 8, sigma_power("adacac" * 4, 2)):
    c = decompose(w)
    r = decompose_R(w)
    print(
        f"|w|={len(w):4d} factors={cost_f2(c):4d} heights={h_star_tuple(c)} "
        f"f1 bound={cost_f1_bound(c):5d} over R: {cost_f2(r)} factors, verified={verify(c) and verify(r)}"
    )

# The folded diagram of a certificate.
d = fold(from_certificate(decompose_R("acaaca")))
print("folded diagram of acaaca:", d.counts())
