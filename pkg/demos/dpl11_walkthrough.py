"""Build the n=11 code from GF(3^5) and look at it from a few sides."""

from leekit.gf import GaloisField
from leekit.lee import double_lee_sphere
from leekit.obstruct import counting_profile
from leekit.tiling import bijection_check, kernel_basis
from leekit.witness import DPL11_MODULUS, construct_dpl11, lift_to_code, verify_witness

F = GaloisField(3, DPL11_MODULUS)  # x^5 + 2x + 1
g = F.least_primitive_element()
print("primitive element:", g, "order", F.multiplicative_order(g))

w = construct_dpl11()  # the 22 eleventh powers of g, read additively
print("witness size:", len(w.T), "in", w.H)
print("conditions:", {k: c["ok"] for k, c in verify_witness(w).conditions.items()})

# squaring permutes T, so TT^(2) = T^2 and the identity shows up 22 times
prof = counting_profile(w, "TT2")
print("multiplicity classes of TT^(2):", prof.sizes())

phi = lift_to_code(w)
D = double_lee_sphere(11, 2)
print("double sphere points:", len(D), "bijective:", bijection_check(phi, D).ok)
L = kernel_basis(phi)
print("code lattice determinant:", L.determinant)
print("first basis rows:", L.basis[:3])
