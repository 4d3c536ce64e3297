# The elliptic curve X_0(11) is congruent to an Eisenstein series mod 5,
# and the congruence refines mod 25 once a character of order 5 is allowed.
from sympy import primerange

from tame_eisenstein.modular_symbols import build_space, eisenstein_local, eta_product_x0_11, x0_11_demo

coeffs = eta_product_x0_11(30)
print("q-expansion of X_0(11):", coeffs[1:16])

# a_ell = 1 + ell mod 5 for every ell != 11
for ell in primerange(2, 30):
    if ell != 11:
        print(f"ell={ell:2d}  a_ell={coeffs[ell]:3d}  a_ell - 1 - ell = {coeffs[ell] - 1 - ell:4d}")

# mod 25 the Eisenstein pattern becomes chi(ell) + chi(ell)^-1 ell, chi(2) = 6
rows = x0_11_demo()
print("mod 25 holds for all ell <= 97:", all(r["mod25"] for r in rows.values()))

# the same numbers from weight-2 modular symbols, and the local Hecke algebra
space = build_space(11, 2)
rep = eisenstein_local(space, 5)
print("rank", rep.rank, "index 5^%d" % rep.index_exponent, "principal", rep.principal)
print("eigenvalues mod 25:", rep.eigen_map)
