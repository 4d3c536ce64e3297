# Completing the cuspidal Hecke algebra of weight 14, level 11 at the
# Eisenstein maximal ideal for p = 5. Takes several seconds.
import time

from tame_eisenstein.mazur_tate import xi_prime
from tame_eisenstein.modular_symbols import build_space, congruence_audit, eisenstein_local
from tame_eisenstein.tame_group_ring import TameContext

k, p, N = 14, 5, 11
start = time.perf_counter()
space = build_space(N, k)
print("modular symbols:", space.dim, "cuspidal:", space.cuspidal_dim)

rep = eisenstein_local(space, p)
print(f"done in {time.perf_counter() - start:.1f}s")
for key, value in rep.as_dict().items():
    print(f"  {key}: {value}")

ctx = TameContext(N, p, k=k)
print("xi' is a unit:", xi_prime(k, ctx) % p != 0)
audit = congruence_audit(rep, k, ctx)
print("a_ell = 1 + ell^13 + 5 (1 - ell^13) log(ell) alpha mod 25 for ell < 50:",
      all(r["passed"] for r in audit.values()))
