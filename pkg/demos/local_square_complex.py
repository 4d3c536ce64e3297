# The (1, 2, 1) square complex at N: cohomology mod p^M, annihilators and
# the regulator at each character.
from tame_eisenstein.homalg import (
    annihilator,
    characters,
    cohomology,
    local_square_complex,
    regulator_square,
    simple_complex_shape,
)
from tame_eisenstein.tame_group_ring import TameContext

k, p, N = 14, 5, 11
ctx = TameContext(N, p, k=k)
exact = local_square_complex(k, ctx, exact=True)
C = local_square_complex(k, ctx)

for i, H in enumerate(cohomology(C)):
    ideal = annihilator(H, ctx, check_precision=True, C=exact)
    print(f"H^{i}: invariants {H.invariants}, annihilator index p^{ctx.q * ctx.M - ideal.log_size}, stable {ideal.stable}")

for j, t in characters(ctx):
    print(f"character level {j}, t = {t}: regulator {regulator_square(exact.specialize(j, t))}")

print(simple_complex_shape(k, ctx))
