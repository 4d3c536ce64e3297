# Mazur-Tate elements for the two fixture triples and the numbers read off
# from them.
from tame_eisenstein.homalg import characters
from tame_eisenstein.mazur_tate import alpha, merel_number, predicted_slope, xi_eis, xi_mt, xi_mt_exact, xi_prime
from tame_eisenstein.tame_group_ring import TameContext, specialize_char

for k, p, N in [(14, 5, 11), (10, 7, 29)]:
    ctx = TameContext(N, p, k=k)
    print(f"\n(k, p, N) = {(k, p, N)}  gamma = {ctx.gamma}  nu = {ctx.nu}  M = {ctx.M}")
    print("xi_MT in the basis X^i, mod p^M:", xi_mt(k, ctx).coeffs)
    print("xi' =", xi_prime(k, ctx), " Merel's sum =", merel_number(N, p, ctx))
    print("xi^Eis =", xi_eis(k, ctx), " alpha =", alpha(k, ctx))
    print("slope:", predicted_slope(k, ctx))

    # each character of p-power order picks out an L-value
    exact = xi_mt_exact(k, ctx)
    for j, t in characters(ctx):
        if t == 1:
            print(f"  level {j}: {specialize_char(exact, j, t)}")
