"""Mazur-Tate elements in the tame group ring and the numbers derived from
them: the derivative xi', the starred variant, the Eisenstein constant
term, Merel's number, the extra-reducibility constant alpha and the
character chi_alpha, the predicted slope, the sum-of-logs criterion and
the reducible pseudo-trace.
"""
from __future__ import annotations

from fractions import Fraction

from .exact_arith import (
    CycNumber,
    PrecisionError,
    bernoulli_poly,
    require_admissible,
    vp,
    zeta_neg,
)
from .tame_group_ring import (
    Lambda1Elt,
    LambdaElt,
    TameContext,
    from_group_basis,
    project_lambda1,
    specialize_char,
)

__all__ = [
    "IntegralityError",
    "xi_mt",
    "xi_mt_exact",
    "xi_prime",
    "xi_prime_closed_sum",
    "xi_prime_intro_sum",
    "xi_mt_star",
    "xi_eis",
    "merel_number",
    "alpha",
    "chi_alpha",
    "predicted_slope",
    "sum_of_logs_criterion",
    "sum_of_logs_both",
    "reducible_pseudo_trace",
    "interpolate_factors",
]


class IntegralityError(ArithmeticError):
    pass


def _check(k, ctx, allow_weight_two=True):
    require_admissible(k, ctx.p, ctx.N, allow_weight_two=allow_weight_two)


def _bernoulli_weights(k, ctx):
    """Group-basis weights w_e = -(N^(k-1)/k) sum_{log a = e} B_k(a/N)."""
    N = ctx.N
    scale = -Fraction(N ** (k - 1), k)
    weights = [Fraction(0)] * ctx.q
    for a in range(1, N):
        weights[ctx.log(a)] += bernoulli_poly(k, Fraction(a, N))
    return [scale * w for w in weights]


def xi_mt_exact(k: int, ctx: TameContext) -> LambdaElt:
    """xi_MT with exact rational coefficients in the X-power basis."""
    _check(k, ctx)
    return from_group_basis(_bernoulli_weights(k, ctx), ctx, exact=True)


def xi_mt(k: int, ctx: TameContext) -> LambdaElt:
    """xi_MT reduced to Z/p^M; raises IntegralityError when a coefficient
    has negative p-adic valuation."""
    exact = xi_mt_exact(k, ctx)
    bad = [i for i, c in enumerate(exact.coeffs) if vp(c, ctx.p) < 0]
    if bad:
        raise IntegralityError(f"xi_MT coefficient(s) {bad} are not {ctx.p}-integral")
    return exact.truncate()


def xi_prime_closed_sum(k: int, ctx: TameContext) -> int:
    N = ctx.N
    total = sum(bernoulli_poly(k, Fraction(a, N)) * ctx.log(a) for a in range(1, N))
    value = -Fraction(N ** (k - 1), k) * total
    if vp(value, ctx.p) < 0:
        raise IntegralityError("xi' closed sum is not p-integral")
    q = ctx.q
    return value.numerator * pow(value.denominator, -1, q) % q


def xi_prime(k: int, ctx: TameContext) -> int:
    """X-coefficient of the image of xi_MT in Lambda_1, an element of Z/p^nu.

    Depends on the choice of gamma: replacing gamma by gamma^u scales it by
    u^(-1).
    """
    via_lambda = project_lambda1(xi_mt(k, ctx)).b
    via_sum = xi_prime_closed_sum(k, ctx)
    if via_lambda != via_sum:
        raise ArithmeticError(f"xi' disagreement: {via_lambda} vs {via_sum}")
    return via_lambda


def xi_prime_intro_sum(k: int, ctx: TameContext) -> int:
    """(1/k) sum_{i=1}^{N-1} B_k(i) log(i) mod p^nu, kept for comparison
    with xi_prime; not used elsewhere."""
    total = sum(bernoulli_poly(k, i) * ctx.log(i) for i in range(1, ctx.N)) / k
    q = ctx.q
    return total.numerator * pow(total.denominator, -1, q) % q


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    for d in range(len(a) - len(b), -1, -1):
        c = a[d + len(b) - 1] / lead
        q[d] = c
        for i, y in enumerate(b):
            a[d + i] -= c * y
    return q, a[: len(b) - 1]


def _cyclotomic(p, j):
    """Coefficients of Phi_{p^j}(T), low degree first."""
    if j == 0:
        return [Fraction(-1), Fraction(1)]
    step = p ** (j - 1)
    poly = [Fraction(0)] * (step * (p - 1) + 1)
    for i in range(p):
        poly[i * step] = Fraction(1)
    return poly


def interpolate_factors(values, ctx: TameContext) -> LambdaElt:
    """Chinese remainder across the factors of Q[T]/(T^q - 1), T = 1+X.

    ``values[j]`` is a CycNumber of level j. Returns the exact LambdaElt
    whose level-j specialization is values[j].
    """
    p, nu = ctx.p, ctx.nu
    q = ctx.q
    total = [Fraction(0)] * q
    for j in range(nu + 1):
        phi = _cyclotomic(p, j)
        modulus_poly = [Fraction(-1)] + [Fraction(0)] * (q - 1) + [Fraction(1)]
        cofactor, rem = _poly_divmod(modulus_poly, phi)
        assert not any(rem)
        # idempotent e_j = cofactor * (cofactor^-1 mod Phi)
        inv = CycNumber(p, j, cofactor).inverse()
        idem = _poly_mul(cofactor, list(inv.coeffs))
        term = _poly_mul(idem, list(values[j]._lift(j).coeffs))
        for e, c in enumerate(term):
            total[e % q] += c
    # now total is a polynomial in T; substitute T = 1 + X
    return from_group_basis(total, ctx, exact=True)


def xi_mt_star(k: int, ctx: TameContext) -> LambdaElt:
    """xi_MT with the trivial-character value replaced by
    zeta(1-k)(1-N^k); built factor by factor and truncated to Z/p^M."""
    _check(k, ctx)
    exact = xi_mt_exact(k, ctx)
    N = ctx.N
    values = [CycNumber.from_rat(zeta_neg(k) * (1 - N ** k), ctx.p, 0)]
    for j in range(1, ctx.nu + 1):
        values.append(specialize_char(exact, j))
    star = interpolate_factors(values, ctx)
    if not star.is_integral():
        raise IntegralityError("xi*_MT is not integral")
    return star.truncate()


def xi_eis(k: int, ctx: TameContext) -> Lambda1Elt:
    """(1/2)(zeta(1-k)(1 - N^(k/2)) + xi' X) in Lambda_1."""
    _check(k, ctx)
    const = zeta_neg(k) * (1 - ctx.N ** (k // 2)) / 2
    b = xi_prime(k, ctx) * pow(2, -1, ctx.q)
    return Lambda1Elt.make(const, b, ctx)


def merel_number(N: int, p: int, ctx: TameContext | None = None) -> int:
    if ctx is None:
        ctx = TameContext(N, p)
    return sum(i * ctx.log(i) for i in range(1, (N - 1) // 2 + 1)) % p


def _eis_exponent(k, ctx):
    return ctx.nu + vp(k, ctx.p)


def alpha(k: int, ctx: TameContext) -> int:
    """alpha = xi'^-1 zeta(1-k)(1 - N^(k/2)) / p^(nu + v_p(k)) in Z/p^nu."""
    _check(k, ctx)
    xp = xi_prime(k, ctx)
    if xp % ctx.p == 0:
        raise PrecisionError("xi' is not a unit, alpha is undefined")
    e = _eis_exponent(k, ctx)
    value = zeta_neg(k) * (1 - ctx.N ** (k // 2))
    if vp(value, ctx.p) < e:
        raise ArithmeticError("constant term has smaller valuation than expected")
    reduced = value / ctx.p ** e
    q = ctx.q
    r = reduced.numerator * pow(reduced.denominator, -1, q) % q
    return r * pow(xp, -1, q) % q


def chi_alpha(a: int, k: int, ctx: TameContext) -> int:
    """1 + p^(nu + v_p(k)) alpha log(a), modulo p^(2 nu + v_p(k))."""
    e = _eis_exponent(k, ctx)
    mod = ctx.p ** (e + ctx.nu)
    return (1 + ctx.p ** e * alpha(k, ctx) * ctx.log(a)) % mod


def predicted_slope(k: int, ctx: TameContext):
    """The point [(1-k) xi' : k zeta(1-k)] of P^1(F_p), normalized to
    (1, t) or (0, 1). Depends on gamma through xi'."""
    p = ctx.p
    if ctx.nu != 1 or vp(k, p) or vp(1 - k, p):
        raise ValueError("predicted slope needs nu = 1 and k, 1-k prime to p")
    xp = xi_prime(k, ctx)
    if xp % p == 0:
        raise ValueError("predicted slope needs xi' to be a unit")
    z = zeta_neg(k)
    x0 = (1 - k) * xp % p
    x1 = k * z.numerator * pow(z.denominator, -1, p) % p
    if x0 == 0:
        return (0, 1)
    return (1, x1 * pow(x0, -1, p) % p)


def _sum_of_logs(k, ctx, exponent):
    p, N = ctx.p, ctx.N
    zeta_p = pow(ctx.gamma, (N - 1) // p, N)
    total = 0
    for i in range(1, p):
        total += pow(i, exponent % (p - 1), p) * ctx.log(1 - pow(zeta_p, i, N))
    return total % p


def sum_of_logs_criterion(k: int, ctx: TameContext) -> int:
    """sum_{i=1}^{p-1} i^(k-2) log(1 - zeta_p^i) mod p, zeta_p = gamma^((N-1)/p)."""
    return _sum_of_logs(k, ctx, k - 2)


def sum_of_logs_both(k: int, ctx: TameContext) -> dict:
    """Both exponent conventions, k-2 and 2-k."""
    return {"k-2": _sum_of_logs(k, ctx, k - 2), "2-k": _sum_of_logs(k, ctx, 2 - k)}


def reducible_pseudo_trace(ell: int, k: int, ctx: TameContext) -> Lambda1Elt:
    """ell^(k-1) <ell>^-1 + <ell> = 1 + ell^(k-1) + (1 - ell^(k-1)) log(ell) X."""
    if ell % ctx.N == 0:
        raise ValueError("ell must differ from N")
    lk = ell ** (k - 1)
    return Lambda1Elt.make(1 + lk, (1 - lk) * ctx.log(ell), ctx)
