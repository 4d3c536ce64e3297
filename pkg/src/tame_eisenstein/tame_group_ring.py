"""The tame group ring Lambda = Z_p[X]/((1+X)^(p^nu) - 1) of the p-part of
(Z/N)^x, its square-zero quotient Lambda_1 = Z_p[X]/(X^2, p^nu X), and the
dual numbers Lambda_1 / p^nu.

Group elements are written in the X-power basis: [a] = (1+X)^log(a) where
log is the discrete logarithm to the smallest primitive root mod N, read
modulo p^nu.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import comb

from sympy import isprime, primitive_root

from .exact_arith import CycNumber, PrecisionError, default_precision, vp

__all__ = [
    "TameContext",
    "LambdaElt",
    "Lambda1Elt",
    "LambdaBar1Elt",
    "discrete_log",
    "group_element",
    "augmentation",
    "project_lambda1",
    "specialize_char",
    "diamond",
]


class TameContext:
    """Parameters (N, p) with nu = v_p(N - 1), a generator gamma of
    (Z/N)^x and a working precision M."""

    def __init__(self, N: int, p: int, M: int | None = None, gamma: int | None = None, k: int | None = None):
        if not (isprime(N) and isprime(p)):
            raise ValueError("N and p must be prime")
        if (N - 1) % p:
            raise ValueError(f"{p} does not divide {N} - 1")
        self.N = N
        self.p = p
        self.nu = vp(N - 1, p)
        self.gamma = primitive_root(N) if gamma is None else gamma
        if pow(self.gamma, (N - 1) // 2, N) == 1 or any(
            pow(self.gamma, (N - 1) // q, N) == 1 for q in _prime_factors(N - 1)
        ):
            raise ValueError(f"{self.gamma} is not a primitive root mod {N}")
        if M is None:
            M = default_precision(p, k, self.nu) if k is not None else 2 * self.nu + 4
        self.M = M

    @property
    def q(self) -> int:
        """Order p^nu of the p-part of (Z/N)^x."""
        return self.p ** self.nu

    @property
    def modulus(self) -> int:
        return self.p ** self.M

    @cached_property
    def _log_table(self):
        # walk the powers of gamma once; N is desk-sized
        table = {}
        x = 1
        for e in range(self.N - 1):
            table[x] = e
            x = x * self.gamma % self.N
        return table

    def full_log(self, a: int) -> int:
        """Exponent e in [0, N-1) with gamma^e = a mod N."""
        a %= self.N
        if a == 0:
            raise ValueError(f"{a} is not a unit mod {self.N}")
        return self._log_table[a]

    def log(self, a: int) -> int:
        return self.full_log(a) % self.q

    def with_gamma(self, gamma: int) -> "TameContext":
        return TameContext(self.N, self.p, self.M, gamma)

    def with_precision(self, M: int) -> "TameContext":
        return TameContext(self.N, self.p, M, self.gamma)

    def __repr__(self):
        return f"TameContext(N={self.N}, p={self.p}, nu={self.nu}, gamma={self.gamma}, M={self.M})"


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def discrete_log(a: int, ctx: TameContext) -> int:
    return ctx.log(a)


class LambdaElt:
    """Element of Lambda in the basis 1, X, ..., X^(q-1).

    Coefficients are exact rationals when ``exact`` is true, otherwise
    integers modulo p^M.
    """

    __slots__ = ("ctx", "coeffs", "exact")

    def __init__(self, ctx: TameContext, coeffs, exact: bool = False):
        self.ctx = ctx
        self.exact = exact
        q = ctx.q
        poly = list(coeffs)
        if len(poly) > q:
            poly = _reduce_mod_relation(poly, q)
        poly += [0] * (q - len(poly))
        if exact:
            self.coeffs = tuple(Fraction(c) for c in poly)
        else:
            mod = ctx.modulus
            self.coeffs = tuple(_to_residue(c, ctx.p, mod) for c in poly)

    @classmethod
    def one(cls, ctx, exact=False):
        return cls(ctx, [1], exact)

    @classmethod
    def X(cls, ctx, exact=False):
        return cls(ctx, [0, 1], exact)

    def _coerce(self, other):
        if isinstance(other, LambdaElt):
            if self.exact and not other.exact:
                return self.truncate(), other
            if other.exact and not self.exact:
                return self, other.truncate()
            return self, other
        return self, LambdaElt(self.ctx, [other], self.exact)

    def __add__(self, other):
        a, b = self._coerce(other)
        return LambdaElt(a.ctx, [x + y for x, y in zip(a.coeffs, b.coeffs)], a.exact)

    __radd__ = __add__

    def __neg__(self):
        return LambdaElt(self.ctx, [-c for c in self.coeffs], self.exact)

    def __sub__(self, other):
        a, b = self._coerce(other)
        return LambdaElt(a.ctx, [x - y for x, y in zip(a.coeffs, b.coeffs)], a.exact)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        prod = [0] * (2 * len(a.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        return LambdaElt(a.ctx, prod, a.exact)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = LambdaElt.one(self.ctx, self.exact)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, (LambdaElt, int, Fraction)):
            return NotImplemented
        a, b = self._coerce(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.exact))

    def truncate(self) -> "LambdaElt":
        """Reduce exact coefficients into Z/p^M (they must be p-integral)."""
        if not self.exact:
            return self
        return LambdaElt(self.ctx, self.coeffs, exact=False)

    def is_integral(self) -> bool:
        return all(c.denominator % self.ctx.p for c in map(Fraction, self.coeffs))

    def __repr__(self):
        terms = [f"{c}*X^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return "LambdaElt(" + (" + ".join(terms) or "0") + ")"


def _to_residue(c, p, mod):
    c = Fraction(c)
    if c.denominator % p == 0:
        raise PrecisionError(f"coefficient {c} is not {p}-integral")
    return c.numerator * pow(c.denominator, -1, mod) % mod


def _reduce_mod_relation(poly, q):
    """Reduce a polynomial modulo (1+X)^q - 1 = X^q + sum_{0<i<q} C(q,i) X^i."""
    poly = list(poly)
    tail = [comb(q, i) for i in range(1, q)]
    for d in range(len(poly) - 1, q - 1, -1):
        c = poly[d]
        if c:
            poly[d] = 0
            shift = d - q
            for i, b in enumerate(tail, start=1):
                poly[shift + i] -= c * b
    return poly[:q]


def group_element(a: int, ctx: TameContext, exact: bool = False) -> LambdaElt:
    e = ctx.log(a)
    return LambdaElt(ctx, [comb(e, i) for i in range(e + 1)], exact)


def from_group_basis(weights, ctx: TameContext, exact: bool = True) -> LambdaElt:
    """sum_e weights[e] (1+X)^e for e in 0..q-1."""
    q = ctx.q
    coeffs = [0] * q
    for e, w in enumerate(weights):
        if w:
            for i in range(e + 1):
                coeffs[i] += w * comb(e, i)
    return LambdaElt(ctx, coeffs, exact)


def augmentation(e: LambdaElt):
    return e.coeffs[0]


class _DualNumber:
    """a + bX with X^2 = 0, a mod p^Ma and b mod p^Mb."""

    __slots__ = ("p", "a_prec", "b_prec", "a", "b")

    def __init__(self, a, b, p, a_prec, b_prec):
        self.p = p
        self.a_prec = a_prec
        self.b_prec = b_prec
        self.a = _to_residue(a, p, p ** a_prec)
        self.b = _to_residue(b, p, p ** b_prec)

    def _make(self, a, b):
        return type(self)(a, b, self.p, self.a_prec, self.b_prec)

    def _coerce(self, other):
        if isinstance(other, _DualNumber):
            if (other.p, other.a_prec, other.b_prec) != (self.p, self.a_prec, self.b_prec):
                raise ValueError("incompatible dual-number rings")
            return other
        return self._make(other, 0)

    def __add__(self, other):
        o = self._coerce(other)
        return self._make(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return self._make(-self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        return self._make(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return self._make(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self._make(1, 0)
        for _ in range(e):
            result = result * self
        return result

    def inverse(self):
        if self.a % self.p == 0:
            raise PrecisionError("not a unit")
        ainv = pow(self.a, -1, self.p ** self.a_prec)
        return self._make(ainv, -self.b * ainv * ainv)

    def times_X(self):
        return self._make(0, self.a)

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (ValueError, TypeError, PrecisionError):
            return NotImplemented
        return (self.a, self.b) == (o.a, o.b)

    def __hash__(self):
        return hash((type(self).__name__, self.p, self.a_prec, self.b_prec, self.a, self.b))

    def __repr__(self):
        return f"{type(self).__name__}({self.a} + {self.b}*X; p={self.p}, {self.a_prec}/{self.b_prec})"


class Lambda1Elt(_DualNumber):
    """a + bX in Z_p[X]/(X^2, p^nu X): a mod p^M, b mod p^nu."""

    __slots__ = ()

    @classmethod
    def make(cls, a, b, ctx: TameContext):
        return cls(a, b, ctx.p, ctx.M, ctx.nu)

    def reduce_bar(self) -> "LambdaBar1Elt":
        return LambdaBar1Elt(self.a, self.b, self.p, self.b_prec, self.b_prec)


class LambdaBar1Elt(_DualNumber):
    """Dual numbers over Z/p^nu."""

    __slots__ = ()

    @classmethod
    def make(cls, a, b, ctx: TameContext):
        return cls(a, b, ctx.p, ctx.nu, ctx.nu)


def project_lambda1(e: LambdaElt) -> Lambda1Elt:
    ctx = e.ctx
    c0 = e.coeffs[0]
    c1 = e.coeffs[1] if len(e.coeffs) > 1 else 0
    return Lambda1Elt.make(c0, c1, ctx)


def diamond(a: int, ctx: TameContext) -> Lambda1Elt:
    return Lambda1Elt.make(1, ctx.log(a), ctx)


def specialize_char(e: LambdaElt, j: int, t: int = 1) -> CycNumber:
    """Evaluate at X = zeta_{p^j}^t - 1, i.e. at the character of level j
    sending gamma to zeta_{p^j}^t. Level 0 is the augmentation."""
    ctx = e.ctx
    if not 0 <= j <= ctx.nu:
        raise ValueError(f"level must lie in 0..{ctx.nu}")
    modulus = None if e.exact else ctx.modulus
    x = CycNumber.zeta(ctx.p, j, t, modulus) - 1
    result = CycNumber(ctx.p, j, [0], modulus)
    power = CycNumber(ctx.p, j, [1], modulus)
    for c in e.coeffs:
        if c:
            result = result + power * c
        power = power * x
    return result


def character_value(a: int, ctx: TameContext, j: int, t: int = 1, modulus=None) -> CycNumber:
    """chi(a) = zeta_{p^j}^(t log a) for the level-j character."""
    return CycNumber.zeta(ctx.p, j, t * ctx.full_log(a), modulus)
