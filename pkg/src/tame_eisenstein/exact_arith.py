"""Exact scalars: rationals, Bernoulli numbers, L-values at negative
integers, p-adic valuations and truncations, prime-power cyclotomic fields.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from sympy import isprime

Rat = Fraction

__all__ = [
    "Rat",
    "PrecisionError",
    "AdmissibilityError",
    "bernoulli_number",
    "bernoulli_poly",
    "zeta_neg",
    "dirichlet_L_neg",
    "vp",
    "PadicTrunc",
    "CycNumber",
    "AdmissibilityReport",
    "admissible_triple",
    "require_admissible",
    "default_precision",
]


class PrecisionError(ArithmeticError):
    """Raised when a truncated computation would need a division by p."""


class AdmissibilityError(ValueError):
    def __init__(self, condition, message):
        super().__init__(message)
        self.condition = condition


_bernoulli_table = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli_number(k: int) -> Fraction:
    """B_k with B_1 = -1/2, from sum_{j<=k} C(k+1, j) B_j = 0."""
    if k < 0:
        raise ValueError("k must be non-negative")
    with _bernoulli_lock:
        table = _bernoulli_table
        for n in range(len(table), k + 1):
            s = sum(comb(n + 1, j) * table[j] for j in range(n))
            table.append(-s / (n + 1))
        return table[k]


def bernoulli_poly(k: int, x) -> Fraction:
    x = Fraction(x)
    return sum(comb(k, j) * bernoulli_number(j) * x ** (k - j) for j in range(k + 1))


def zeta_neg(k: int) -> Fraction:
    """zeta(1 - k) = -B_k / k for even k >= 2."""
    if k < 2 or k % 2:
        raise ValueError("zeta_neg needs an even k >= 2")
    return -bernoulli_number(k) / k


def vp(x, p: int):
    """p-adic valuation of a rational; math.inf for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def default_precision(p: int, k: int, nu: int) -> int:
    return 2 * nu + vp(k, p) + 4


@dataclass(frozen=True)
class PadicTrunc:
    """Residue class in Z/p^M."""

    prime: int
    precision: int
    value: int = 0

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def modulus(self) -> int:
        return self.prime ** self.precision

    @classmethod
    def from_rat(cls, x, p: int, M: int) -> "PadicTrunc":
        x = Fraction(x)
        if x.denominator % p == 0:
            raise PrecisionError(f"{x} is not {p}-integral")
        q = p ** M
        return cls(p, M, x.numerator * pow(x.denominator, -1, q))

    def _coerce(self, other):
        if isinstance(other, PadicTrunc):
            if other.prime != self.prime:
                raise ValueError("prime mismatch")
            if other.precision != self.precision:
                M = min(self.precision, other.precision)
                return PadicTrunc(self.prime, M, self.value), PadicTrunc(self.prime, M, other.value)
            return self, other
        return self, PadicTrunc.from_rat(other, self.prime, self.precision)

    def __add__(self, other):
        a, b = self._coerce(other)
        return PadicTrunc(a.prime, a.precision, a.value + b.value)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return PadicTrunc(a.prime, a.precision, a.value - b.value)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return PadicTrunc(a.prime, a.precision, b.value - a.value)

    def __mul__(self, other):
        a, b = self._coerce(other)
        return PadicTrunc(a.prime, a.precision, a.value * b.value)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicTrunc(self.prime, self.precision, -self.value)

    def inverse(self) -> "PadicTrunc":
        if self.value % self.prime == 0:
            raise PrecisionError("not a unit")
        return PadicTrunc(self.prime, self.precision, pow(self.value, -1, self.modulus))

    def __truediv__(self, other):
        a, b = self._coerce(other)
        return a * b.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicTrunc(self.prime, self.precision, pow(self.value, e, self.modulus))

    def __eq__(self, other):
        if isinstance(other, PadicTrunc):
            a, b = self._coerce(other)
            return a.value == b.value
        try:
            return self.value == PadicTrunc.from_rat(other, self.prime, self.precision).value
        except (PrecisionError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.prime, self.precision, self.value))

    def valuation(self):
        if self.value == 0:
            return math.inf
        return vp(self.value, self.prime)

    def is_zero(self) -> bool:
        return self.value == 0

    def reduce(self, M: int) -> "PadicTrunc":
        if M > self.precision:
            raise PrecisionError("cannot raise precision")
        return PadicTrunc(self.prime, M, self.value)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.prime}^{self.precision})"


def _phi(p: int, j: int) -> int:
    return 1 if j == 0 else p ** (j - 1) * (p - 1)


class CycNumber:
    """Element of Q(zeta_{p^j}), stored as a polynomial in T = zeta_{p^j}
    reduced modulo the cyclotomic polynomial Phi_{p^j}(T).

    With ``modulus`` set the coefficients are integers mod that modulus,
    i.e. the element lives in (Z/p^M)[T]/Phi_{p^j}.
    """

    __slots__ = ("p", "level", "coeffs", "modulus")

    def __init__(self, p: int, level: int, coeffs=(), modulus=None):
        self.p = p
        self.level = level
        self.modulus = modulus
        self.coeffs = self._reduce(list(coeffs))

    def _norm_coeff(self, c):
        if self.modulus is None:
            return Fraction(c)
        c = Fraction(c)
        if c.denominator % self.p == 0:
            raise PrecisionError("denominator divisible by p in truncated mode")
        return c.numerator * pow(c.denominator, -1, self.modulus) % self.modulus

    def _reduce(self, poly):
        p, j = self.p, self.level
        phi = _phi(p, j)
        order = 1 if j == 0 else p ** j
        zero = 0 if self.modulus is not None else Fraction(0)
        folded = [zero] * order
        for e, c in enumerate(poly):
            folded[e % order] += self._norm_coeff(c)
        out = folded[:phi]
        if j >= 1:
            step = p ** (j - 1)
            # T^(phi + r) = -sum_{i < p-1} T^(r + i*step)
            for r in range(step):
                c = folded[phi + r]
                if c:
                    for i in range(p - 1):
                        out[r + i * step] -= c
        if self.modulus is not None:
            out = [c % self.modulus for c in out]
        return tuple(out)

    @property
    def degree(self) -> int:
        return _phi(self.p, self.level)

    @classmethod
    def from_rat(cls, x, p: int, level: int = 0, modulus=None) -> "CycNumber":
        return cls(p, level, [x], modulus)

    @classmethod
    def zeta(cls, p: int, level: int, power: int = 1, modulus=None) -> "CycNumber":
        """zeta_{p^level} ** power."""
        order = 1 if level == 0 else p ** level
        e = power % order
        return cls(p, level, [0] * e + [1], modulus)

    def _lift(self, level):
        if level == self.level:
            return self
        if level < self.level:
            raise ValueError("cannot push to a lower level")
        # zeta_{p^i} = T^(p^(level - i)) in Q(zeta_{p^level})
        stride = self.p ** (level - self.level) if self.level else 0
        poly = [0] * (stride * len(self.coeffs) + 1)
        for e, c in enumerate(self.coeffs):
            poly[e * stride] += c
        return CycNumber(self.p, level, poly, self.modulus)

    def _coerce(self, other):
        if isinstance(other, CycNumber):
            if other.p != self.p:
                raise ValueError("prime mismatch")
            lvl = max(self.level, other.level)
            return self._lift(lvl), other._lift(lvl)
        if isinstance(other, PadicTrunc):
            other = other.value
        return self, CycNumber(self.p, self.level, [other], self.modulus)

    def __add__(self, other):
        a, b = self._coerce(other)
        return CycNumber(a.p, a.level, [x + y for x, y in zip(a.coeffs, b.coeffs)], a.modulus)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.p, self.level, [-c for c in self.coeffs], self.modulus)

    def __sub__(self, other):
        a, b = self._coerce(other)
        return CycNumber(a.p, a.level, [x - y for x, y in zip(a.coeffs, b.coeffs)], a.modulus)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        prod = [0] * (len(a.coeffs) + len(b.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        return CycNumber(a.p, a.level, prod, a.modulus)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycNumber(self.p, self.level, [1], self.modulus)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def multiplication_matrix(self):
        """Matrix of x -> self * x on the power basis (columns are images)."""
        n = self.degree
        cols = []
        for i in range(n):
            basis = CycNumber(self.p, self.level, [0] * i + [1], self.modulus)
            cols.append((self * basis).coeffs)
        return [[cols[c][r] for c in range(n)] for r in range(n)]

    def norm(self):
        """Field norm down to Q (determinant of the multiplication matrix)."""
        from sympy import Matrix

        if self.modulus is not None:
            raise ValueError("norm is only defined in exact mode")
        return Fraction(str(Matrix(self.multiplication_matrix()).det()))

    def inverse(self) -> "CycNumber":
        n = self.degree
        mat = self.multiplication_matrix()
        rhs = [1] + [0] * (n - 1)
        sol = _solve_square(mat, rhs, self.modulus, self.p)
        return CycNumber(self.p, self.level, sol, self.modulus)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def galois(self, t: int) -> "CycNumber":
        """Apply the automorphism zeta -> zeta^t (t prime to p)."""
        if t % self.p == 0:
            raise ValueError("t must be prime to p")
        order = 1 if self.level == 0 else self.p ** self.level
        poly = [0] * order
        for e, c in enumerate(self.coeffs):
            poly[(e * t) % order] += c
        return CycNumber(self.p, self.level, poly, self.modulus)

    def rational_value(self) -> Fraction:
        if any(c for c in self.coeffs[1:]):
            raise ValueError("not a rational number")
        return Fraction(self.coeffs[0])

    def __eq__(self, other):
        try:
            a, b = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.p, self.level, self.coeffs, self.modulus))

    def __repr__(self):
        terms = [f"{c}*z^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) or "0"
        tag = f"Q(zeta_{self.p}^{self.level})" if self.modulus is None else f"(Z/{self.modulus})[zeta_{self.p}^{self.level}]"
        return f"{body} in {tag}"


def _solve_square(mat, rhs, modulus, p):
    """Gauss-Jordan for a square system over Q or Z/modulus."""
    n = len(mat)
    if modulus is None:
        rows = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(mat, rhs)]
    else:
        rows = [[x % modulus for x in row] + [b % modulus] for row, b in zip(mat, rhs)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            x = rows[r][col]
            if modulus is None and x != 0:
                piv = r
                break
            if modulus is not None and x % p != 0:
                piv = r
                break
        if piv is None:
            if modulus is None:
                raise ZeroDivisionError("singular element")
            raise PrecisionError("element is not a unit at this precision")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col] if modulus is None else pow(rows[col][col], -1, modulus)
        rows[col] = [x * inv if modulus is None else x * inv % modulus for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
                if modulus is not None:
                    rows[r] = [x % modulus for x in rows[r]]
    return [row[n] for row in rows]


def dirichlet_L_neg(k: int, N: int, chi) -> CycNumber:
    """L(1-k, chi) = -(N^(k-1)/k) sum_{a=1}^{N-1} B_k(a/N) chi(a).

    ``chi`` maps a unit a mod N to a CycNumber (or a rational for the
    trivial character).
    """
    total = None
    for a in range(1, N):
        value = chi(a)
        if value is None:
            raise ValueError(f"character undefined at {a}")
        term = value * bernoulli_poly(k, Fraction(a, N))
        total = term if total is None else total + term
    result = total * (-Fraction(N ** (k - 1), k))
    if not isinstance(result, CycNumber):
        raise TypeError("character values must be CycNumber")
    return result


@dataclass
class AdmissibilityReport:
    k: int
    p: int
    N: int
    ok: bool
    nu: int | None
    failed: list = field(default_factory=list)

    def as_dict(self):
        return {"k": self.k, "p": self.p, "N": self.N, "ok": self.ok,
                "nu": self.nu, "failed": list(self.failed)}


def admissible_triple(k: int, p: int, N: int, allow_weight_two: bool = False) -> AdmissibilityReport:
    failed = []
    if k % 2:
        failed.append("k must be even")
    if k < 2 or (k == 2 and not allow_weight_two):
        failed.append("k > 2")
    if not isprime(p):
        failed.append("p prime")
    if not isprime(N):
        failed.append("N prime")
    if isprime(p):
        if k % (p - 1) == 0:
            failed.append("(p-1) does not divide k")
        elif k >= 2 and k % 2 == 0 and vp(zeta_neg(k), p) != 0:
            failed.append("zeta(1-k) is a p-adic unit")
        if isprime(N) and (N - 1) % p:
            failed.append("p divides N-1")
    nu = None if failed else vp(N - 1, p)
    return AdmissibilityReport(k, p, N, not failed, nu, failed)


def require_admissible(k, p, N, allow_weight_two=False) -> int:
    rep = admissible_triple(k, p, N, allow_weight_two)
    if not rep.ok:
        raise AdmissibilityError(rep.failed[0], f"({k}, {p}, {N}) is not admissible: {', '.join(rep.failed)}")
    return rep.nu
