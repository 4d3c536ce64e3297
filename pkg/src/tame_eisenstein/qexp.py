"""Truncated q-expansions over a generic coefficient ring, the Eisenstein
families used for the congruence checks, and Hecke operators T_ell acting
on coefficients.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exact_arith import CycNumber, PadicTrunc, dirichlet_L_neg, zeta_neg
from .mazur_tate import reducible_pseudo_trace, xi_eis, xi_mt
from .tame_group_ring import (
    Lambda1Elt,
    LambdaBar1Elt,
    TameContext,
    project_lambda1,
)

__all__ = [
    "QExp",
    "eis_level1",
    "eis_pm",
    "eis_char",
    "eis_groupring",
    "derivative_eis",
    "deformation_eis",
    "hecke_Tl",
    "wN_on_old_eis",
    "verify_xe",
    "verify_eprime_hecke",
    "verify_deformation_eigenform",
    "dumps",
    "loads",
    "DEFAULT_QPREC",
]

DEFAULT_QPREC = 200


@dataclass(frozen=True)
class QExp:
    """sum_{n=0}^{P} a_n q^n with coefficients in the ring named by ``ring``.

    The precision P is the index of the last known coefficient.
    """

    ring: str
    coeffs: tuple
    weight: int = 0
    level: int = 1
    p: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def precision(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def _like(self, coeffs):
        return QExp(self.ring, tuple(coeffs), self.weight, self.level, self.p, self.meta)

    def __add__(self, other: "QExp") -> "QExp":
        P = min(self.precision, other.precision)
        return self._like(a + b for a, b in zip(self.coeffs[: P + 1], other.coeffs[: P + 1]))

    def __sub__(self, other: "QExp") -> "QExp":
        P = min(self.precision, other.precision)
        return self._like(a - b for a, b in zip(self.coeffs[: P + 1], other.coeffs[: P + 1]))

    def scale(self, c) -> "QExp":
        return self._like(c * a for a in self.coeffs)

    def map(self, fn, ring: str) -> "QExp":
        """Apply a coefficient-ring homomorphism."""
        return QExp(ring, tuple(fn(a) for a in self.coeffs), self.weight, self.level, self.p, self.meta)

    def truncate(self, P: int) -> "QExp":
        return self._like(self.coeffs[: P + 1])

    def first_difference(self, other: "QExp"):
        """Smallest index where the two series differ, or None."""
        P = min(self.precision, other.precision)
        for n in range(P + 1):
            if self.coeffs[n] != other.coeffs[n]:
                return n
        return None

    def __eq__(self, other):
        if not isinstance(other, QExp):
            return NotImplemented
        return self.first_difference(other) is None


def _divisors(n):
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _sigma(n, e):
    return sum(d ** e for d in _divisors(n))


def eis_level1(k: int, P: int = DEFAULT_QPREC) -> QExp:
    if k < 4 or k % 2:
        raise ValueError("level-one Eisenstein series need even k >= 4")
    coeffs = [zeta_neg(k) / 2] + [Fraction(_sigma(n, k - 1)) for n in range(1, P + 1)]
    return QExp("Rat", tuple(coeffs), k, 1)


def eis_pm(k: int, N: int, sign: int, P: int = DEFAULT_QPREC) -> QExp:
    """E_k(z) + sign * N^(k/2) E_k(Nz)."""
    base = eis_level1(k, P)
    c = sign * N ** (k // 2)
    coeffs = list(base.coeffs)
    for n in range(0, P + 1, N):
        coeffs[n] += c * base.coeffs[n // N]
    return QExp("Rat", tuple(coeffs), k, N)


def eis_char(k: int, N: int, which: str, chi, P: int = DEFAULT_QPREC, p: int = 0) -> QExp:
    """E_k(1, chi) (constant term L(1-k, chi)/2) or E_k(chi, 1) (no
    constant term). ``chi`` maps integers to CycNumber and must vanish on
    multiples of N."""
    def chi0(a):
        return 0 if a % N == 0 else chi(a)

    coeffs = []
    if which == "(1,chi)":
        coeffs.append(dirichlet_L_neg(k, N, chi) * Fraction(1, 2))
        for n in range(1, P + 1):
            coeffs.append(sum((chi0(d) * d ** (k - 1) for d in _divisors(n)), 0 * chi(1)))
    elif which == "(chi,1)":
        coeffs.append(0 * chi(1))
        for n in range(1, P + 1):
            coeffs.append(sum((chi0(n // d) * d ** (k - 1) for d in _divisors(n)), 0 * chi(1)))
    else:
        raise ValueError("which must be '(1,chi)' or '(chi,1)'")
    return QExp(f"Cyc:{chi(1).level}", tuple(coeffs), k, N, p)


def _ring_tag(elt_cls, ctx):
    if elt_cls is Lambda1Elt:
        return f"Lambda1:{ctx.M}:{ctx.nu}"
    return f"LambdaBar1:{ctx.nu}"


def eis_groupring(k: int, ctx: TameContext, which: str, P: int = DEFAULT_QPREC, bar: bool = False) -> QExp:
    """The group-ring Eisenstein series pushed to Lambda_1 (or to the dual
    numbers when ``bar``) through the diamond character.

    Diamond values at multiples of N are taken to be zero.
    """
    cls = LambdaBar1Elt if bar else Lambda1Elt
    N = ctx.N

    def dia(a):
        if a % N == 0:
            return cls.make(0, 0, ctx)
        return cls.make(1, ctx.log(a), ctx)

    zero = cls.make(0, 0, ctx)
    coeffs = []
    if which == "(1,chi)":
        xi1 = project_lambda1(xi_mt(k, ctx))
        half = pow(2, -1, ctx.p ** ctx.M)
        coeffs.append(cls.make(xi1.a * half, xi1.b * half, ctx))
        for n in range(1, P + 1):
            coeffs.append(sum((dia(d) * pow(d, k - 1, ctx.modulus) for d in _divisors(n)), zero))
    elif which == "(chi,1)":
        coeffs.append(zero)
        for n in range(1, P + 1):
            coeffs.append(sum((dia(n // d) * pow(d, k - 1, ctx.modulus) for d in _divisors(n)), zero))
    else:
        raise ValueError("which must be '(1,chi)' or '(chi,1)'")
    return QExp(_ring_tag(cls, ctx), tuple(coeffs), k, N, ctx.p)


def _to_dual(series: QExp, ctx: TameContext, bar: bool) -> QExp:
    cls = LambdaBar1Elt if bar else Lambda1Elt
    return series.map(lambda c: cls.make(c, 0, ctx), _ring_tag(cls, ctx))


def derivative_eis(k: int, ctx: TameContext, P: int = DEFAULT_QPREC) -> QExp:
    """E' = E_k(1,<->) - E_k(<->,1) over the dual numbers; every coefficient
    is checked to lie in X times the dual numbers."""
    e1 = eis_groupring(k, ctx, "(1,chi)", P, bar=True)
    e2 = eis_groupring(k, ctx, "(chi,1)", P, bar=True)
    diff = e1 - e2
    for n, c in enumerate(diff.coeffs):
        if c.a != 0:
            raise ArithmeticError(f"E' coefficient {n} = {c} is not a multiple of X")
    return diff


def deformation_eis(k: int, ctx: TameContext, P: int = DEFAULT_QPREC) -> QExp:
    """E_{k,N}^- + E' over Lambda_1, the X-part of E' placed in the
    X-coefficient."""
    base = _to_dual(eis_pm(k, ctx.N, -1, P), ctx, bar=False)
    dprime = derivative_eis(k, ctx, P)
    coeffs = [b + Lambda1Elt.make(0, d.b, ctx) for b, d in zip(base.coeffs, dprime.coeffs)]
    return QExp(base.ring, tuple(coeffs), k, ctx.N, ctx.p)


def hecke_Tl(f: QExp, ell: int, k: int | None = None) -> QExp:
    """a_n(T_ell f) = a_{n ell}(f) + ell^(k-1) a_{n/ell}(f); the result has
    precision floor(P / ell)."""
    k = f.weight if k is None else k
    if f.level > 1 and f.level % ell == 0:
        raise ValueError("T_ell needs ell prime to the level")
    P = f.precision // ell
    lk = ell ** (k - 1)
    out = []
    for n in range(P + 1):
        c = f.coeffs[n * ell]
        if n % ell == 0:
            c = c + lk * f.coeffs[n // ell]
        out.append(c)
    return f._like(out)


def wN_on_old_eis(k: int, N: int):
    """Matrix (columns are images) of w_N on the basis E_k(z), E_k(Nz)."""
    h = Fraction(N) ** (k // 2)
    return [[Fraction(0), 1 / h], [h, Fraction(0)]]


@dataclass
class IdentityReport:
    name: str
    passed: bool
    first_failure: int | None = None
    detail: dict = field(default_factory=dict)

    def as_dict(self):
        return {"name": self.name, "passed": self.passed,
                "first_failure": self.first_failure, "detail": self.detail}


def verify_xe(k: int, ctx: TameContext, P: int = DEFAULT_QPREC) -> IdentityReport:
    """X E_{k,N} = X E_k(1,<->) = X E_k(<->,1) over the dual numbers."""
    e_kn = _to_dual(eis_pm(k, ctx.N, -1, P), ctx, bar=True)
    e1 = eis_groupring(k, ctx, "(1,chi)", P, bar=True)
    e2 = eis_groupring(k, ctx, "(chi,1)", P, bar=True)
    times_x = [s.map(lambda c: c.times_X(), s.ring) for s in (e_kn, e1, e2)]
    bad = times_x[0].first_difference(times_x[1])
    bad2 = times_x[0].first_difference(times_x[2])
    cands = [b for b in (bad, bad2) if b is not None]
    first = min(cands) if cands else None
    return IdentityReport("X*E = X*E(1,<>) = X*E(<>,1)", first is None, first,
                          {"a_0": str(times_x[0][0]), "a_N": str(times_x[0][ctx.N]) if P >= ctx.N else None})


def verify_eprime_hecke(k: int, ctx: TameContext, primes, P: int = DEFAULT_QPREC) -> IdentityReport:
    """(T_ell - ell^(k-1) - 1) E' = log(ell)(ell^(k-1) - 1) X E_{k,N}."""
    dprime = derivative_eis(k, ctx, P)
    e_kn = _to_dual(eis_pm(k, ctx.N, -1, P), ctx, bar=True)
    results = {}
    first = None
    for ell in primes:
        lhs = hecke_Tl(dprime, ell, k) - dprime.scale(1 + ell ** (k - 1))
        factor = ctx.log(ell) * (ell ** (k - 1) - 1)
        rhs = e_kn.map(lambda c: c.times_X() * factor, e_kn.ring)
        diff = lhs.first_difference(rhs)
        results[ell] = {"passed": diff is None, "first_failure": diff, "precision": lhs.precision}
        if diff is not None and first is None:
            first = diff
    return IdentityReport("E' Hecke relation", all(r["passed"] for r in results.values()), first, results)


def verify_deformation_eigenform(k: int, ctx: TameContext, primes, P: int = DEFAULT_QPREC) -> IdentityReport:
    """Check that E~ is a T_ell-eigenvector, that a_0(E~) = xi^Eis, and
    compare a_ell(E~) with the reducible pseudo-trace, both literally and
    after the involution X -> -X of Lambda_1."""
    etilde = deformation_eis(k, ctx, P)
    results = {}
    for ell in primes:
        a_ell = etilde[ell]
        lhs = hecke_Tl(etilde, ell, k)
        diff = lhs.first_difference(etilde.scale(a_ell))
        trace = reducible_pseudo_trace(ell, k, ctx)
        results[ell] = {
            "eigenvector": diff is None,
            "first_failure": diff,
            "a_ell": [a_ell.a, a_ell.b],
            "pseudo_trace": [trace.a, trace.b],
            "matches_trace": a_ell == trace,
            "matches_trace_after_X_to_minus_X": a_ell == Lambda1Elt.make(trace.a, -trace.b, ctx),
        }
    const_ok = etilde[0] == xi_eis(k, ctx)
    detail = {"primes": results, "a_0_is_xi_eis": const_ok, "a_0": [etilde[0].a, etilde[0].b]}
    ok = const_ok and all(r["eigenvector"] and r["matches_trace"] for r in results.values())
    return IdentityReport("deformation Eisenstein eigenform", ok, None, detail)


# text format -------------------------------------------------------------

_DUAL_RE = re.compile(r"^(-?\d+)\+(-?\d+)\*X$")


def _fmt_rat(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt(c):
    if isinstance(c, (Lambda1Elt, LambdaBar1Elt)):
        return f"{c.a}+{c.b}*X"
    if isinstance(c, PadicTrunc):
        return str(c.value)
    if isinstance(c, CycNumber):
        return ",".join(_fmt_rat(x) for x in c.coeffs)
    return _fmt_rat(c)


def dumps(f: QExp) -> str:
    """Serialize as a header line ``k N p ring precision`` followed by
    ``n:coefficient`` lines."""
    lines = [f"{f.weight} {f.level} {f.p} {f.ring} {f.precision}"]
    lines += [f"{n}:{_fmt(c)}" for n, c in enumerate(f.coeffs)]
    return "\n".join(lines) + "\n"


def _parser(ring, p):
    if ring == "Rat":
        return Fraction
    head, *params = ring.split(":")
    if head == "Zp":
        M = int(params[0])
        return lambda s: PadicTrunc(p, M, int(s))
    if head in ("Lambda1", "LambdaBar1"):
        if head == "Lambda1":
            a_prec, b_prec, cls = int(params[0]), int(params[1]), Lambda1Elt
        else:
            a_prec = b_prec = int(params[0])
            cls = LambdaBar1Elt

        def parse(s):
            m = _DUAL_RE.match(s)
            if m is None:
                return cls(int(s), 0, p, a_prec, b_prec)
            return cls(int(m.group(1)), int(m.group(2)), p, a_prec, b_prec)
        return parse
    if head == "Cyc":
        level = int(params[0])
        return lambda s: CycNumber(p, level, [Fraction(x) for x in s.split(",")])
    raise ValueError(f"unknown ring tag {ring!r}")


def loads(text: str) -> QExp:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    k, N, p, ring, prec = lines[0].split()
    k, N, p, prec = int(k), int(N), int(p), int(prec)
    parse = _parser(ring, p)
    coeffs = [None] * (prec + 1)
    for ln in lines[1:]:
        idx, body = ln.split(":", 1)
        coeffs[int(idx)] = parse(body)
    if any(c is None for c in coeffs):
        raise ValueError("missing coefficients")
    return QExp(ring, tuple(coeffs), k, N, p)
