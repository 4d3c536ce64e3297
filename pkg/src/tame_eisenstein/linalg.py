"""Matrix helpers shared by the modular-symbol and complex code: Smith
normal form over Z (via sympy) and over Z/p^M, kernels and solves modulo
p^M, and exact rational row reduction."""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from sympy import Matrix, QQ, ZZ
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.polys.matrices import DomainMatrix

from .exact_arith import vp

__all__ = [
    "ModularSNF",
    "snf_mod",
    "snf_int",
    "kernel_mod",
    "solve_mod",
    "span_size",
    "matmul_mod",
    "rref_rational",
    "integer_lattice_basis",
    "integer_kernel",
    "hermite_rows",
]

# numpy int64 matmul is exact while n * (q-1)^2 stays below 2^63
_INT64_SAFE = 2 ** 62


def matmul_mod(A, B, q):
    A = np.asarray(A)
    B = np.asarray(B)
    inner = A.shape[1] if A.ndim == 2 else 1
    if inner * (q - 1) ** 2 < _INT64_SAFE:
        return (A.astype(np.int64) @ B.astype(np.int64)) % q
    return np.array((A.astype(object) @ B.astype(object)) % q, dtype=object)


def _as_mod_array(A, q):
    A = np.array(A, dtype=object) % q
    if q * q < _INT64_SAFE:
        return A.astype(np.int64)
    return A


class ModularSNF:
    """U A V = D over Z/p^M with U, V invertible and D diagonal with entries
    p^v (v = M meaning zero). ``Vinv`` is the inverse of V."""

    def __init__(self, U, V, Vinv, vals, p, M):
        self.U, self.V, self.Vinv = U, V, Vinv
        self.vals = vals
        self.p, self.M = p, M

    @property
    def rank(self):
        return sum(1 for v in self.vals if v < self.M)

    def invariants(self):
        return [self.p ** v for v in self.vals if v < self.M]


def snf_mod(A, p: int, M: int, transforms: bool = True) -> ModularSNF:
    """Smith normal form over the local ring Z/p^M by minimal-valuation
    pivoting."""
    q = p ** M
    A = _as_mod_array(A, q).copy()
    m, n = A.shape
    dtype = A.dtype
    U = np.eye(m, dtype=dtype) if transforms else None
    V = np.eye(n, dtype=dtype) if transforms else None
    Vinv = np.eye(n, dtype=dtype) if transforms else None
    vals = []
    powers = [p ** e for e in range(M + 1)]
    for t in range(min(m, n)):
        sub = A[t:, t:]
        nz = np.argwhere(sub != 0)
        if nz.size == 0:
            break
        best, bv = None, M
        for r, c in nz:
            v = vp(int(sub[r, c]), p)
            if v < bv:
                best, bv = (r + t, c + t), v
                if v == 0:
                    break
        r, c = best
        if r != t:
            A[[t, r]] = A[[r, t]]
            if transforms:
                U[[t, r]] = U[[r, t]]
        if c != t:
            A[:, [t, c]] = A[:, [c, t]]
            if transforms:
                V[:, [t, c]] = V[:, [c, t]]
                Vinv[[t, c]] = Vinv[[c, t]]
        pv = powers[bv]
        unit = int(A[t, t]) // pv
        uinv = pow(unit, -1, q)
        A[t] = (A[t] * uinv) % q
        if transforms:
            U[t] = (U[t] * uinv) % q
        col = A[t + 1:, t] // pv
        rows = np.nonzero(col)[0]
        if rows.size:
            A[t + 1:][rows] = (A[t + 1:][rows] - np.outer(col[rows], A[t])) % q
            if transforms:
                U[t + 1:][rows] = (U[t + 1:][rows] - np.outer(col[rows], U[t])) % q
        row = A[t, t + 1:] // pv
        cols = np.nonzero(row)[0]
        if cols.size:
            idx = cols + t + 1
            A[:, idx] = (A[:, idx] - np.outer(A[:, t], row[cols])) % q
            if transforms:
                V[:, idx] = (V[:, idx] - np.outer(V[:, t], row[cols])) % q
                Vinv[t] = (Vinv[t] + row[cols] @ Vinv[idx]) % q
        vals.append(bv)
    vals += [M] * (min(m, n) - len(vals))
    return ModularSNF(U, V, Vinv, vals, p, M)


def kernel_mod(A, p: int, M: int):
    """Generators (columns) of the kernel of A over Z/p^M."""
    A = np.asarray(A)
    n = A.shape[1]
    s = snf_mod(A, p, M)
    q = p ** M
    gens = []
    for j in range(n):
        v = s.vals[j] if j < len(s.vals) else M
        if v == 0:
            continue
        gens.append((s.V[:, j] * p ** (M - v)) % q)
    if not gens:
        return np.zeros((n, 0), dtype=s.V.dtype)
    return np.stack(gens, axis=1)


def solve_mod(A, b, p: int, M: int):
    """One solution x of A x = b over Z/p^M, or None."""
    q = p ** M
    s = snf_mod(A, p, M)
    rhs = matmul_mod(s.U, np.asarray(b).reshape(-1, 1), q).ravel()
    n = np.asarray(A).shape[1]
    y = [0] * n
    for i, r in enumerate(rhs):
        r = int(r)
        v = s.vals[i] if i < len(s.vals) else M
        if v >= M:
            if r % q:
                return None
            continue
        if r % p ** v:
            return None
        y[i] = r // p ** v
    return matmul_mod(s.V, np.array(y, dtype=object).reshape(-1, 1), q).ravel()


def span_size(rows, p: int, M: int) -> int:
    """log_p of the size of the Z/p^M-module spanned by the given rows."""
    rows = np.asarray(rows)
    if rows.size == 0:
        return 0
    s = snf_mod(rows, p, M, transforms=False)
    return sum(M - v for v in s.vals)


def snf_int(A):
    """Smith normal form over Z: returns (D, U, V) with U A V = D."""
    D, U, V = smith_normal_decomp(Matrix(A), domain=ZZ)
    return D, U, V


def rref_rational(rows, ncols):
    """Reduced row echelon form of a rational matrix given as a list of
    {col: value} dicts. Returns (list of row dicts, pivot columns)."""
    data = {i: {j: QQ(int(Fraction(v).numerator), int(Fraction(v).denominator)) for j, v in r.items() if v}
            for i, r in enumerate(rows)}
    data = {i: r for i, r in data.items() if r}
    dm = DomainMatrix(data, (len(rows), ncols), QQ)
    red, pivots = dm.rref()
    sdm = red.to_sparse().rep
    out = []
    for i, _ in enumerate(pivots):
        row = sdm.get(i, {})
        out.append({j: Fraction(int(v.numerator), int(v.denominator)) for j, v in row.items() if v})
    return out, list(pivots)


def hermite_rows(rows, track=False):
    """Integer row echelon form by extended-gcd row operations, with entries
    above each pivot reduced into [0, pivot). Returns (echelon rows,
    transform) where transform * rows = echelon (transform is None unless
    ``track``). Zero rows are kept at the bottom so that the transform stays
    unimodular."""
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    T = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    r = 0
    for c in range(n):
        nz = [i for i in range(r, m) if A[i][c]]
        if not nz:
            continue
        piv = min(nz, key=lambda i: abs(A[i][c]))
        A[r], A[piv] = A[piv], A[r]
        if track:
            T[r], T[piv] = T[piv], T[r]
        for i in range(r + 1, m):
            if not A[i][c]:
                continue
            a, b = A[r][c], A[i][c]
            g, x, y = _xgcd(a, b)
            u, v = a // g, b // g
            A[r], A[i] = ([x * s + y * t for s, t in zip(A[r], A[i])],
                          [u * t - v * s for s, t in zip(A[r], A[i])])
            if track:
                T[r], T[i] = ([x * s + y * t for s, t in zip(T[r], T[i])],
                              [u * t - v * s for s, t in zip(T[r], T[i])])
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            if track:
                T[r] = [-x for x in T[r]]
        for i in range(r):
            f = A[i][c] // A[r][c]
            if f:
                A[i] = [s - f * t for s, t in zip(A[i], A[r])]
                if track:
                    T[i] = [s - f * t for s, t in zip(T[i], T[r])]
        r += 1
        if r == m:
            break
    return A, T


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _common_denominator(vectors):
    den = 1
    for v in vectors:
        for x in v:
            den = math.lcm(den, Fraction(x).denominator)
    return den


def integer_lattice_basis(cols):
    """Z-basis (as columns of Fractions) of the lattice spanned by the given
    rational column vectors."""
    den = _common_denominator(cols)
    rows, _ = hermite_rows([[Fraction(x) * den for x in c] for c in cols])
    return [[Fraction(x, den) for x in r] for r in rows if any(r)]


def integer_kernel(rows):
    """Saturated Z-basis of the integer kernel of a rational matrix (list of
    rows); returned as integer column vectors."""
    den = _common_denominator(rows)
    m, n = len(rows), len(rows[0])
    cols = [[int(Fraction(rows[i][j]) * den) for i in range(m)] for j in range(n)]
    ech, T = hermite_rows(cols, track=True)
    return [T[i] for i in range(n) if not any(ech[i])]
