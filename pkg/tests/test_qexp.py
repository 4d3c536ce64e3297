from fractions import Fraction

import pytest

from tame_eisenstein.exact_arith import PadicTrunc
from tame_eisenstein.qexp import (
    QExp,
    deformation_eis,
    derivative_eis,
    dumps,
    eis_level1,
    eis_pm,
    hecke_Tl,
    loads,
    verify_deformation_eigenform,
    verify_eprime_hecke,
    verify_xe,
    wN_on_old_eis,
)
from tame_eisenstein.tame_group_ring import Lambda1Elt


def test_level_one_eisenstein_is_an_eigenform():
    E = eis_level1(12, 100)
    for ell in (2, 3, 5):
        assert hecke_Tl(E, ell) == E.scale(1 + ell ** 11).truncate(100 // ell)


def test_eis_pm_constant_term():
    E = eis_pm(14, 11, -1, 20)
    assert E[0] == Fraction(-1, 24) * (1 - 11 ** 7)
    assert E[11] == 1 + 11 ** 13 - 11 ** 7


def test_wN_matrix_is_an_involution():
    m = wN_on_old_eis(14, 11)
    prod = [[sum(m[i][t] * m[t][j] for t in range(2)) for j in range(2)] for i in range(2)]
    assert prod == [[1, 0], [0, 1]]


def test_xe_and_eprime_identities(triple):
    k, ctx = triple
    assert verify_xe(k, ctx, 200).passed
    rep = verify_eprime_hecke(k, ctx, [2, 3, 7, 13], 200)
    assert rep.passed, rep.detail


def test_derivative_coefficients_lie_in_X(triple):
    k, ctx = triple
    assert all(c.a == 0 for c in derivative_eis(k, ctx, 60).coeffs)


def test_deformation_series_is_an_eigenvector_with_constant_term_xi_eis(triple):
    k, ctx = triple
    rep = verify_deformation_eigenform(k, ctx, [2, 3, 5, 7, 13], 150)
    assert rep.detail["a_0_is_xi_eis"]
    assert all(r["eigenvector"] for r in rep.detail["primes"].values())


def test_deformation_eigenvalue_sign(triple):
    # the eigenvalue is 1 + l^(k-1) + (l^(k-1) - 1) log(l) X; the reducible
    # pseudo-trace has the opposite X-coefficient
    k, ctx = triple
    E = deformation_eis(k, ctx, 100)
    for ell in (2, 3, 7):
        lk = ell ** (k - 1)
        assert E[ell] == Lambda1Elt.make(1 + lk, (lk - 1) * ctx.log(ell), ctx)


@pytest.mark.xfail(strict=True, reason="eigenvalue matches the pseudo-trace only after X -> -X")
def test_deformation_eigenvalue_matches_pseudo_trace(triple):
    k, ctx = triple
    assert verify_deformation_eigenform(k, ctx, [2, 3], 60).passed


def test_text_round_trip(triple):
    k, ctx = triple
    for series in (eis_pm(k, ctx.N, -1, 40), deformation_eis(k, ctx, 40), derivative_eis(k, ctx, 40)):
        text = dumps(series)
        back = loads(text)
        assert back == series and dumps(back) == text


def test_ring_homomorphism_commutes_with_hecke():
    p, M = 5, 6
    E = eis_pm(14, 11, -1, 100)
    red = E.map(lambda c: PadicTrunc.from_rat(c, p, M), f"Zp:{M}")
    for ell in (2, 3):
        left = hecke_Tl(E, ell, 14).map(lambda c: PadicTrunc.from_rat(c, p, M), f"Zp:{M}")
        assert left == hecke_Tl(red, ell, 14)


def test_hecke_precision_drops():
    E = QExp("Rat", tuple(Fraction(n) for n in range(31)), 4, 1)
    assert hecke_Tl(E, 3).precision == 10
