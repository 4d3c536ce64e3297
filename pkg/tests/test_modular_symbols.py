from collections import Counter

import pytest
from sympy import Matrix, symbols

from conftest import lattice, local_report, space
from oracles import x0_11_coefficients
from tame_eisenstein.mazur_tate import xi_prime
from tame_eisenstein.modular_symbols import (
    P1List,
    atkin_lehner,
    build_space,
    congruence_audit,
    dim_cusp_forms,
    eta_product_x0_11,
    hecke_matrix,
    heilbronn_cremona,
    merel_matrices,
    sturm_bound,
    x0_11_demo,
)
from tame_eisenstein.tame_group_ring import TameContext


def test_dimension_formula():
    # genus 1 at 11 and 2 at 29, no elliptic points except two of order 2 at 29
    assert dim_cusp_forms(11, 2) == 1
    assert dim_cusp_forms(1, 12) == 1
    assert dim_cusp_forms(11, 14) == 12
    assert dim_cusp_forms(29, 10) == 21
    assert sturm_bound(11, 14) == 14


def test_p1_list():
    P = P1List(11)
    assert P.size == 12
    assert P.index(3, 6) == P.index(1, 2)
    assert P.index(0, 0) is None
    assert P.index(5, 0) == 11


def test_merel_set_sizes():
    # |X_n| for n prime: sum over divisors-type count; spot values
    assert len(merel_matrices(2)) == 4
    assert all(a * d - b * c == 7 for a, b, c, d in merel_matrices(7))
    assert all(a * d - b * c == 13 for a, b, c, d in heilbronn_cremona(13))


@pytest.mark.parametrize("N,k", [(11, 2), (1, 12), (11, 4)])
def test_small_spaces(N, k):
    S = build_space(N, k)
    assert S.cuspidal_dim == 2 * dim_cusp_forms(N, k)


def test_level_one_weight_twelve_eigenvalues():
    S = build_space(1, 12)
    T2 = Matrix(hecke_matrix(S, 2).matrix)
    assert Counter(T2.eigenvals(multiple=True)) == Counter({2049: 1, -24: 2})


def test_x0_11_hecke_polynomial():
    S = build_space(11, 2)
    lam = symbols("lam")
    charpoly = Matrix(hecke_matrix(S, 2).matrix).charpoly(lam).as_expr()
    assert (charpoly - (lam - 3) * (lam + 2) ** 2).expand() == 0


@pytest.mark.slow
@pytest.mark.parametrize("N,k", [(11, 14), (29, 10)])
def test_trace_agrees_across_matrix_families(N, k):
    S = space(N, k)
    for ell in (2, 3):
        merel = Matrix(hecke_matrix(S, ell, "merel").matrix).trace()
        cremona = Matrix(hecke_matrix(S, ell, "cremona").matrix).trace()
        assert merel == cremona


@pytest.mark.slow
@pytest.mark.parametrize("N,k", [(11, 14), (29, 10)])
def test_atkin_lehner_involution_and_commutation(N, k):
    lat = lattice(N, k)
    W = lat.operator("w")
    assert W * W == Matrix.eye(W.shape[0])
    for ell in (2, 3):
        T = lat.operator(ell)
        assert W * T == T * W
    assert lat.operator(2) * lat.operator(3) == lat.operator(3) * lat.operator(2)


def test_full_space_atkin_lehner_is_involution():
    S = space(11, 14)
    W = Matrix(atkin_lehner(S).matrix)
    assert W * W == Matrix.eye(S.dim)


def test_eta_products_agree():
    assert eta_product_x0_11(200) == x0_11_coefficients(200)
    assert eta_product_x0_11(10)[:6] == [0, 1, -2, -1, 2, 1]


def test_x0_11_eigenvalues_from_symbols():
    demo = x0_11_demo([2, 3, 5, 7, 13], use_modular_symbols=True)
    for ell, r in demo.items():
        assert r["modular_symbols"] == r["a_ell"]
    assert demo[2]["a_ell"] == -2 and demo[3]["a_ell"] == -1
    assert (6 + 21 * 2) % 25 == (-2) % 25 and demo[3]["chi"] == pow(6, 3, 25)


def test_x0_11_local_algebra():
    from tame_eisenstein.modular_symbols import eisenstein_local
    rep = eisenstein_local(build_space(11, 2), 5)
    assert rep.rank == 1 and rep.index_exponent == 1 and rep.principal
    assert rep.eigen_map[2] == 23  # -2 mod 25
    assert rep.wN_is_minus_one


@pytest.mark.slow
@pytest.mark.parametrize("k,p,N", [(14, 5, 11), (10, 7, 29)])
def test_eisenstein_local_fixture(k, p, N):
    rep = local_report(k, p, N)
    assert rep.rank >= 1
    assert rep.index_exponent == 1
    assert rep.wN_is_minus_one and rep.w_plus_dim == 0
    assert rep.UN_is_minus_scaled_wN
    assert all(rep.extra_primes_in_algebra.values())
    ctx = TameContext(N, p, k=k)
    unit = xi_prime(k, ctx) % p != 0
    assert (rep.rank == 1) == (unit and rep.principal)


@pytest.mark.slow
@pytest.mark.parametrize("k,p,N", [(14, 5, 11), (10, 7, 29)])
def test_congruence_audit(k, p, N):
    rep = local_report(k, p, N)
    ctx = TameContext(N, p, k=k)
    audit = congruence_audit(rep, k, ctx)
    assert all(r["passed"] and r["mod_p_eisenstein"] for r in audit.values())
    # ell = 1 mod N has log 0, so the eigenvalue is 1 + ell^(k-1) on the nose
    for ell in audit:
        if ell % N == 1:
            assert audit[ell]["computed"] == (1 + pow(ell, k - 1, rep.eigen_modulus)) % rep.eigen_modulus
