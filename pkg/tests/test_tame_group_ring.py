from fractions import Fraction

from hypothesis import given, settings, strategies as st

from tame_eisenstein.exact_arith import CycNumber
from tame_eisenstein.tame_group_ring import (
    Lambda1Elt,
    LambdaElt,
    TameContext,
    augmentation,
    character_value,
    diamond,
    from_group_basis,
    group_element,
    project_lambda1,
    specialize_char,
)

CTX = TameContext(11, 5, M=6)
CTX29 = TameContext(29, 7, M=5)


def test_context_basics():
    assert CTX.nu == 1 and CTX.q == 5 and CTX.gamma == 2
    assert CTX29.gamma == 2
    assert CTX.full_log(2) == 1
    assert CTX.log(2 ** 7 % 11) == 2


def test_group_relation():
    one_plus_x = LambdaElt.one(CTX) + LambdaElt.X(CTX)
    assert one_plus_x ** CTX.q == LambdaElt.one(CTX)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10), st.integers(1, 10))
def test_group_element_is_a_homomorphism(a, b):
    assert group_element(a, CTX) * group_element(b, CTX) == group_element(a * b % 11, CTX)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=5, max_size=5),
       st.lists(st.integers(-20, 20), min_size=5, max_size=5),
       st.sampled_from([1, 2, 3, 4]))
def test_specialization_is_multiplicative(u, v, t):
    x = LambdaElt(CTX, u, exact=True)
    y = LambdaElt(CTX, v, exact=True)
    assert specialize_char(x * y, 1, t) == specialize_char(x, 1, t) * specialize_char(y, 1, t)
    assert specialize_char(x + y, 1, t) == specialize_char(x, 1, t) + specialize_char(y, 1, t)


def test_specialization_of_group_elements_is_the_character():
    for a in range(1, 11):
        assert specialize_char(group_element(a, CTX, exact=True), 1, 3) == character_value(a, CTX, 1, 3)


def test_from_group_basis_and_augmentation():
    weights = [Fraction(i + 1) for i in range(5)]
    e = from_group_basis(weights, CTX)
    assert augmentation(e) == sum(weights)


def test_dual_numbers():
    a = Lambda1Elt.make(3, 2, CTX)
    b = Lambda1Elt.make(2, 1, CTX)
    prod = a * b
    assert (prod.a, prod.b) == (6, (3 * 1 + 2 * 2) % 5)
    assert (a * a.inverse()) == Lambda1Elt.make(1, 0, CTX)
    assert diamond(2, CTX) == Lambda1Elt.make(1, 1, CTX)
    assert project_lambda1(group_element(2, CTX)) == diamond(2, CTX)


def test_level_two_context():
    ctx = TameContext(101, 5, M=5)
    assert ctx.nu == 2 and ctx.q == 25
    x = specialize_char(group_element(3, ctx, exact=True), 2)
    assert x ** 25 == CycNumber.from_rat(1, 5, 2)
