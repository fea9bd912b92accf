"""Symmetric functions, plethysm and the Frobenius bridge."""
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hallfock.scalar import ONE, ZERO, Scalar, q, q1, q2, var
from hallfock.symm import (
    ClassFunction,
    DegreeCapError,
    SymFunc,
    TorusCharacter,
    cycle_trace_exterior,
    degree_cap,
    e_poly,
    frobenius,
    frobenius_inverse,
    h_poly,
    induce,
    p,
    p_lambda,
    pairing_plane,
    pairing_standard,
    parse_symfunc,
    partitions,
    plethysm_eval,
    plethysm_shift,
    restrict_hom,
    z_lambda,
)

K1 = (1 - q1) * (1 - q2)


@st.composite
def symfuncs(draw, max_degree=4):
    terms = {}
    for _ in range(draw(st.integers(0, 3))):
        la = draw(st.sampled_from([la for k in range(max_degree + 1) for la in partitions(k)]))
        terms[la] = Scalar.monomial({"q1": draw(st.integers(-2, 2)), "q2": draw(st.integers(-2, 2))},
                                    draw(st.integers(-3, 3)))
    return SymFunc(terms)


def test_partitions_counts():
    assert [len(partitions(n)) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert z_lambda((2, 1, 1)) == 4


def test_products():
    assert p(1) * p(1) == p_lambda((1, 1))
    assert p(2) * p_lambda((1,)) == p_lambda((2, 1))
    assert h_poly(2) * SymFunc.one() == h_poly(2)


def test_pairings():
    assert pairing_standard(p(2), p(2)) == 2
    assert pairing_standard(p_lambda((1, 1)), p_lambda((1, 1))) == 2
    assert pairing_standard(p(2), p_lambda((1, 1))) == ZERO
    assert pairing_plane(p(1), p(1)) == K1
    assert pairing_plane(p_lambda((2, 1)), p_lambda((2, 1))) == 2 * (1 - q1**2) * (1 - q2**2) * K1
    assert pairing_plane(p(3), p_lambda((1, 1, 1))) == ZERO


@given(symfuncs(), symfuncs())
def test_pairing_plane_symmetric(f, g):
    assert pairing_plane(f, g) == pairing_plane(g, f)


def test_pairing_plane_diagonal():
    for k in range(5):
        for la in partitions(k):
            for mu in partitions(k):
                val = pairing_plane(p_lambda(la), p_lambda(mu))
                if la != mu:
                    assert val == ZERO
                else:
                    want = Scalar.const(z_lambda(la))
                    for part in la:
                        want = want * (1 - q1**part) * (1 - q2**part)
                    assert val == want


def test_h_and_e():
    half = Scalar.const(1) / 2
    assert h_poly(2) == (p_lambda((1, 1)) + p(2)).scale(half)
    assert e_poly(2) == (p_lambda((1, 1)) - p(2)).scale(half)
    assert h_poly(1) == e_poly(1) == p(1)


@pytest.mark.parametrize("n", range(1, 9))
def test_h_e_duality(n):
    # sum_k (-1)^k e_k h_{n-k} = 0
    acc = SymFunc.zero()
    for k in range(n + 1):
        acc = acc + (e_poly(k) * h_poly(n - k)).scale((-1) ** k)
    assert acc.is_zero()


def test_plethysm_eval_examples():
    z = TorusCharacter.monomial({"z1": 1})
    A = z - z * TorusCharacter.monomial({"q1": 1}) - z * TorusCharacter.monomial({"q2": 1}) \
        + z * TorusCharacter.monomial({"q1": 1, "q2": 1})
    z1 = var("z1")
    for n in range(1, 4):
        assert plethysm_eval(p(n), A) == (1 - q1**n) * (1 - q2**n) * z1**n
    u = TorusCharacter.monomial({"u1": 1})
    B = u * (TorusCharacter.monomial({"q1": 1}) + TorusCharacter.monomial({"q2": 1})
             - TorusCharacter.monomial({"q1": 1, "q2": 1}))
    assert plethysm_eval(e_poly(2), B) == var("u1") ** 2 * q * K1
    f = h_poly(3) + p(1).scale(q1) + SymFunc.scalar(7)
    assert plethysm_eval(f, TorusCharacter()) == Scalar.const(7)


@given(symfuncs(max_degree=5), symfuncs(max_degree=5))
def test_plethysm_eval_is_ring_map(f, g):
    u = TorusCharacter.monomial({"u1": 1})
    A = u * (TorusCharacter.monomial({"q1": 1}) + TorusCharacter.monomial({"q2": 1})
             - TorusCharacter.monomial({"q1": 1, "q2": 1}))
    assert plethysm_eval(f * g, A) == plethysm_eval(f, A) * plethysm_eval(g, A)
    assert plethysm_eval(f + g, A) == plethysm_eval(f, A) + plethysm_eval(g, A)


def test_plethysm_shift_examples():
    z = var("z1")
    assert plethysm_shift(p(1), 1, ["z1"]) == p(1) + SymFunc.scalar(K1 * z)
    expected = p_lambda((1, 1)) + p(1).scale(2 * K1 * z) + SymFunc.scalar(K1**2 * z**2)
    assert plethysm_shift(p(1) ** 2, 1, ["z1"]) == expected


@given(symfuncs(max_degree=3))
def test_plethysm_shift_inverse(f):
    with degree_cap(8):
        g = plethysm_shift(plethysm_shift(f, 1, ["z1", "z2"]), -1, ["z1", "z2"])
    assert g == f


def test_frobenius_examples():
    assert frobenius(ClassFunction.trivial(2)) == h_poly(2)
    assert frobenius(ClassFunction.sign(2)) == e_poly(2)
    assert frobenius(ClassFunction.regular(3)) == p(1) ** 3
    p1 = ClassFunction.power_sum(1)
    assert frobenius(induce(p1, p1)) == p_lambda((1, 1))
    t1 = ClassFunction.trivial(1)
    assert frobenius(induce(t1, t1)) == p_lambda((1, 1))
    M = ClassFunction.sign(3)
    assert induce(M, ClassFunction.trivial(0)) == M
    assert restrict_hom(ClassFunction.trivial(0), M) == M
    out = restrict_hom(ClassFunction.power_sum(2), frobenius_inverse(p(2)))
    assert out == ClassFunction(0, {(): 2})


@given(symfuncs(max_degree=3).filter(lambda f: not f.is_zero()))
def test_frobenius_round_trip(f):
    for k in f.degrees():
        g = f.component(k)
        assert frobenius(frobenius_inverse(g)) == g


@pytest.mark.parametrize("k,l", [(1, 1), (1, 2), (2, 2), (2, 3), (1, 4)])
def test_frobenius_reciprocity(k, l):
    for nu in partitions(k + l):
        M = ClassFunction.indicator(nu)
        for la in partitions(l):
            g = p_lambda(la)
            lhs = pairing_standard(frobenius(restrict_hom(ClassFunction.power_sum(k), M)), g)
            rhs = pairing_standard(frobenius(M), p(k) * g)
            assert lhs == rhs


@pytest.mark.parametrize("k", range(1, 7))
def test_cycle_trace(k):
    assert cycle_trace_exterior(k) == (1 - q1**k) * (1 - q2**k)


def test_degree_cap():
    with degree_cap(3):
        with pytest.raises(DegreeCapError):
            h_poly(4)
    assert h_poly(3).degree() == 3


def test_parse_symfunc():
    assert parse_symfunc("p1^2 - q1*p2") == p_lambda((1, 1)) - p(2).scale(q1)
    assert parse_symfunc("h2") == h_poly(2)
    assert parse_symfunc("e3 + 1") == e_poly(3) + SymFunc.one()
    with pytest.raises(SyntaxError):
        parse_symfunc("p1 +")


@given(symfuncs())
def test_json_round_trip(f):
    assert SymFunc.from_json(json.loads(json.dumps(f.to_json()))) == f
