from fractions import Fraction

from weylkit.coxeter import make_system
from weylkit.hecke import Q, HeckeAlgebra, LaurentPoly, n_trace, specialize


def test_laurent_arithmetic():
    p = Q * Q + 1
    assert str(p) == "q^2+1"
    assert p(2) == 5
    assert (Q - 1)(3) == 2
    assert (Q ** -1)(2) == Fraction(1, 2)
    assert specialize(3 * Q - 3, 1) == 0
    assert LaurentPoly.from_list([1, 2, 3])(1) == 6


def test_quadratic_and_additive_rules():
    A1 = make_system("A", 1)
    H = HeckeAlgebra(A1)
    s = A1.generator(0)
    ts = H.t(s)
    sq = ts * ts
    assert sq.coeff(A1.identity) == Q and sq.coeff(s) == Q - 1
    assert H.one() * ts == ts
    A2 = make_system("A", 2)
    H2 = HeckeAlgebra(A2)
    s1, s2 = A2.generators
    assert H2.t(s1) * H2.t(s2) == H2.t(s1 * s2)


def test_associativity():
    W = make_system("B", 2)
    H = HeckeAlgebra(W)
    elts = W.elements()
    for a in elts[::2]:
        for b in elts[1::3]:
            for c in elts[::3]:
                assert (H.t(a) * H.t(b)) * H.t(c) == H.t(a) * (H.t(b) * H.t(c))


def test_traces_a1():
    A1 = make_system("A", 1)
    e, s = A1.identity, A1.generator(0)
    assert n_trace(e, e) == LaurentPoly.const(2)
    assert n_trace(s, e) == Q - 1
    assert n_trace(s, s) == Q * Q + 1


def test_trace_identity_is_group_order():
    for W in (make_system("A", 2), make_system("B", 2)):
        assert n_trace(W.identity, W.identity) == LaurentPoly.const(W.order())


def test_trace_at_q1_is_coefficient_sum():
    W = make_system("A", 2)
    w = W.evaluate([0, 1])
    p = n_trace(w, w)
    assert p(1) == sum(p.coeffs.values())
