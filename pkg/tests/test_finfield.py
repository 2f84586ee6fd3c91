import random

import pytest

from weylkit.finfield import GF, make_field


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1), (7, 2)])
def test_field_axioms(p, k):
    F = make_field(p, k)
    assert F.size == p ** k
    rng = random.Random(p * 10 + k)
    for _ in range(200):
        a, b, c = (rng.randrange(F.size) for _ in range(3))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == 0
        assert F.sub(F.add(a, b), b) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (2, 3), (5, 2)])
def test_multiplicative_group_cyclic(p, k):
    F = make_field(p, k)
    assert max(F.mult_order(a) for a in F.nonzero()) == F.size - 1


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (2, 3)])
def test_frobenius(p, k):
    F = make_field(p, k)
    fixed = [a for a in F.elements() if F.frob(a) == a]
    assert fixed == list(range(p))
    for a in F.elements():
        assert F.frob(a, k) == a
        for b in F.elements():
            assert F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b))
            assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))


def test_small_examples():
    assert make_field(2, 1).size == 2
    F4 = make_field(2, 2)
    assert F4.size == 4 and any(F4.frob(a) != a for a in F4.elements())
    F9 = make_field(3, 2)
    assert max(F9.mult_order(a) for a in F9.nonzero()) == 8
    assert F9.subfield(1) == [0, 1, 2]


def test_linear_algebra():
    F = make_field(7)
    A = ((1, 2, 3), (0, 1, 4), (5, 6, 0))
    Ai = F.inverse(A)
    assert F.matmul(A, Ai) == F.identity(3)
    assert F.det(A) == (1 * (0 - 24) - 2 * (0 - 20) + 3 * (0 - 5)) % 7
    x = F.solve(A, (1, 2, 3))
    assert F.matvec(A, x) == (1, 2, 3)
    assert F.rank([[1, 2], [2, 4]]) == 1
    assert F.solve(((1, 1), (1, 1)), (0, 1)) is None


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        GF(2, 13)
