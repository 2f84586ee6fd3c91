import random

from weylkit.braid import (BraidGroup, e8_word_checks, embed_hat, good_element_check, left_divisible, parse_braid,
                           random_braid_shuffle)
from weylkit.coxeter import make_system


def test_braid_relation_and_distinct_forms():
    W = make_system("A", 2)
    B = BraidGroup.of(W)
    assert B.from_positive_word([0, 1, 0]) == B.from_positive_word([1, 0, 1])
    assert B.from_positive_word([0, 1]) != B.from_positive_word([1, 0])
    assert B.from_positive_word([]).is_identity


def test_inverses():
    W = make_system("B", 3)
    B = BraidGroup.of(W)
    rng = random.Random(1)
    for i in range(3):
        g = B.generator(i)
        assert (g * B.generator(i, -1)).is_identity
    for _ in range(30):
        a = B.from_signed_word([(rng.randrange(3), rng.choice((1, -1))) for _ in range(rng.randint(0, 8))])
        assert (a * a.inverse()).is_identity
        assert (a.inverse() * a).is_identity


def test_normal_form_is_a_congruence():
    W = make_system("A", 3)
    B = BraidGroup.of(W)
    rng = random.Random(2)
    for _ in range(100):
        u = [rng.randrange(3) for _ in range(rng.randint(0, 6))]
        v = [rng.randrange(3) for _ in range(rng.randint(0, 6))]
        assert B.from_positive_word(u + v) == B.from_positive_word(u) * B.from_positive_word(v)


def test_projection_is_a_homomorphism():
    W = make_system("B", 3)
    B = BraidGroup.of(W)
    rng = random.Random(4)
    for _ in range(50):
        a = B.from_signed_word([(rng.randrange(3), rng.choice((1, -1))) for _ in range(5)])
        b = B.from_signed_word([(rng.randrange(3), rng.choice((1, -1))) for _ in range(5)])
        assert (a * b).to_weyl() == a.to_weyl() * b.to_weyl()


def test_delta_squared_central():
    for T in ("A", "B", "G"):
        W = make_system(T, 2)
        B = BraidGroup.of(W)
        d2 = B.delta(2)
        for i in range(2):
            g = B.generator(i)
            assert g * d2 == d2 * g


def test_embed_hat_injective():
    for W in (make_system("A", 3), make_system("B", 3)):
        images = {embed_hat(w) for w in W.elements()}
        assert len(images) == W.order()


def test_left_divisibility():
    W = make_system("A", 2)
    B = BraidGroup.of(W)
    s1, s2 = B.generator(0), B.generator(1)
    a = B.from_positive_word([0, 1, 1])
    assert left_divisible(a, B.identity) == a
    assert left_divisible(B.delta() * s1, B.delta()) == s1
    assert left_divisible(s2, s1) is None


def test_good_elements():
    A1 = make_system("A", 1)
    res = good_element_check(A1.generator(0))
    assert res["ok"] and res["e"] == 2 and res["z"] == BraidGroup.of(A1).generator(0)
    A2 = make_system("A", 2)
    B = BraidGroup.of(A2)
    res = good_element_check(A2.evaluate([0, 1]))
    assert res["ok"] and res["e"] == 3 and res["z"] == B.delta()
    # projection: w w^• ... = 1 and w0 * image(z) equals the image of the product
    assert res["product"].to_weyl() == A2.identity
    assert A2.longest_element() * res["z"].to_weyl() == res["product"].to_weyl()


def test_shuffles_preserve_normal_form():
    W = make_system("D", 4)
    B = BraidGroup.of(W)
    rng = random.Random(5)
    for _ in range(200):
        word = [rng.randrange(4) for _ in range(10)]
        assert B.from_positive_word(random_braid_shuffle(W, word, 10, rng)) == B.from_positive_word(word)


def test_literals():
    W = make_system("A", 2)
    a = parse_braid(W, "1.2.-1")
    B = BraidGroup.of(W)
    assert a == B.generator(0) * B.generator(1) * B.generator(0, -1)
    assert parse_braid(W, "e").is_identity


def test_e8_examples():
    res = e8_word_checks()
    assert res["pass"]
    assert (res["l(w)"], res["l(x)"], res["l(u)"], res["l(u^2)"], res["order(u^2)"]) == (18, 17, 8, 16, 15)
    assert res["s2x^7=w0 (braid)"] is True
