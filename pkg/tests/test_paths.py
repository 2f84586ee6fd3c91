import pytest

from weylkit.braid import BraidGroup
from weylkit.conj import bullet_class, d4_example, stabilizer
from weylkit.coxeter import make_system
from weylkit.paths import (MOVE_KINDS, Path, PathError, apply_move, apply_moves, braid_of_path, builtin_paths,
                           equivalence_search, format_path, free_reduce, gamma_graph, is_connected, make_path,
                           parse_path, reduced_word_path, tau_image, verify_stabilizer_image, z_of_path)


@pytest.fixture(scope="module")
def d4():
    ex = d4_example()
    return ex, builtin_paths("d4", ex.system)


def test_gamma_edges_d4(d4):
    ex, _ = d4
    W = ex.system
    G = gamma_graph(bullet_class(ex.w))
    assert len(G.vertices) == 12
    x = ex.element([0, ex.i, 0, ex.j, 0, ex.k])
    y = ex.element([ex.i, 0, ex.j, 0, ex.k, 0])
    assert (x, ex.idx(0), y) in G.edges
    for v, i, v2 in G.edges:
        assert v2 == W.twisted_move(i, v)
        assert i in W.left_descents(v)
    assert is_connected(G)


def test_gamma_small():
    A2 = make_system("A", 2)
    G = gamma_graph(bullet_class(A2.evaluate([0, 1])))
    assert len(G.vertices) == 2 and is_connected(G)
    A1 = make_system("A", 1)
    assert is_connected(gamma_graph(bullet_class(A1.identity)))


def test_endpoint_formula(d4):
    ex, P = d4
    W = ex.system
    for key in ("iota", "iota'", "iota''"):
        p = P[key]
        z = z_of_path(p)
        assert p.end == z.inverse() * p.base * W.bullet_apply(z)


def test_z_values(d4):
    ex, P = d4
    assert z_of_path(P["iota"]) == ex.alpha
    assert z_of_path(P["iota'"]) == ex.beta
    assert z_of_path(Path(ex.w)) == ex.system.identity


def test_braid_of_path(d4):
    ex, P = d4
    B = BraidGroup.of(ex.system)
    assert braid_of_path(Path(ex.w)).is_identity
    assert braid_of_path(P["iota'"]) == B.from_positive_word(ex.word([ex.j, ex.k]))
    p = P["iota''"]
    assert (braid_of_path(p) * braid_of_path(p.reverse())).is_identity


def test_concatenation_matches_display(d4):
    ex, P = d4
    i, j, k = ex.i, ex.j, ex.k
    cat = P["iota''"] + P["iota"] + P["iota'"]
    shown = [(i, 1), (0, 1), (k, 1), (i, 1), (0, -1), (i, -1), (0, -1), (i, 1), (j, 1), (0, 1), (j, 1), (k, 1)]
    assert cat.steps == tuple((ex.idx(x), e) for x, e in shown)


def test_cancellation_move():
    ex = d4_example()
    p = make_path(ex.w, [(ex.system.format_word([ex.idx(ex.i)]), 1), (ex.system.format_word([ex.idx(ex.i)]), -1)])
    assert p.is_valid()
    assert len(apply_move(p, 0, "i")) == 0
    assert len(free_reduce(p)[0]) == 0
    with pytest.raises(PathError):
        apply_move(p, 0, "iii")


def test_moves_preserve_images(d4):
    ex, P = d4
    p = P["iota''"] + P["iota"] + P["iota'"]
    z, b = z_of_path(p), braid_of_path(p)
    applied = 0
    for k in range(len(p)):
        for kind in MOVE_KINDS:
            try:
                q = apply_move(p, k, kind)
            except PathError:
                continue
            applied += 1
            assert z_of_path(q) == z and braid_of_path(q) == b
    assert applied > 0


def test_equivalence_search_d4(d4):
    ex, P = d4
    a, b, c = P["iota"], P["iota'"], P["iota''"]
    target = make_path(ex.w, [ex.system.format_word([ex.idx(x)]) for x in (ex.i, 0, ex.j, 0, ex.k, 0)])
    for combo in ((c, a, b), (a, b, c), (b, c, a)):
        p = combo[0] + combo[1] + combo[2]
        moves = equivalence_search(p, target, 10)
        assert moves is not None
        assert apply_moves(p, moves).steps == target.steps
    assert equivalence_search(a, a) == []


def test_tau_image_d4_and_w0():
    ex = d4_example()
    assert tau_image(ex.w).order == 16
    assert verify_stabilizer_image(bullet_class(ex.w))["holds"]
    B3 = make_system("B", 3)
    w0 = B3.longest_element()
    img = tau_image(w0)
    assert img.elements == frozenset(stabilizer(w0).elements) == frozenset(B3.elements())


def test_literals_round_trip():
    W = make_system("A", 2)
    w = W.evaluate([0, 1])
    p = parse_path(W, "[1.2; 1]")
    assert p.base == w and p.is_valid()
    assert parse_path(W, format_path(p)).steps == p.steps
    r = reduced_word_path(w)
    assert r.end == W.bullet_apply(w)
