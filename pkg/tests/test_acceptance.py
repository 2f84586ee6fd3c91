"""The ten acceptance criteria, each at its stated tolerance and time limit.

Run under pytest for a per-criterion summary, or directly
(``python tests/test_acceptance.py``) for one pass/fail line per criterion.
"""
from __future__ import annotations

import random
import sys
import time

from weylkit.braid import (BraidGroup, e8_word_checks, find_good_element, good_element_check,
                           random_braid_shuffle)
from weylkit.conj import (all_bullet_classes, bullet_class, classical_element, classical_generators,
                          classical_w, d4_example, generated_subgroup, is_abelian, is_bullet_elliptic,
                          partitions, stabilizer)
from weylkit.coxeter import make_system
from weylkit.finfield import make_field
from weylkit.flagvar import (SLn, isotropy_check, n_prime_sl2, sigma_identity_suite, torus_order_formula,
                             torus_order_q1, ustar_action_orbits, verify_count_identity)
from weylkit.param import (CyclicPair, ParamError, dimension_formula, free_variables, gram_random, gram_verify,
                           mu, orbit_equivalent, perturbation_probe, random_sl, tau)
from weylkit.paths import (Path, apply_moves, braid_of_path, builtin_paths, builtin_target, equivalence_search,
                           gamma_graph, is_connected, make_path, tau_image, verify_stabilizer_image, z_of_path)


# -- criterion bodies: each returns (pass, note) ---------------------------------------


def criterion_1():
    ex = d4_example()
    W, w = ex.system, ex.w
    C = bullet_class(w)
    i, j, k = ex.i, ex.j, ex.k
    x = ex.element([0, i, 0, j, 0, k])
    st = stabilizer(w)
    P = builtin_paths("d4", W)
    a, b, c = P["iota"], P["iota'"], P["iota''"]
    target = make_path(w, ex.word([i, 0, j, 0, k, 0]))
    rewrites = []
    for combo in ((c, a, b), (a, b, c), (b, c, a)):
        p = combo[0] + combo[1] + combo[2]
        mv = equivalence_search(p, target, 10)
        rewrites.append(mv is not None and apply_moves(p, mv).steps == target.steps)
    checks = {
        "size 12": C.size == 12,
        "length 6": all(y.length == 6 for y in C.elements),
        "order 4": all(W.order_of(y) == 4 for y in C.elements),
        "C = C_min": len(C.c_min) == 12,
        "cl": W.left_descents(x) == frozenset(ex.word([0, i])),
        "car": W.right_descents(x) == frozenset(ex.word([j, k])),
        "|W_w| = 16": st.order == 16,
        "nonabelian": not is_abelian(st.elements),
        "poincare": st.poincare() == [1, 0, 1, 0, 1, 0, 10, 0, 1, 0, 1, 0, 1],
        "z-values": (z_of_path(a), z_of_path(b), z_of_path(c)) == (ex.alpha, ex.beta, ex.gamma),
        "products": ex.gamma * ex.alpha * ex.beta == w == ex.alpha * ex.beta * ex.gamma == ex.beta * ex.gamma * ex.alpha,
        "rewriting": all(rewrites),
        "tau surjective": tau_image(w, C).elements == frozenset(st.elements),
    }
    bad = [k for k, v in checks.items() if not v]
    return not bad, ", ".join(bad)


GAMMA_SYSTEMS = [("A", 1, None), ("A", 2, None), ("A", 3, None), ("A", 4, None), ("B", 2, None),
                 ("B", 3, None), ("B", 4, None), ("D", 4, None),
                 ("A", 2, "flip"), ("A", 3, "flip"), ("A", 4, "flip")]

# non-elliptic classes whose graph (edges w -> s_i w s_i•, i in cl(w)) is disconnected;
# the connectivity theorem is stated for elliptic classes only
KNOWN_DISCONNECTED = {
    "A2": ["1"], "A3": ["1", "1.2"], "A4": ["1", "1.2", "1.3", "1.2.3", "1.2.4"],
    "B3": ["1"], "B4": ["1", "1.2", "1.4"], "D4": ["1", "1.2"],
}


def gamma_scan():
    elliptic_bad, disconnected = [], {}
    for T, r, b in GAMMA_SYSTEMS:
        W = make_system(T, r, b)
        for C in all_bullet_classes(W):
            if is_connected(gamma_graph(C)):
                continue
            name = W.format_word(C.representative.word())
            if is_bullet_elliptic(C):
                elliptic_bad.append((W.name, name))
            else:
                disconnected.setdefault(W.name, []).append(name)
    return elliptic_bad, disconnected


def criterion_2():
    elliptic_bad, disconnected = gamma_scan()
    n = sum(len(v) for v in disconnected.values())
    return not elliptic_bad, f"all elliptic classes connected; {n} non-elliptic classes disconnected (outside the theorem)"


TAU_SYSTEMS = [("A", 1, None), ("A", 2, None), ("A", 3, None), ("A", 4, None), ("B", 2, None), ("B", 3, None),
               ("B", 4, None), ("C", 3, None), ("C", 4, None), ("D", 4, None),
               ("A", 2, "flip"), ("A", 3, "flip"), ("A", 4, "flip"), ("D", 4, "flip"), ("D", 4, "triality")]


def criterion_3():
    rows = []
    for T, r, b in TAU_SYSTEMS:
        W = make_system(T, r, b)
        for C in all_bullet_classes(W):
            if is_bullet_elliptic(C):
                rows.append((W.name, W.format_word(C.representative.word()), verify_stabilizer_image(C)["holds"]))
    bad = [r for r in rows if not r[2]]
    return not bad, f"{len(rows)} elliptic classes" + (f", failing {bad}" if bad else "")


def _nontrivial_cycles(perm):
    base = min(perm)
    seen, out = set(), []
    for s in range(len(perm)):
        L, x = 0, s
        while x not in seen:
            seen.add(x)
            x = perm[x] - base
            L += 1
        if L > 1:
            out.append(L)
    return out


def classical_suite(nmax: int = 5) -> list:
    bad = []
    for n in range(1, nmax + 1):
        for p in partitions(n):
            s = len(p)
            w, fs = classical_w(p, "BC")
            W = w.system
            if w.length != sum(f.length for f in fs) or any(x * y != y * x for x in fs for y in fs):
                bad.append(("additive", p))
            if any(_nontrivial_cycles(W.to_permutation(f)) != [2 * pr] for f, pr in zip(fs, p)):
                bad.append(("cycles", p))
            gens = [g for _, g in classical_generators(p, "BC", W)]
            if generated_subgroup(gens) != frozenset(stabilizer(w).elements):
                bad.append(("generators", p))
            for r in range(1, s + 1):
                P = builtin_paths("bn", W, p, r)
                if not (P.is_valid() and P.end == w and z_of_path(P) == builtin_target("bn", p, r, W)):
                    bad.append(("iota", p, r))
                if r < s and p[r - 1] == p[r]:
                    P = builtin_paths("bn_h", W, p, r)
                    h = builtin_target("bn_h", p, r, W)
                    if not (P.is_valid() and P.end == w and z_of_path(P) == h):
                        bad.append(("iota'", p, r))
                    wr = classical_element(p, f"w{r}", "BC", W)
                    wr1 = classical_element(p, f"w{r + 1}", "BC", W)
                    if h * wr1 * h != wr:
                        bad.append(("h w h", p, r))
                    for t in range(1, s + 1):
                        if t not in (r, r + 1):
                            wt = classical_element(p, f"w{t}", "BC", W)
                            if h * wt != wt * h:
                                bad.append(("h commutes", p, r, t))
            if s % 2 == 0 and n >= 2:
                w, _ = classical_w(p, "D")
                W = w.system
                gens = [g for _, g in classical_generators(p, "D", W)]
                C = bullet_class(w)
                if not (is_bullet_elliptic(C) and w in C.c_min):
                    bad.append(("D elliptic", p))
                if generated_subgroup(gens) != frozenset(stabilizer(w).elements):
                    bad.append(("D generators", p))
                for r in range(1, s + 1):
                    P = builtin_paths("dn", W, p, r)
                    if not (P.is_valid() and z_of_path(P) == builtin_target("dn", p, r, W)):
                        bad.append(("D iota''", p, r))
                    if r < s and p[r - 1] == p[r]:
                        P = builtin_paths("dn_h", W, p, r)
                        if not (P.is_valid() and z_of_path(P) == builtin_target("dn_h", p, r, W)):
                            bad.append(("D iota'", p, r))
                if p[-1] == p[-2]:
                    P = builtin_paths("dn_tilde", W, p)
                    if not (P.is_valid() and z_of_path(P) == builtin_target("dn_tilde", p, None, W)):
                        bad.append(("D tilde-iota", p))
    return bad


def displayed_specializations() -> list:
    """The p = 1, 2, 3 forms of iota'_r against the builtin path."""
    bad = []
    for p, r in (((1, 1), 1), ((2, 2), 1), ((3, 3), 1)):
        w, _ = classical_w(p, "BC")
        W = w.system
        a = sum(p) - sum(p[r:])
        pr = p[r - 1]
        disp = {1: [(a, 1)],
                2: [(a, 1), (a + 1, 1), (a - 1, 1), (a, -1)],
                3: [(a, 1), (a + 1, 1), (a - 1, 1), (a + 2, 1), (a, 1), (a - 2, 1), (a - 1, -1), (a + 1, -1), (a, -1)]}[pr]
        Q = Path(w, tuple((W.index(str(x)), e) for x, e in disp))
        built = builtin_paths("bn_h", W, p, r)
        if not (Q.is_valid() and Q.end == w and Q.steps == built.steps and z_of_path(Q) == builtin_target("bn_h", p, r, W)):
            bad.append(p)
    return bad


def criterion_4():
    bad = classical_suite(5) + displayed_specializations()
    return not bad, ", ".join(map(str, bad[:5]))


def shuffle_trials(trials: int = 10_000, seed: int = 0) -> tuple[int, int]:
    """Normal forms of a positive word and of a braid-move shuffle of it; counts only moved words."""
    rng = random.Random(seed)
    systems = [make_system(T, r) for T, r in [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3),
                                                ("B", 4), ("D", 4)]]
    done = bad = 0
    while done < trials:
        W = rng.choice(systems)
        B = BraidGroup.of(W)
        word = [rng.randrange(W.rank) for _ in range(rng.randint(2, 12))]
        sh = random_braid_shuffle(W, word, rng.randint(1, 20), rng)
        if sh == word:
            continue
        done += 1
        bad += B.from_positive_word(word) != B.from_positive_word(sh)
    return done, bad


def criterion_5(budget_s: float = 600.0):
    notes = {}
    done, bad = shuffle_trials()
    notes["shuffles"] = bad == 0
    good = []
    for T, r, b in [("A", 1, None), ("A", 2, None), ("A", 3, None), ("B", 2, None), ("B", 3, None),
                    ("A", 2, "flip"), ("A", 3, "flip")]:
        W = make_system(T, r, b)
        for C in all_bullet_classes(W):
            if is_bullet_elliptic(C):
                good.append(good_element_check(C.representative)["ok"] or find_good_element(C)["ok"])
    notes["good elements"] = all(good)
    A2 = make_system("A", 2)
    B = BraidGroup.of(A2)
    res = good_element_check(A2.evaluate([0, 1]))
    cube = B.power(B.from_positive_word([0, 1]), 3)
    notes["(s1s2)^3 = D^2"] = res["ok"] and res["e"] == 3 and cube == B.delta(2) and res["z"] == B.delta()
    ex = d4_example()
    P = builtin_paths("d4", ex.system)
    Bd = BraidGroup.of(ex.system)
    rhs = Bd.from_positive_word(ex.word([ex.i, 0, ex.j, 0, ex.k, 0]))
    a, b2, c = (braid_of_path(P[k]) for k in ("iota", "iota'", "iota''"))
    notes["D4 relation in braid group"] = c * a * b2 == rhs == a * b2 * c == b2 * c * a
    e8 = e8_word_checks(budget_s)
    notes["E8"] = e8["pass"]
    unknown = e8["s2x^7=w0 (braid)"] is None
    bad_notes = [k for k, v in notes.items() if not v]
    note = f"{done} shuffles"
    if unknown:
        note += "; E8 braid identity unknown (budget)"
    if bad_notes:
        note += "; failing " + ", ".join(bad_notes)
    return not bad_notes, note


def criterion_6():
    bad = []
    rows = 0
    for n, q, s in [(2, 2, 1), (2, 2, 2), (2, 3, 1), (2, 3, 2), (3, 2, 1)]:
        W = SLn.get(n).W
        for a in W.elements():
            for b in W.elements():
                rows += 1
                r = verify_count_identity(n, q, a, b, s)
                if not r["pass"]:
                    bad.append((n, q, s, r["w"], r["w'"]))
    # SL_3, q = 2, s = 2: spot pairs (the whole table is computed at once)
    W = SLn.get(3).W
    spots = [(W.identity, W.identity), (W.evaluate([0]), W.evaluate([0])), (W.evaluate([0, 1]), W.evaluate([1, 0])),
             (W.longest_element(), W.longest_element()), (W.evaluate([0, 1]), W.longest_element())]
    for a, b in spots:
        rows += 1
        r = verify_count_identity(3, 2, a, b, 2)
        if not r["pass"]:
            bad.append((3, 2, 2, r["w"], r["w'"]))
    s_ = SLn.get(2).W.evaluate([0])
    hand = verify_count_identity(2, 2, s_, s_, 1)
    if not (hand["N_s"] == 30 and hand["group_order"] == 6 and hand["hecke_value"] == 5):
        bad.append("SL2 hand instance")
    return not bad, f"{rows} pairs" + (f", failing {bad[:3]}" if bad else "")


def criterion_7():
    res = sigma_identity_suite(3, 2, [1, 2, 3])
    checked = sum(v["checked"] for v in res["identities"].values())
    braid = sigma_identity_suite(4, 2, [2], braid_only=True)
    bchecked = sum(v["checked"] for v in braid["identities"].values())
    ok = res["pass"] and braid["pass"] and checked > 0 and bchecked > 0
    return ok, f"SL3: {checked} point checks; SL4 braid cases: {bchecked}"


def criterion_8():
    notes = {}
    r2 = isotropy_check(2, 2, [1, 2, 3])
    r3 = isotropy_check(3, 2, [1, 2, 3])
    notes["free action / stabilizers"] = r2["pass"] and r3["pass"]
    notes["nonempty"] = any(l["x_tilde_points"] for l in r3["levels"]) and any(l["x_tilde_points"] for l in r2["levels"])
    G2 = SLn.get(2)
    s = G2.coxeter_element()
    f = torus_order_formula(G2, s)
    notes["|T*| = q+1"] = str(f) == "q+1" and f(2) == 3 and r2["levels"][0]["torus_order"] == 3
    notes["q=1 value 2"] = f(1) == 2 == torus_order_q1(G2, s)
    orb = [ustar_action_orbits(n, 2, m) for n in (2, 3) for m in (1, 2)]
    notes["U*_w action free"] = all(o["free"] for o in orb)
    notes["orbit correspondence"] = all(o["pass"] for o in orb) and ustar_action_orbits(3, 2, 3)["pass"]
    bad = [k for k, v in notes.items() if not v]
    return not bad, ", ".join(bad)


def criterion_9(samples: int = 1000):
    bad = 0
    count = 0
    for p in (5, 7):
        F = make_field(p)
        for n in (2, 3, 4):
            rng = random.Random(100 * p + n)
            for _ in range(samples):
                a = tuple(rng.randrange(p) for _ in range(n - 1))
                P = tau(F, a)
                count += 1
                if F.det(P.g) != 1 or mu(P) != a:
                    bad += 1
                x = random_sl(F, n, rng)
                P2 = CyclicPair(F, F.matprod(x, P.g, F.inverse(x)), F.matvec(x, P.v))
                if mu(P2) != a or orbit_equivalent(P, P2) is None:
                    bad += 1
                b = tuple(rng.randrange(p) for _ in range(n - 1))
                if (orbit_equivalent(P, tau(F, b)) is not None) != (a == b):
                    bad += 1
                # a random pair with a cyclic vector: mu must be well defined or raise cleanly
                g = random_sl(F, n, rng)
                v = tuple(rng.randrange(p) for _ in range(n))
                try:
                    mu(CyclicPair(F, g, v))
                except ParamError:
                    pass
    return bad == 0, f"{count} coefficient vectors"


GRAM_CASES = [("symplectic", (1,)), ("symplectic", (2,)), ("symplectic", (1, 1)), ("symplectic", (2, 1)),
              ("even-orthogonal", (1, 1))]


def criterion_10(seeds: int = 1000):
    expected = {("symplectic", (1,)): 1, ("symplectic", (2,)): 2, ("symplectic", (1, 1)): 4,
                ("symplectic", (2, 1)): 5, ("even-orthogonal", (1, 1)): 2}
    bad = []
    modes = [(make_field(7), 1, "GF(7)"), (make_field(7, 2), 1, "GF(49), q=7"), (make_field(7), None, "q=1")]
    for form, parts in GRAM_CASES:
        if len(free_variables(form, parts)) != dimension_formula(form, parts) or \
                dimension_formula(form, parts) != expected[(form, parts)]:
            bad.append(("count", form, parts))
        for F, qexp, label in modes:
            for seed in range(seeds):
                rng = random.Random(seed)
                gs = gram_random(form, parts, F, rng, qexp=qexp)
                if not gram_verify(gs)["pass"] or not perturbation_probe(gs, rng)["detected"]:
                    bad.append((form, parts, label, seed))
                    break
            if not gram_verify(gram_random(form, parts, F, random.Random(0), qexp=qexp, zero=True))["pass"]:
                bad.append(("zero", form, parts, label))
    return not bad, f"{len(GRAM_CASES)} configurations x 3 field modes x {seeds} seeds" + (f", failing {bad[:3]}" if bad else "")


CRITERIA = {1: (criterion_1, 5), 2: (criterion_2, 60), 3: (criterion_3, 300), 4: (criterion_4, None),
            5: (criterion_5, None), 6: (criterion_6, 600), 7: (criterion_7, None), 8: (criterion_8, None),
            9: (criterion_9, 30), 10: (criterion_10, 120)}


def _run(number: int):
    fn, limit = CRITERIA[number]
    t0 = time.monotonic()
    ok, note = fn()
    secs = time.monotonic() - t0
    if limit is not None and secs > limit:
        ok = False
        note = f"{note}; exceeded {limit} s"
    return ok, secs, note


# -- pytest entry points ----------------------------------------------------------------


def _check(number, record_criterion):
    ok, secs, note = _run(number)
    record_criterion(number, ok, secs, note)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({secs:.1f} s) {note}")
    assert ok, note


def test_criterion_1_d4_suite(record_criterion):
    _check(1, record_criterion)


def test_criterion_2_gamma_connectivity(record_criterion):
    _check(2, record_criterion)


def test_criterion_2_nonelliptic_disconnections_are_known():
    _, disconnected = gamma_scan()
    assert disconnected == KNOWN_DISCONNECTED


def test_criterion_3_tau_image(record_criterion):
    _check(3, record_criterion)


def test_criterion_4_classical_generators(record_criterion):
    _check(4, record_criterion)


def test_criterion_5_braid_suite(record_criterion):
    _check(5, record_criterion)


def test_criterion_6_counting_identity(record_criterion):
    _check(6, record_criterion)


def test_criterion_6_orbit_count_sl2():
    # the h-sum orbit count equals n_{w,w'}(q) for SL_2 over prime fields
    from weylkit.hecke import n_trace
    W = SLn.get(2).W
    for q in (2, 3, 5):
        for a in W.elements():
            for b in W.elements():
                assert n_prime_sl2(q, a, b) == n_trace(a, b)(q)


def test_criterion_7_sigma_identities(record_criterion):
    _check(7, record_criterion)


def test_criterion_8_finite_shadows(record_criterion):
    _check(8, record_criterion)


def test_criterion_9_cyclic_parametrization(record_criterion):
    _check(9, record_criterion)


def test_criterion_10_gram_elimination(record_criterion):
    _check(10, record_criterion)


if __name__ == "__main__":
    failed = 0
    for k in [int(a) for a in sys.argv[1:]] or CRITERIA:
        ok, secs, note = _run(k)
        failed += not ok
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  ({secs:.1f} s)  {note}", flush=True)
    sys.exit(1 if failed else 0)
