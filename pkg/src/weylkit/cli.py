"""Command-line front end: every harness emits JSON lines, one record per check.

Each record carries ``status`` in {pass, fail, unknown, info}.  The exit code is
1 if any record failed (or, with ``--strict``, came back unknown), else 0.
"""
from __future__ import annotations

import argparse
import json
import random
import signal
import sys
import time
from contextlib import contextmanager
from typing import Callable, Iterator

from .braid import e8_word_checks, find_good_element
from .conj import all_bullet_classes, bullet_class, class_report, d4_example, is_bullet_elliptic
from .coxeter import CoxeterSystem, make_system
from .finfield import make_field
from .hecke import HeckeAlgebra

__all__ = ["main", "build_parser", "run"]


class BudgetExceeded(Exception):
    pass


@contextmanager
def _budget(ms: int | None):
    """Hard cap via SIGALRM where available; otherwise no cap."""
    if not ms or not hasattr(signal, "setitimer"):
        yield
        return

    def handler(signum, frame):
        raise BudgetExceeded()

    try:
        old = signal.signal(signal.SIGALRM, handler)
    except ValueError:  # not in the main thread
        yield
        return
    signal.setitimer(signal.ITIMER_REAL, ms / 1000.0)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _status(ok) -> str:
    if ok is None:
        return "unknown"
    return "pass" if ok else "fail"


def _system(args) -> CoxeterSystem:
    return make_system(args.type, args.rank, args.bullet)


def _classes(args, W: CoxeterSystem):
    if args.word:
        return [bullet_class(W.element(args.word))]
    return all_bullet_classes(W)


def _type_a_n(args) -> int:
    if args.type.upper() != "A":
        raise SystemExit("this command needs --type A (SL_n with n = rank + 1)")
    return args.rank + 1


def _parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


# -- commands ---------------------------------------------------------------------


def cmd_group(args) -> Iterator[dict]:
    W = _system(args)
    yield {"check": "group", "system": W.name, "rank": W.rank, "order": W.order(),
           "reflections": W.npos, "bullet_order": W.bullet_order(),
           "w0_length": W.longest_element().length, "status": "info"}


def cmd_classes(args) -> Iterator[dict]:
    W = _system(args)
    for C in _classes(args, W):
        yield {"check": "class", "system": W.name, **class_report(C), "status": "info"}


def cmd_gamma(args) -> Iterator[dict]:
    from .paths import gamma_graph, is_connected

    W = _system(args)
    for C in _classes(args, W):
        ell = is_bullet_elliptic(C)
        conn = is_connected(gamma_graph(C))
        rec = {"check": "gamma-connected", "system": W.name,
               "representative": W.format_word(C.representative.word()),
               "c_min_size": len(C.c_min), "elliptic": ell, "connected": conn}
        # connectivity is a theorem only for elliptic classes
        rec["status"] = _status(conn) if ell else "info"
        yield rec


def cmd_stabilizer_image(args) -> Iterator[dict]:
    from .paths import builtin_paths, verify_stabilizer_image, z_of_path

    W = _system(args)
    for C in _classes(args, W):
        if not is_bullet_elliptic(C):
            continue
        res = verify_stabilizer_image(C)
        yield {"check": "tau-image", "system": W.name,
               "representative": W.format_word(C.representative.word()),
               "bases": len(res["per_base"]),
               "stabilizer_order": res["per_base"][0]["stabilizer_order"],
               "status": _status(res["holds"])}
    if W.name == "D4" and not args.word:
        paths = builtin_paths("d4", W)
        ex = paths["example"]
        got = {k: z_of_path(paths[k]) for k in ("iota", "iota'", "iota''")}
        want = {"iota": ex.alpha, "iota'": ex.beta, "iota''": ex.gamma}
        yield {"check": "d4-certificates",
               "z": {k: W.format_word(v.word()) for k, v in got.items()},
               "status": _status(got == want)}


def cmd_goodelt(args) -> Iterator[dict]:
    W = _system(args)
    if W.name == "E8" and not args.word:
        res = e8_word_checks(budget_s=(args.budget_ms or 600000) / 1000.0)
        yield {"check": "e8-identities", **res, "status": _status(res["pass"])}
        return
    B = None
    for C in _classes(args, W):
        if not is_bullet_elliptic(C):
            continue
        res = find_good_element(C)
        rec = {"check": "good-element", "system": W.name,
               "representative": W.format_word(C.representative.word()), "status": _status(res["ok"])}
        if res["ok"]:
            B = res["z"].group
            rec.update({"witness": W.format_word(res["witness"].word()), "e": res["e"], "z": B.format(res["z"])})
        yield rec


def cmd_hecke(args) -> Iterator[dict]:
    W = _system(args)
    H = HeckeAlgebra(W)
    if args.word:
        pairs = [(W.element(args.word), W.element(args.word2 or args.word))]
    else:
        elts = W.elements()
        pairs = [(a, b) for a in elts for b in elts]
    for a, b in pairs:
        poly = H.n_trace(a, b)
        rec = {"check": "hecke-trace", "system": W.name, "w": W.format_word(a.word()) or "e",
               "w'": W.format_word(b.word()) or "e", "n": str(poly), "status": "info"}
        if args.q:
            rec["value"] = int(poly(args.q))
        yield rec


def _pairs(args, W: CoxeterSystem):
    if args.word:
        return [(W.element(args.word), W.element(args.word2 or args.word))]
    elts = W.elements()
    return [(a, b) for a in elts for b in elts]


def cmd_count(args) -> Iterator[dict]:
    from .flagvar import SLn, fB_table

    n = _type_a_n(args)
    G = SLn.get(n)
    table, order = fB_table(n, args.q, args.s)
    for a, b in _pairs(args, G.W):
        yield {"check": "count", "type": f"A{n - 1}", "n": n, "q": args.q, "s": args.s,
               "w": G.name(a), "w'": G.name(b), "N_s": table[(a, b)], "group_order": order,
               "status": "info"}


def cmd_count_pair(args) -> Iterator[dict]:
    from .flagvar import SLn, verify_count_identity

    n = _type_a_n(args)
    G = SLn.get(n)
    for a, b in _pairs(args, G.W):
        res = verify_count_identity(n, args.q, a, b, args.s)
        ok = res.pop("pass")
        yield {"check": "count-pair", **res, "status": _status(ok)}


def cmd_sigma(args) -> Iterator[dict]:
    from .flagvar import sigma_identity_suite

    n = _type_a_n(args)
    levels = range(1, args.depth + 1)
    res = sigma_identity_suite(n, args.q, levels, braid_only=n > 3)
    for name, tally in res["identities"].items():
        yield {"check": "sigma-identity", "n": n, "q": args.q, "levels": list(levels), "identity": name,
               **tally, "status": _status(tally["failed"] == 0)}


def cmd_isotropy(args) -> Iterator[dict]:
    from .flagvar import isotropy_check, ustar_action_orbits

    n = _type_a_n(args)
    res = isotropy_check(n, args.q, range(1, args.depth + 1))
    yield {"check": "free-action", **res, "status": _status(res["pass"])}
    for m in range(1, min(args.depth, 2) + 1):
        orb = ustar_action_orbits(n, args.q, m)
        ok = orb.pop("pass")
        yield {"check": "ustar-action", "n": n, "q": args.q, "m": m, **orb, "status": _status(ok)}


def cmd_param(args) -> Iterator[dict]:
    from .param import CyclicPair, mu, orbit_equivalent, random_sl, tau

    F = make_field(args.q)
    n = args.rank + 1
    rng = random.Random(args.seed)
    bad = 0
    for _ in range(args.seeds):
        a = tuple(rng.randrange(F.size) for _ in range(n - 1))
        P = tau(F, a)
        x = random_sl(F, n, rng)
        P2 = CyclicPair(F, F.matprod(x, P.g, F.inverse(x)), F.matvec(x, P.v))
        b = tuple(rng.randrange(F.size) for _ in range(n - 1))
        same = orbit_equivalent(P, P2) is not None
        diff = orbit_equivalent(P, tau(F, b)) is not None
        if mu(P) != a or mu(P2) != a or not same or diff != (a == b):
            bad += 1
    yield {"check": "cyclic-parametrization", "n": n, "field": F.size, "samples": args.seeds,
           "failures": bad, "status": _status(bad == 0)}


def cmd_gram(args) -> Iterator[dict]:
    from .param import dimension_formula, free_variables, gram_random, gram_verify, perturbation_probe

    parts = _parse_int_list(args.parts)
    p, k = args.q, args.field_degree
    F = make_field(p, k)
    qexp = None if args.twist_free else 1
    nfree = len(free_variables(args.form, parts))
    dim = dimension_formula(args.form, parts)
    yield {"check": "gram-free-count", "form": args.form, "parts": parts, "free": nfree, "dimension": dim,
           "status": _status(nfree == dim)}
    passed = detected = literal = 0
    for seed in range(args.seed, args.seed + args.seeds):
        rng = random.Random(seed)
        gs = gram_random(args.form, parts, F, rng, qexp=qexp)
        rep = gram_verify(gs)
        passed += rep["pass"]
        literal += rep["literal_i_holds"]
        detected += perturbation_probe(gs, rng)["detected"]
    yield {"check": "gram-roundtrip", "form": args.form, "parts": parts, "field": F.size,
           "twist_free": args.twist_free, "seeds": args.seeds, "passed": passed,
           "perturbations_detected": detected, "literal_i_consistent": literal,
           "status": _status(passed == args.seeds and detected == args.seeds)}


COMMANDS: dict[str, Callable] = {
    "group": cmd_group,
    "classes": cmd_classes,
    "gamma": cmd_gamma,
    "stabilizer-image": cmd_stabilizer_image,
    "good-elt": cmd_goodelt,
    "hecke-trace": cmd_hecke,
    "count": cmd_count,
    "count-pair": cmd_count_pair,
    "sigma-check": cmd_sigma,
    "isotropy": cmd_isotropy,
    "param": cmd_param,
    "gram": cmd_gram,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weylkit", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--type", default="A", help="Cartan type letter")
    ap.add_argument("--rank", type=int, default=2)
    ap.add_argument("--bullet", default="identity", help="identity | flip | triality")
    ap.add_argument("--word", help="class representative / element, dotted labels")
    ap.add_argument("--word2", help="second element for pair commands")
    ap.add_argument("--q", type=int, default=2, help="field characteristic / size")
    ap.add_argument("--s", type=int, default=1, help="Frobenius power")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--seeds", type=int, default=100, help="number of random samples")
    ap.add_argument("--depth", type=int, default=2, help="field levels / search depth")
    ap.add_argument("--budget-ms", type=int, default=None, help="hard time cap for the command")
    ap.add_argument("--strict", action="store_true", help="treat unknown as failure")
    ap.add_argument("--form", default="symplectic", help="symplectic | even-orthogonal | odd-orthogonal")
    ap.add_argument("--parts", default="1", help="part sizes, e.g. 2,1")
    ap.add_argument("--field-degree", type=int, default=2, help="k in GF(q^k) for the gram command")
    ap.add_argument("--twist-free", action="store_true", help="gram: q=1 mode, all Frobenius twists trivial")
    ap.add_argument("--timestamp", action="store_true", help="add a wall-clock field to each record")
    out = ap.add_mutually_exclusive_group()
    out.add_argument("--json", dest="fmt", action="store_const", const="json", default="json")
    out.add_argument("--table", dest="fmt", action="store_const", const="table")
    return ap


def _render_table(records: list[dict]) -> str:
    keys: list[str] = []
    for r in records:
        keys += [k for k in r if k not in keys]
    rows = [[_cell(r.get(k, "")) for k in keys] for r in records]
    widths = [max(len(k), *(len(row[i]) for row in rows)) for i, k in enumerate(keys)] if rows else []
    lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in rows]
    return "\n".join(lines)


def _cell(v) -> str:
    return v if isinstance(v, str) else json.dumps(v, sort_keys=True)


def run(argv: list[str] | None = None, out=None) -> int:
    args = build_parser().parse_args(argv)
    out = out or sys.stdout
    records: list[dict] = []
    start = time.monotonic()
    try:
        with _budget(args.budget_ms):
            for rec in COMMANDS[args.command](args):
                records.append(rec)
    except BudgetExceeded:
        records.append({"check": args.command, "status": "unknown",
                        "reason": f"budget of {args.budget_ms} ms exceeded"})
    if args.timestamp:
        for r in records:
            r["elapsed_s"] = round(time.monotonic() - start, 3)
    if args.fmt == "table":
        out.write(_render_table(records) + "\n")
    else:
        for r in records:
            out.write(json.dumps(r, sort_keys=True, default=str) + "\n")
    failed = any(r["status"] == "fail" for r in records)
    unknown = any(r["status"] == "unknown" for r in records)
    return 1 if failed or (args.strict and unknown) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
