"""Flags, relative position and the X_w point sets for split SL_n over finite fields.

Conventions:

* ``B*`` is the upper triangular Borel, so a flag is ``g B*`` and is stored as
  the canonical column-echelon matrix of ``g`` (pivot = lowest nonzero entry of
  each column, pivots equal to 1, entries of later columns cleared at earlier
  pivot rows).
* A permutation ``pi`` (0-based, ``pi[j]`` = row of the nonzero entry of column
  j) labels the Bruhat cell ``B* pi B*``.  The Weyl element attached to ``pi``
  is the one whose Tits representative has that pattern; ``s_i`` is the block
  ``[[0, 1], [-1, 0]]`` in rows/columns ``i, i+1``.
* A field level is GF(q^m) with ``F`` the q-power Frobenius.  Points of X_w at
  that level are the flags over GF(q^m) with ``rel_pos(B, F(B)) = w``.
* A point of the U*_w-coset space is stored as the canonical representative
  ``g_B t u'`` where ``g_B`` is the canonical flag matrix, ``t`` diagonal and
  ``u'`` unipotent with zeros at the U*_w positions.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from collections import Counter
from functools import lru_cache
from typing import Iterable, Sequence

from .coxeter import CoxeterSystem, SystemError_, WeylElement, make_system
from .finfield import GF, Matrix, make_field
from .hecke import n_trace

__all__ = [
    "FieldLevel", "SLn", "make_level", "make_field",
    "canonical_flag", "enumerate_flags", "bruhat_perm", "rel_pos",
    "frobenius_flag", "frobenius_group", "act", "sl_elements", "sl_order", "rational_group",
    "x_w_points", "psi", "psi_inverse", "sigma", "sigma_scan", "schubert_cell", "sigma_i", "sigma_i_inverse", "T_path",
    "tits_representative", "u_factor", "ustar_positions", "uw_positions", "coset_canonical",
    "in_x_tilde", "x_tilde_points", "psi_tilde", "sigma_tilde", "pi_w",
    "torus_points", "torus_order_formula", "torus_order_q1",
    "fB_count", "fB_table", "verify_count_identity", "n_prime_sl2",
    "isotropy_check", "ustar_action_orbits",
    "reduced_words", "braid_cases", "sigma_identity_suite", "t_path_check",
]


# -- field levels -----------------------------------------------------------


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                break
            return p, e
    raise ValueError(f"{q} is not a prime power")


class FieldLevel:
    """GF(q^m) together with the q-power Frobenius F."""

    def __init__(self, q: int, m: int = 1):
        self.p, self.e = _prime_power(q)
        self.q, self.m = q, m
        self.field: GF = make_field(self.p, self.e * m)
        self.size = q ** m
        self.rational = [a for a in range(self.size) if self.F(a) == a]

    def F(self, a: int, s: int = 1) -> int:
        return self.field.frob(a, self.e * s)

    def frob_matrix(self, A: Matrix, s: int = 1) -> Matrix:
        return self.field.frob_matrix(A, self.e * s)

    def __repr__(self) -> str:
        return f"FieldLevel(q={self.q}, m={self.m})"


@lru_cache(maxsize=None)
def make_level(q: int, m: int = 1) -> FieldLevel:
    return FieldLevel(q, m)


# -- the Weyl group of SL_n as permutations ----------------------------------


def _compose_signed(A, B):
    """Signed permutation product: ``(A B) e_j = sB_j sA_{piB(j)} e_{piA(piB(j))}``."""
    pa, sa = A
    pb, sb = B
    return (tuple(pa[pb[j]] for j in range(len(pb))),
            tuple(sb[j] * sa[pb[j]] for j in range(len(pb))))


class SLn:
    """Type A_{n-1} data tied to matrices: permutations and Tits representatives."""

    _cache: dict[int, "SLn"] = {}

    def __init__(self, n: int):
        if n < 2:
            raise SystemError_("need n >= 2")
        self.n = n
        self.W: CoxeterSystem = make_system("A", n - 1)
        M = self.W.coxeter_matrix
        for i in range(n - 2):
            if M[i][i + 1] != 3:
                raise SystemError_("type A generators are not in chain order")
        ident = (tuple(range(n)), (1,) * n)
        gens = []
        for i in range(n - 1):
            perm = list(range(n))
            perm[i], perm[i + 1] = i + 1, i
            signs = [1] * n
            signs[i] = -1  # column i goes to -e_{i+1}
            gens.append((tuple(perm), tuple(signs)))
        self.signed: dict[WeylElement, tuple] = {}
        for w in self.W.elements():
            cur = ident
            for i in w.word():
                cur = _compose_signed(cur, gens[i])
            self.signed[w] = cur
        self.perm = {w: sp[0] for w, sp in self.signed.items()}
        self.elt = {p: w for w, p in self.perm.items()}
        if len(self.elt) != len(self.perm):
            raise SystemError_("Tits section does not separate elements")
        self._tits: dict = {}

    @classmethod
    def get(cls, n: int) -> "SLn":
        if n not in cls._cache:
            cls._cache[n] = cls(n)
        return cls._cache[n]

    def element(self, w) -> WeylElement:
        if isinstance(w, WeylElement):
            return w
        if isinstance(w, (tuple, list)) and len(w) == self.n and sorted(w) == list(range(self.n)):
            return self.elt[tuple(w)]
        return self.W.element(w)

    def coxeter_element(self) -> WeylElement:
        return self.W.evaluate(range(self.n - 1))

    def name(self, w: WeylElement) -> str:
        return self.W.format_word(w.word()) or "e"


def tits_representative(G: SLn, K: FieldLevel, w: WeylElement) -> Matrix:
    key = (id(K), w)
    hit = G._tits.get(key)
    if hit is None:
        perm, signs = G.signed[w]
        n = G.n
        minus1 = K.field.neg(1)
        rows = [[0] * n for _ in range(n)]
        for j in range(n):
            rows[perm[j]][j] = 1 if signs[j] > 0 else minus1
        hit = G._tits[key] = tuple(tuple(r) for r in rows)
    return hit


# -- flags --------------------------------------------------------------------


def canonical_flag(K: FieldLevel, g: Matrix) -> Matrix:
    """Canonical column-echelon representative of ``g B*``."""
    Fd = K.field
    sub, mul, inv = Fd.sub_t, Fd.mul_t, Fd.inv_t
    n = len(g)
    cols: list[list[int]] = []
    pivots: list[int] = []
    for j in range(n):
        col = [g[i][j] for i in range(n)]
        for k, r in enumerate(pivots):
            c = col[r]
            if c:
                ck = cols[k]
                col = [sub[x][mul[c][y]] if y else x for x, y in zip(col, ck)]
        r = max((i for i in range(n) if col[i]), default=None)
        if r is None:
            raise ZeroDivisionError("singular matrix has no flag")
        c = inv[col[r]]
        if c != 1:
            col = [mul[c][x] for x in col]
        cols.append(col)
        pivots.append(r)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


_flag_cache: dict = {}


def enumerate_flags(K: FieldLevel | GF, n: int) -> list[Matrix]:
    """All canonical flag matrices, grouped by pivot permutation (deterministic order)."""
    Fd = K.field if isinstance(K, FieldLevel) else K
    key = (id(Fd), n)
    if key in _flag_cache:
        return _flag_cache[key]
    out = []
    for perm in itertools.permutations(range(n)):
        out.extend(_cell(Fd, perm))
    _flag_cache[key] = out
    return out


def _cell(Fd: GF, perm: Sequence[int]) -> list[Matrix]:
    n = len(perm)
    free = [(i, j) for j in range(n) for i in range(perm[j]) if i not in perm[:j]]
    out = []
    for vals in itertools.product(range(Fd.size), repeat=len(free)):
        rows = [[0] * n for _ in range(n)]
        for j in range(n):
            rows[perm[j]][j] = 1
        for (i, j), v in zip(free, vals):
            rows[i][j] = v
        out.append(tuple(tuple(r) for r in rows))
    return out


_cell_cache: dict = {}


def schubert_cell(G: SLn, K: FieldLevel, a: WeylElement) -> list[Matrix]:
    """Canonical flags in position ``a`` relative to the standard flag."""
    key = (id(K.field), G.n, a)
    if key not in _cell_cache:
        _cell_cache[key] = _cell(K.field, G.perm[a])
    return _cell_cache[key]


def bruhat_perm(K: FieldLevel, h: Matrix) -> tuple[int, ...]:
    """Permutation pattern of the Bruhat cell ``B* h B*``."""
    Fd = K.field
    sub, mul, inv = Fd.sub_t, Fd.mul_t, Fd.inv_t
    n = len(h)
    M = [list(r) for r in h]
    used: set[int] = set()
    perm = [0] * n
    for j in range(n):
        r = max((i for i in range(n) if i not in used and M[i][j]), default=None)
        if r is None:
            raise ZeroDivisionError("singular matrix")
        perm[j] = r
        used.add(r)
        piv_inv = inv[M[r][j]]
        row_r = M[r]
        for i in range(r):
            if i not in used and M[i][j]:
                f = mul[M[i][j]][piv_inv]
                M[i] = [sub[x][mul[f][y]] if y else x for x, y in zip(M[i], row_r)]
    return tuple(perm)


def rel_pos(G: SLn, K: FieldLevel, B1: Matrix, B2: Matrix) -> WeylElement:
    return G.elt[bruhat_perm(K, K.field.matmul(K.field.inverse(B1), B2))]


def act(K: FieldLevel, g: Matrix, B: Matrix) -> Matrix:
    """``g B g^-1`` as a flag."""
    return canonical_flag(K, K.field.matmul(g, B))


def frobenius_flag(K: FieldLevel, B: Matrix, s: int = 1) -> Matrix:
    return canonical_flag(K, K.frob_matrix(B, s))


def frobenius_group(K: FieldLevel, g: Matrix, s: int = 1) -> Matrix:
    return K.frob_matrix(g, s)


# -- groups ---------------------------------------------------------------------


def sl_order(n: int, Q: int) -> int:
    out = Q ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        out *= Q ** i - 1
    return out


def sl_elements(Fd: GF, n: int, scalars: Sequence[int] | None = None) -> list[Matrix]:
    """SL_n with entries in ``scalars`` (a subfield, default the whole field)."""
    elts = list(scalars) if scalars is not None else list(range(Fd.size))
    sub, mul, inv = Fd.sub_t, Fd.mul_t, Fd.inv_t
    out = []
    unit = [tuple(1 if i == k else 0 for i in range(n)) for k in range(n)]
    for cols in itertools.product(itertools.product(elts, repeat=n), repeat=n - 1):
        cof = []
        for k in range(n):
            M = tuple(tuple(c[i] for c in cols) + (unit[k][i],) for i in range(n))
            cof.append(Fd.det(M))
        i0 = next((i for i in range(n) if cof[i]), None)
        if i0 is None:
            continue
        c0inv = inv[cof[i0]]
        others = [i for i in range(n) if i != i0]
        for vals in itertools.product(elts, repeat=n - 1):
            s = 1
            for i, v in zip(others, vals):
                if v and cof[i]:
                    s = sub[s][mul[cof[i]][v]]
            last = [0] * n
            for i, v in zip(others, vals):
                last[i] = v
            last[i0] = mul[s][c0inv]
            out.append(tuple(tuple(c[i] for c in cols) + (last[i],) for i in range(n)))
    return out


_group_cache: dict = {}


def rational_group(G: SLn, K: FieldLevel) -> list[Matrix]:
    """G^F = SL_n(GF(q)) inside the level."""
    key = (id(K.field), K.q, G.n)
    if key not in _group_cache:
        _group_cache[key] = sl_elements(K.field, G.n, K.rational)
    return _group_cache[key]


# -- X_w and the maps between its point sets ------------------------------------


_xw_cache: dict = {}


def _xw_partition(G: SLn, K: FieldLevel) -> dict[WeylElement, list[Matrix]]:
    key = (id(K.field), K.q, G.n)
    if key not in _xw_cache:
        part: dict[WeylElement, list[Matrix]] = {w: [] for w in G.W.elements()}
        for B in enumerate_flags(K, G.n):
            part[rel_pos(G, K, B, frobenius_flag(K, B))].append(B)
        _xw_cache[key] = part
    return _xw_cache[key]


def x_w_points(G: SLn, K: FieldLevel, w: WeylElement) -> list[Matrix]:
    return _xw_partition(G, K)[w]


def psi(K: FieldLevel, B: Matrix) -> Matrix:
    return frobenius_flag(K, B)


def psi_inverse(K: FieldLevel, B: Matrix) -> Matrix:
    return frobenius_flag(K, B, -1)


def _check_split(G: SLn, w: WeylElement, a: WeylElement) -> tuple[WeylElement, WeylElement]:
    b = a.inverse() * w
    wp = b * a
    if not (w.length == a.length + b.length == wp.length):
        raise SystemError_(
            f"length condition fails for w={G.name(w)}, a={G.name(a)}")
    return b, wp


def sigma(G: SLn, K: FieldLevel, a: WeylElement, w: WeylElement, B: Matrix) -> Matrix:
    """The unique B' with ``(B, B') in O_a`` and ``(B', F(B)) in O_b`` where ``w = ab``.

    Walks a reduced word of a one simple step at a time; each step has exactly
    one continuation staying on a geodesic towards F(B).
    """
    _check_split(G, w, a)
    W = G.W
    FB = frobenius_flag(K, B)
    Fd = K.field
    target = w
    cur = B
    for i in a.word():
        target = W.lmul(i, target)
        hits = []
        for C in schubert_cell(G, K, W.generator(i)):
            nxt = canonical_flag(K, Fd.matmul(cur, C))
            if rel_pos(G, K, nxt, FB) == target:
                hits.append(nxt)
        if len(hits) != 1:
            raise SystemError_(f"expected a unique intermediate flag, found {len(hits)}")
        cur = hits[0]
    return cur


def sigma_scan(G: SLn, K: FieldLevel, a: WeylElement, w: WeylElement, B: Matrix) -> Matrix:
    """Same as ``sigma`` by scanning the whole cell of a (slow reference)."""
    b, _ = _check_split(G, w, a)
    FB = frobenius_flag(K, B)
    Fd = K.field
    hits = []
    for C in schubert_cell(G, K, a):
        Bp = canonical_flag(K, Fd.matmul(B, C))
        if rel_pos(G, K, Bp, FB) == b:
            hits.append(Bp)
    if len(hits) != 1:
        raise SystemError_(f"expected a unique intermediate flag, found {len(hits)}")
    return hits[0]


def sigma_i(G: SLn, K: FieldLevel, i: int, w: WeylElement, B: Matrix) -> Matrix:
    return sigma(G, K, G.W.generator(i), w, B)


def sigma_i_inverse(G: SLn, K: FieldLevel, i: int, v: WeylElement, B: Matrix) -> Matrix:
    """Inverse of ``sigma_i: X_{v'} -> X_v`` with ``v' = s_i v s_i``: equals ``Psi^-1 sigma(v s_i)``."""
    bp = G.W.rmul(v, i)
    return psi_inverse(K, sigma(G, K, bp, v, B))


def T_path(G: SLn, K: FieldLevel, path, B: Matrix) -> Matrix:
    """Compose ``sigma_i^{eps}`` along a path of the conjugacy graph."""
    W = G.W
    v = path.base
    for i, eps in path.steps:
        if eps > 0:
            B = sigma_i(G, K, i, v, B)
        else:
            B = sigma_i_inverse(G, K, i, v, B)
        v = W.twisted_move(i, v)
    return B


# -- unipotent pieces and cosets ----------------------------------------------


def ustar_positions(n: int) -> list[tuple[int, int]]:
    return [(a, b) for b in range(n) for a in range(b)]


def uw_positions(G: SLn, w: WeylElement) -> list[tuple[int, int]]:
    """Positions of U*_w = U* ∩ w U* w^-1: ``a < b`` with ``w^-1(a) < w^-1(b)``."""
    perm = G.perm[w]
    pinv = [0] * G.n
    for j, r in enumerate(perm):
        pinv[r] = j
    return [(a, b) for (a, b) in ustar_positions(G.n) if pinv[a] < pinv[b]]


def unipotent(K: FieldLevel, n: int, entries: dict) -> Matrix:
    return tuple(tuple(1 if i == j else entries.get((i, j), 0) for j in range(n)) for i in range(n))


def u_factor(K: FieldLevel, u: Matrix, i: int) -> tuple[Matrix, Matrix]:
    """``u = u_! u^!`` with ``u_!`` in the root subgroup of position (i, i+1)."""
    n = len(u)
    c = u[i][i + 1]
    u_bang = unipotent(K, n, {(i, i + 1): c})
    rest = unipotent(K, n, {(i, i + 1): K.field.neg(c)})
    return u_bang, K.field.matmul(rest, u)


def _is_unitriangular(M: Matrix) -> bool:
    n = len(M)
    return all(M[i][j] == (1 if i == j else 0) for i in range(n) for j in range(i + 1))


def coset_canonical(G: SLn, K: FieldLevel, w: WeylElement, g: Matrix) -> Matrix:
    Fd = K.field
    n = G.n
    gB = canonical_flag(K, g)
    b = Fd.matmul(Fd.inverse(gB), g)
    tinv = [Fd.inv(b[i][i]) for i in range(n)]
    u = [[Fd.mul(tinv[i], b[i][j]) for j in range(n)] for i in range(n)]
    # right multiplication by root elements of U*_w, clearing columns from the top down
    pos = set(uw_positions(G, w))
    for bcol in range(n):
        for a in range(bcol - 1, -1, -1):
            if (a, bcol) in pos and u[a][bcol]:
                c = u[a][bcol]
                for r in range(a + 1):
                    if u[r][a]:
                        u[r][bcol] = Fd.sub(u[r][bcol], Fd.mul(c, u[r][a]))
    t = tuple(tuple(b[i][i] if i == j else 0 for j in range(n)) for i in range(n))
    return Fd.matprod(gB, t, tuple(tuple(r) for r in u))


def in_x_tilde(G: SLn, K: FieldLevel, w: WeylElement, g: Matrix) -> bool:
    Fd = K.field
    M = Fd.matmul(Fd.inverse(g), K.frob_matrix(g))
    return _is_unitriangular(Fd.matmul(Fd.inverse(tits_representative(G, K, w)), M))


_xt_cache: dict = {}


def x_tilde_points(G: SLn, K: FieldLevel, w: WeylElement) -> list[Matrix]:
    """Canonical representatives of the GF(q^m)-points of the U*_w-coset space over X_w."""
    key = (id(K.field), K.q, G.n, w)
    if key in _xt_cache:
        return _xt_cache[key]
    Fd = K.field
    n = G.n
    comp = [p for p in ustar_positions(n) if p not in set(uw_positions(G, w))]
    wdot_inv = Fd.inverse(tits_representative(G, K, w))
    out = []
    for gB in x_w_points(G, K, w):
        d = Fd.inv(Fd.det(gB))
        for diag in itertools.product(range(1, Fd.size), repeat=n - 1):
            prod = 1
            for x in diag:
                prod = Fd.mul(prod, x)
            last = Fd.mul(d, Fd.inv(prod))
            t = tuple(tuple((diag + (last,))[i] if i == j else 0 for j in range(n)) for i in range(n))
            gt = Fd.matmul(gB, t)
            for vals in itertools.product(range(Fd.size), repeat=len(comp)):
                g = Fd.matmul(gt, unipotent(K, n, dict(zip(comp, vals))))
                M = Fd.matmul(Fd.inverse(g), K.frob_matrix(g))
                if _is_unitriangular(Fd.matmul(wdot_inv, M)):
                    out.append(g)
    _xt_cache[key] = out
    return out


def pi_w(K: FieldLevel, g: Matrix) -> Matrix:
    return canonical_flag(K, g)


def psi_tilde(G: SLn, K: FieldLevel, w: WeylElement, g: Matrix) -> Matrix:
    return coset_canonical(G, K, w, K.frob_matrix(g))


def sigma_tilde(G: SLn, K: FieldLevel, i: int, w: WeylElement, g: Matrix) -> Matrix:
    """``g' U*_w -> g' w u_! b^-1 U*_{w'}`` with ``w = s_i b``, ``w' = b s_i``."""
    W = G.W
    if i not in W.left_descents(w):
        raise SystemError_(f"s_{i + 1} is not a left descent of {G.name(w)}")
    b = W.lmul(i, w)
    wp = W.rmul(b, i)
    if wp.length != w.length:
        raise SystemError_("length condition fails")
    Fd = K.field
    wdot = tits_representative(G, K, w)
    M = Fd.matmul(Fd.inverse(g), K.frob_matrix(g))
    u = Fd.matmul(Fd.inverse(wdot), M)
    if not _is_unitriangular(u):
        raise SystemError_("point is not in the coset space over X_w")
    u_bang, _ = u_factor(K, u, i)
    g1 = Fd.matprod(g, wdot, u_bang, Fd.inverse(tits_representative(G, K, b)))
    return coset_canonical(G, K, wp, g1)


# -- tori ---------------------------------------------------------------------------


def _cycles(perm: Sequence[int]) -> list[int]:
    seen, out = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        L, x = 0, s
        while x not in seen:
            seen.add(x)
            x = perm[x]
            L += 1
        out.append(L)
    return out


def torus_points(G: SLn, q: int, w: WeylElement) -> list[tuple[int, ...]]:
    """Diagonals t (det 1) with ``w^-1 t w = F(t)``, over the level GF(q^M), M = lcm of cycle lengths."""
    perm = G.perm[w]
    M = math.lcm(*_cycles(perm))
    K = make_level(q, M)
    Fd = K.field
    n = G.n
    out = []
    for diag in itertools.product(range(1, Fd.size), repeat=n - 1):
        prod = 1
        for x in diag:
            prod = Fd.mul(prod, x)
        t = diag + (Fd.inv(prod),)
        # (w^-1 t w)_{jj} = t_{perm(j)}
        if all(t[perm[j]] == K.F(t[j]) for j in range(n)):
            out.append(t)
    return out


def torus_order_formula(G: SLn, w: WeylElement):
    """``prod_c (q^{L_c} - 1) / (q - 1)`` over the cycles of w, as a polynomial in q."""
    from .hecke import LaurentPoly
    num = LaurentPoly.const(1)
    for L in _cycles(G.perm[w]):
        num = num * (LaurentPoly.from_list([0] * L + [1]) - 1)
    # the det condition removes one factor q - 1
    coeffs = num.coeffs
    deg = max(coeffs) if coeffs else 0
    # synthetic division by (q - 1)
    a = [coeffs.get(k, 0) for k in range(deg + 1)]
    quo = [0] * deg
    carry = 0
    for k in range(deg, 0, -1):
        carry = a[k] + carry
        quo[k - 1] = carry
    if carry + a[0] != 0:
        raise ValueError("not divisible by q - 1")
    return LaurentPoly.from_list(quo)


def torus_order_q1(G: SLn, w: WeylElement) -> int | None:
    """Order of ``{t : w^-1 t w = t, det t = 1}``; None when it is infinite (w not elliptic)."""
    perm = G.perm[w]
    if len(_cycles(perm)) > 1:
        return None
    n = G.n
    # scalars with t^n = 1, counted in a prime field containing the n-th roots of unity
    r = next(p for p in itertools.count(n + 1)
             if (p - 1) % n == 0 and all(p % d for d in range(2, int(p ** 0.5) + 1)))
    Fd = make_field(r, 1)
    return sum(1 for t in range(1, r) if Fd.pow(t, n) == 1)


# -- counting -------------------------------------------------------------------------


def _charpoly_key(Fd: GF, g: Matrix) -> tuple:
    n = len(g)
    out = []
    for k in range(1, n + 1):
        s = 0
        for idx in itertools.combinations(range(n), k):
            s = Fd.add(s, Fd.det(tuple(tuple(g[i][j] for j in idx) for i in idx)))
        out.append(s)
    return tuple(out)


def _minpoly_key(Fd: GF, g: Matrix) -> tuple:
    n = len(g)
    powers = [Fd.identity(n)]
    while True:
        nxt = Fd.matmul(powers[-1], g)
        A = tuple(tuple(P[i][j] for P in powers) for i in range(n) for j in range(n))
        b = tuple(nxt[i][j] for i in range(n) for j in range(n))
        sol = Fd.solve(A, b)
        if sol is not None:
            return sol
        powers.append(nxt)


def _similarity_key(Fd: GF, g: Matrix):
    # char + min polynomial determine GL_n-similarity for n <= 3
    if len(g) <= 3:
        return (_charpoly_key(Fd, g), _minpoly_key(Fd, g))
    return g


def _position_vector(G: SLn, K: FieldLevel, g: Matrix, flags, inverses) -> Counter:
    Fd = K.field
    c: Counter = Counter()
    for B, Binv in zip(flags, inverses):
        c[bruhat_perm(K, Fd.matprod(Binv, g, B))] += 1
    return c


_table_cache: dict = {}


def fB_table(n: int, q: int, s: int = 1, memo: bool = True) -> tuple[dict, int]:
    """``{(w, w'): N_s}`` for all pairs, and |SL_n(GF(q^s))|.

    ``N_s = #{(g, B, B') : rel(B, gBg^-1) = w, rel(B', gB'g^-1) = w'}``; the per-g
    position counts are conjugation invariant, so they are memoised by similarity class.
    """
    key = (n, q, s, memo)
    if key in _table_cache:
        return _table_cache[key]
    G = SLn.get(n)
    K = make_level(q, s)
    Fd = K.field
    flags = enumerate_flags(K, n)
    inverses = [Fd.inverse(B) for B in flags]
    group = sl_elements(Fd, n)
    classes: dict = {}
    weights: Counter = Counter()
    for g in group:
        k = _similarity_key(Fd, g) if memo else g
        if k not in classes:
            classes[k] = _position_vector(G, K, g, flags, inverses)
        weights[k] += 1
    table: dict = {}
    elts = G.W.elements()
    for k, vec in classes.items():
        wt = weights[k]
        for a in elts:
            ca = vec.get(G.perm[a], 0)
            if not ca:
                continue
            for b in elts:
                cb = vec.get(G.perm[b], 0)
                if cb:
                    table[(a, b)] = table.get((a, b), 0) + wt * ca * cb
    for a in elts:
        for b in elts:
            table.setdefault((a, b), 0)
    _table_cache[key] = (table, len(group))
    return table, len(group)


def fB_count(n: int, q: int, w: WeylElement, w2: WeylElement, s: int = 1) -> int:
    return fB_table(n, q, s)[0][(w, w2)]


def verify_count_identity(n: int, q: int, w: WeylElement, w2: WeylElement, s: int = 1) -> dict:
    table, order = fB_table(n, q, s)
    G = SLn.get(n)
    Q = q ** s
    if order != sl_order(n, Q):
        raise SystemError_("group enumeration disagrees with the order formula")
    trace = n_trace(w, w2)
    hv = trace(Q)
    N = table[(w, w2)]
    return {
        "type": f"A{n - 1}", "n": n, "q": q, "s": s,
        "w": G.name(w), "w'": G.name(w2),
        "N_s": N, "group_order": order, "trace": str(trace), "hecke_value": int(hv),
        "pass": N == order * hv,
    }


def n_prime_sl2(q: int, w: WeylElement, w2: WeylElement) -> Fraction:
    """Orbit count via the h-sum: ``|G^F|^-1 #{(h, B, B') : F(B) = hBh^-1, ...}`` for SL_2(GF(q)), q prime."""
    p, e = _prime_power(q)
    if e != 1:
        raise ValueError("the h-summation is implemented for prime q only")
    G = SLn.get(2)
    base = make_level(q, 1)
    total = 0
    hs = rational_group(G, base)
    for h in hs:
        # h F has (hF)^m = h^m F^m on lines, so fixed lines live over GF(q^m), m = projective order of h
        m, x = 1, h
        while not (x[0][1] == 0 and x[1][0] == 0 and x[0][0] == x[1][1]):
            x = base.field.matmul(x, h)
            m += 1
        K = make_level(q, m)
        ca = cb = 0
        for B in enumerate_flags(K, 2):
            FB = frobenius_flag(K, B)
            if FB != act(K, h, B):
                continue
            r = rel_pos(G, K, B, FB)
            ca += r == w
            cb += r == w2
        total += ca * cb
    return Fraction(total, len(hs))


# -- isotropy and the U*_w action -------------------------------------------------


def _stabilizer(K: FieldLevel, group, point, action) -> list[Matrix]:
    return [x for x in group if action(x, point) == point]


def isotropy_check(n: int, q: int, levels: Iterable[int], w: WeylElement | None = None) -> dict:
    G = SLn.get(n)
    if w is None:
        w = G.coxeter_element()
    report = {"n": n, "q": q, "w": G.name(w), "levels": [], "pass": True}
    for m in levels:
        K = make_level(q, m)
        Fd = K.field
        GF_ = rational_group(G, K)
        T = torus_points(G, q, w)
        entry = {"m": m, "x_tilde_points": 0, "x_points": 0, "torus_order": len(T)}
        # free action on the coset space
        pts = x_tilde_points(G, K, w)
        entry["x_tilde_points"] = len(pts)
        free = True
        for g in pts:
            stab = _stabilizer(K, GF_, g, lambda x, y: coset_canonical(G, K, w, Fd.matmul(x, y)))
            if len(stab) != 1:
                free = False
                break
        entry["free"] = free
        # flag stabilizers: order divides |T*_w|, abelian, semisimple (order prime to p)
        ok = True
        orders = set()
        xs = x_w_points(G, K, w)
        entry["x_points"] = len(xs)
        for B in xs:
            stab = _stabilizer(K, GF_, B, lambda x, y: act(K, x, y))
            orders.add(len(stab))
            if len(T) % len(stab):
                ok = False
            for a in stab:
                if any(Fd.matmul(a, b) != Fd.matmul(b, a) for b in stab):
                    ok = False
                    break
                if _matrix_order(Fd, a) % K.p == 0:
                    ok = False
                    break
        entry["stabilizer_orders"] = sorted(orders)
        entry["stabilizers_in_torus"] = ok
        report["levels"].append(entry)
        report["pass"] &= free and ok
    return report


def _matrix_order(Fd: GF, a: Matrix) -> int:
    one = Fd.identity(len(a))
    k, x = 1, a
    while x != one:
        x = Fd.matmul(x, a)
        k += 1
    return k


def _unipotents(K: FieldLevel, n: int, positions) -> list[Matrix]:
    positions = list(positions)
    return [unipotent(K, n, dict(zip(positions, vals)))
            for vals in itertools.product(range(K.field.size), repeat=len(positions))]


def ustar_action_orbits(n: int, q: int, m: int, w: WeylElement | None = None,
                        compare_cosets: bool = True) -> dict:
    """Freeness of ``u_1: u -> w^-1 u_1 w u F(u_1)^-1`` and the coset-space correspondence."""
    G = SLn.get(n)
    if w is None:
        w = G.coxeter_element()
    K = make_level(q, m)
    Fd = K.field
    wd = tits_representative(G, K, w)
    wdi = Fd.inverse(wd)
    U = _unipotents(K, n, ustar_positions(n))
    Uw = _unipotents(K, n, uw_positions(G, w))

    def action(u1, u):
        return Fd.matprod(wdi, u1, wd, u, Fd.inverse(K.frob_matrix(u1)))

    one = Fd.identity(n)
    free = True
    orbit_of: dict = {}
    norbits = 0
    for u in U:
        for u1 in Uw:
            if u1 != one and action(u1, u) == u:
                free = False
        if u not in orbit_of:
            for u1 in Uw:
                orbit_of[action(u1, u)] = norbits
            norbits += 1
    report = {"n": n, "q": q, "m": m, "w": G.name(w), "U_order": len(U), "Uw_order": len(Uw),
              "free": free, "orbits": norbits}
    if compare_cosets:
        pts = x_tilde_points(G, K, w)
        GF_ = rational_group(G, K)
        seen: set = set()
        g_orbits = []
        for g in pts:
            if g in seen:
                continue
            orb = {coset_canonical(G, K, w, Fd.matmul(x, g)) for x in GF_}
            seen |= orb
            g_orbits.append(orb)
        images = []
        well_defined = True
        for orb in g_orbits:
            ids = {orbit_of[Fd.matprod(wdi, Fd.inverse(g), K.frob_matrix(g))] for g in orb}
            if len(ids) != 1:
                well_defined = False
            images.append(next(iter(ids)))
        injective = len(set(images)) == len(images)
        report.update({
            "coset_points": len(pts),
            "G_orbits": len(g_orbits),
            "image_orbits": len(set(images)),
            "well_defined": well_defined,
            "injective": injective,
            "pass": free and well_defined and injective and len(set(images)) == len(g_orbits),
        })
    else:
        report["pass"] = free
    return report


# -- identity suites ----------------------------------------------------------------


def reduced_words(W: CoxeterSystem, w: WeylElement) -> list[tuple[int, ...]]:
    if w.length == 0:
        return [()]
    out = []
    for i in sorted(W.left_descents(w)):
        out.extend((i,) + rest for rest in reduced_words(W, W.lmul(i, w)))
    return out


def _conj_chain(W: CoxeterSystem, w: WeylElement, word: Sequence[int]) -> list[WeylElement] | None:
    """``w_1 = w, w_{k+1} = s_i w_k s_i`` with i a left descent and constant length, else None."""
    out = [w]
    v = w
    for i in word:
        if i not in W.left_descents(v):
            return None
        v2 = W.twisted_move(i, v)
        if v2.length != v.length:
            return None
        out.append(v2)
        v = v2
    return out


def braid_cases(W: CoxeterSystem) -> list[tuple[WeylElement, int, int, int]]:
    """``(w, i, j, m)`` with i, j in cl(w) and both alternating m-step chains length preserving."""
    out = []
    for w in W.elements():
        cl = sorted(W.left_descents(w))
        for i, j in itertools.combinations(cl, 2):
            m = W.coxeter_matrix[i][j]
            alt_i = [(i, j)[k % 2] for k in range(m)]
            alt_j = [(j, i)[k % 2] for k in range(m)]
            if _conj_chain(W, w, alt_i) and _conj_chain(W, w, alt_j):
                out.append((w, i, j, m))
    return out


def _tally(report: dict, key: str, ok: bool) -> None:
    slot = report.setdefault(key, {"checked": 0, "failed": 0})
    slot["checked"] += 1
    slot["failed"] += not ok


def sigma_identity_suite(n: int, q: int, levels: Iterable[int], tilde_levels: Iterable[int] | None = None,
                         braid_only: bool = False) -> dict:
    """Exhaustive point-level checks of the sigma / sigma-tilde composition identities.

    ``braid_only`` restricts to the two-generator braid cases (used for n = 4).
    """
    G = SLn.get(n)
    W = G.W
    levels = list(levels)
    tilde_levels = levels if tilde_levels is None else list(tilde_levels)
    cases = braid_cases(W)
    res: dict = {}
    for m in levels:
        K = make_level(q, m)
        for w in ([] if braid_only else W.elements()):
            pts = x_w_points(G, K, w)
            if not pts:
                continue
            # sigma(b) sigma(a) = Psi and sigma(a) sigma(b) = Psi on the other side
            for a in W.elements():
                b = a.inverse() * w
                if not (w.length == a.length + b.length == (b * a).length):
                    continue
                for B in pts:
                    B1 = sigma(G, K, a, w, B)
                    _tally(res, "sigma(b)sigma(a)=Psi", sigma(G, K, b, b * a, B1) == psi(K, B))
                for B in x_w_points(G, K, b * a):
                    B1 = sigma(G, K, b, b * a, B)
                    _tally(res, "sigma(a)sigma(b)=Psi", sigma(G, K, a, w, B1) == psi(K, B))
            # reduced-word compositions
            for word in reduced_words(W, w):
                chain = _conj_chain(W, w, word)
                if chain is None or not word:
                    continue
                for B in pts:
                    cur = B
                    for i, v in zip(word, chain):
                        cur = sigma_i(G, K, i, v, cur)
                    _tally(res, "reduced word = Psi", cur == psi(K, B))
        for w, i, j, mm in cases:
            v = W.evaluate([(i, j)[k % 2] for k in range(mm)])
            for B in x_w_points(G, K, w):
                target = sigma(G, K, v, w, B)
                for first, second in ((i, j), (j, i)):
                    word = [(first, second)[k % 2] for k in range(mm)]
                    chain = _conj_chain(W, w, word)
                    cur = B
                    for x, u in zip(word, chain):
                        cur = sigma_i(G, K, x, u, cur)
                    _tally(res, "braid compositions = sigma_v", cur == target)
    for m in tilde_levels:
        K = make_level(q, m)
        for w in ([] if braid_only else W.elements()):
            words = [wd for wd in reduced_words(W, w) if wd and _conj_chain(W, w, wd)]
            if not words:
                continue
            pts = x_tilde_points(G, K, w)
            for word in words:
                chain = _conj_chain(W, w, word)
                for g in pts:
                    cur = g
                    for i, v in zip(word, chain):
                        nxt = sigma_tilde(G, K, i, v, cur)
                        _tally(res, "pi sigma~ = sigma pi", pi_w(K, nxt) == sigma_i(G, K, i, v, pi_w(K, cur)))
                        cur = nxt
                    _tally(res, "reduced word = Psi~", cur == psi_tilde(G, K, w, g))
        for w, i, j, mm in cases:
            outs = []
            for first, second in ((i, j), (j, i)):
                word = [(first, second)[k % 2] for k in range(mm)]
                chain = _conj_chain(W, w, word)
                imgs = []
                for g in x_tilde_points(G, K, w):
                    cur = g
                    for x, u in zip(word, chain):
                        cur = sigma_tilde(G, K, x, u, cur)
                    imgs.append(cur)
                outs.append(imgs)
            for a, b in zip(*outs):
                _tally(res, "braid sigma~ compositions agree", a == b)
    return {"n": n, "q": q, "levels": levels, "tilde_levels": tilde_levels, "identities": res,
            "pass": all(v["failed"] == 0 for v in res.values())}


def t_path_check(n: int, q: int, m: int, path) -> dict:
    """T_path is a bijection X_w -> X_w' commuting with G^F and with Psi (trivial diagram action)."""
    G = SLn.get(n)
    K = make_level(q, m)
    Fd = K.field
    pts = x_w_points(G, K, path.base)
    end = path.end
    images = [T_path(G, K, path, B) for B in pts]
    target = set(x_w_points(G, K, end))
    lands = all(B in target for B in images)
    bijective = len(set(images)) == len(pts) == len(target)
    group = rational_group(G, K)
    equivariant = all(T_path(G, K, path, act(K, x, B)) == act(K, x, img)
                      for B, img in zip(pts, images) for x in group[:: max(1, len(group) // 12)])
    psi_ok = all(T_path(G, K, path, psi(K, B)) == psi(K, img) for B, img in zip(pts, images))
    return {"points": len(pts), "lands": lands, "bijective": bijective, "equivariant": equivariant,
            "psi_commutes": psi_ok, "pass": lands and bijective and equivariant and psi_ok}
