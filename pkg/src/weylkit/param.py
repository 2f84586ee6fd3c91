"""Orbit-space coordinates: the cyclic-vector/companion parametrization for SL_n and the
Gram-coordinate elimination for symplectic and orthogonal groups.

Cyclic part: a pair (g, v) with ``det[v, gv, ..., g^{n-1}v] = 1`` (the volume form is
the standard one) has ``g^n v = a_0 v + a_1 gv + ... + a_{n-1} g^{n-1}v`` with
``a_0 = (-1)^{n-1}``; ``mu`` reads off ``(a_1, ..., a_{n-1})`` and ``tau`` builds the
companion pair back.

Gram part: coordinates ``c, d, e, x, y, u`` (1-based indices as in the usual
presentation) subject to four families of equations (i)-(iv).  ``gram_solve`` fills
in the dependent coordinates by substitution in a triangular order; ``gram_verify``
checks (i)-(iv) and, independently, rebuilds the Gram matrix of the basis
``w^r_i, z^r_j`` and checks the pairing identities (I)-(IV) it must satisfy.  The
exponent ``x^{q^i}`` is the i-th power of the field Frobenius; in twist-free mode
(``qexp=None``) it is the identity.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .finfield import GF, Matrix, make_field

__all__ = [
    "CyclicPair", "ParamError", "tau", "mu", "orbit_equivalent", "iterate_matrix", "random_sl",
    "FORMS", "GramSystem", "free_variables", "dependent_variables", "dimension_formula",
    "gram_solve", "gram_verify", "gram_random", "perturbation_probe",
]


class ParamError(ValueError):
    pass


# -- cyclic vectors -----------------------------------------------------------------


@dataclass(frozen=True)
class CyclicPair:
    field: GF
    g: Matrix
    v: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.v)


def iterate_matrix(F: GF, g: Matrix, v: Sequence[int]) -> Matrix:
    """Columns ``v, gv, ..., g^{n-1} v``."""
    cols = [tuple(v)]
    for _ in range(len(v) - 1):
        cols.append(F.matvec(g, cols[-1]))
    return tuple(tuple(c[i] for c in cols) for i in range(len(v)))


def tau(F: GF, a: Sequence[int]) -> CyclicPair:
    """Companion pair for ``(a_1, ..., a_{n-1})`` on the standard basis."""
    n = len(a) + 1
    a0 = 1 if n % 2 else F.neg(1)
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i + 1][i] = 1
    rows[0][n - 1] = a0
    for i, ai in enumerate(a, start=1):
        rows[i][n - 1] = ai % F.size if isinstance(ai, int) else ai
    g = tuple(tuple(r) for r in rows)
    v = tuple(1 if i == 0 else 0 for i in range(n))
    return CyclicPair(F, g, v)


def mu(pair: CyclicPair) -> tuple[int, ...]:
    F, g, v = pair.field, pair.g, pair.v
    n = len(v)
    A = iterate_matrix(F, g, v)
    d = F.det(A)
    if d == 0:
        raise ParamError("v is not a cyclic vector for g")
    if d != 1:
        raise ParamError("iterate wedge differs from the volume form")
    last = F.matvec(g, tuple(A[i][n - 1] for i in range(n)))
    coeffs = F.solve(A, last)
    a0 = 1 if n % 2 else F.neg(1)
    if coeffs[0] != a0:
        raise ParamError(f"a_0 = {coeffs[0]}, expected (-1)^(n-1)")
    return tuple(coeffs[1:])


def orbit_equivalent(p1: CyclicPair, p2: CyclicPair) -> Matrix | None:
    """``x`` in SL_n with ``x g1 x^-1 = g2`` and ``x v1 = v2``, or None."""
    F = p1.field
    if mu(p1) != mu(p2):
        return None
    A1 = iterate_matrix(F, p1.g, p1.v)
    A2 = iterate_matrix(F, p2.g, p2.v)
    x = F.matmul(A2, F.inverse(A1))
    if F.det(x) != 1:
        raise ParamError("conjugator is not in SL_n")
    if F.matprod(x, p1.g, F.inverse(x)) != p2.g or F.matvec(x, p1.v) != tuple(p2.v):
        raise ParamError("conjugator check failed")
    return x


def random_sl(F: GF, n: int, rng: random.Random) -> Matrix:
    while True:
        M = tuple(tuple(rng.randrange(F.size) for _ in range(n)) for _ in range(n))
        d = F.det(M)
        if d:
            # rescale the first column to force det 1
            c = F.inv(d)
            return tuple(tuple(F.mul(c, x) if j == 0 else x for j, x in enumerate(row)) for row in M)


# -- Gram coordinates -------------------------------------------------------------------


FORMS = {
    # name: (epsilon, kappa, quadratic)
    "symplectic": (-1, 0, False),
    "even-orthogonal": (1, 0, True),
    "odd-orthogonal": (1, 1, True),
}


@dataclass
class GramSystem:
    form: str
    parts: tuple[int, ...]
    field: GF
    qexp: int | None  # Frobenius exponent of q over the prime field; None = twist-free
    values: dict = field(default_factory=dict)
    zeta0: int = 1

    @property
    def eps(self) -> int:
        return FORMS[self.form][0]

    @property
    def kappa(self) -> int:
        return FORMS[self.form][1]

    @property
    def quadratic(self) -> bool:
        return FORMS[self.form][2]

    @property
    def sigma(self) -> int:
        return len(self.parts)

    @property
    def zeta(self) -> int:
        return self.field.add(self.zeta0, self.zeta0)

    def p(self, r: int) -> int:
        return self.parts[r - 1]

    def fr(self, a: int, i: int) -> int:
        """``a^(q^i)``."""
        if self.qexp is None or i == 0 or a == 0:
            return a
        return self.field.frob(a, self.qexp * i)

    def epsf(self) -> int:
        return 1 if self.eps == 1 else self.field.neg(1)

    def get(self, key) -> int:
        return self.values.get(key, 0)


def _check_parts(form: str, parts: Sequence[int], F: GF) -> tuple[int, ...]:
    if form not in FORMS:
        raise ParamError(f"unknown form {form!r}")
    parts = tuple(parts)
    if not parts or any(p <= 0 for p in parts) or list(parts) != sorted(parts, reverse=True):
        raise ParamError("parts must be a nonincreasing sequence of positive integers")
    eps, kappa, quad = FORMS[form]
    if quad and F.p == 2:
        raise ParamError("orthogonal forms in characteristic 2 are not supported")
    return parts


def _index_sets(parts: Sequence[int]) -> dict:
    s = len(parts)
    p = lambda r: parts[r - 1]
    R = range(1, s + 1)
    return {
        "c": [("c", r, h) for r in R for h in range(1, p(r))],
        "d": [("d", t, r, h) for t in R for r in R if t < r for h in range(1, p(r))],
        "e": [("e", t, r, h) for t in R for r in R if r < t for h in range(1, p(t) + 1)],
        "x": [("x", t, r, i) for t in R for r in R for i in range(p(r))],
        "y": [("y", t, r, j) for t in R for r in R for j in range(1, p(r) + 1)],
        "u": [("u", t) for t in R],
    }


def free_variables(form: str, parts: Sequence[int]) -> list[tuple]:
    eps, kappa, quad = FORMS[form]
    ix = _index_sets(parts)
    s = len(parts)
    out = ix["c"] + ix["d"] + ix["e"]
    for r in range(1, s + 1):
        for t in range(1, s + 1):
            if (r <= t) if not quad else (r < t):
                out.append(("y", r, t, parts[t - 1]))
    if kappa:
        out += ix["u"]
    return out


def dependent_variables(gs: GramSystem) -> list[tuple]:
    """Dependent coordinates in solving order, each with the equation that fixes it."""
    s, p = gs.sigma, gs.p
    order = []
    for t in range(1, s + 1):
        # x^{t,r}_i: by i, then r descending
        for i in range(max(gs.parts)):
            for r in range(s, 0, -1):
                if i < p(r):
                    order.append((("x", t, r, i), ("ii", t, r, i)))
        # y^{t,r}_j, j < p_r: by j, then r ascending
        for j in range(1, max(gs.parts)):
            for r in range(1, s + 1):
                if j < p(r):
                    order.append((("y", t, r, j), ("i", t, r, j)))
    if gs.quadratic:
        for t in range(1, s + 1):
            order.append((("y", t, t, p(t)), ("iv", t)))
    for gap in range(1, s):
        for t in range(1, s - gap + 1):
            tp = t + gap
            order.append((("y", tp, t, p(t)), ("iii", t, tp)))
    return order


def dimension_formula(form: str, parts: Sequence[int]) -> int:
    eps, kappa, quad = FORMS[form]
    total = sum((2 * r - 1) * pr for r, pr in enumerate(parts, start=1))
    if kappa == 0 and quad:
        total -= len(parts)
    return total


# -- the equations as displayed -------------------------------------------------------


def _c(gs, r, h):
    return gs.get(("c", r, h)) if 1 <= h <= gs.p(r) - 1 else 0


def _d(gs, t, r, h):
    return gs.get(("d", t, r, h)) if 1 <= h <= gs.p(r) - 1 else 0


def _e(gs, t, r, h):
    return gs.get(("e", t, r, h)) if 1 <= h <= gs.p(t) else 0


def _eq_i(gs: GramSystem, t: int, s: int, h: int, literal: bool = False) -> int:
    F, p = gs.field, gs.p
    add, mul = F.add, F.mul
    k = p(s) - h
    lhs = gs.get(("y", t, s, h))
    for j in range(1, h):
        lhs = add(lhs, mul(gs.fr(_c(gs, s, p(s) + j - h), k), gs.get(("y", t, s, j))))
    for r in range(1, s):
        for j in range(1, min(h, p(r)) + 1):
            lhs = add(lhs, mul(gs.fr(_e(gs, s, r, p(s) + j - h), k), gs.get(("y", t, r, j))))
    for r in range(s + 1, gs.sigma + 1):
        for j in range(1, p(r) - p(s) + h):
            lhs = add(lhs, mul(gs.fr(_d(gs, s, r, p(s) + j - h), k), gs.get(("y", t, r, j))))
    if s < t:
        M = gs.fr(_d(gs, s, t, k), k)
    elif s > t:
        M = gs.fr(_e(gs, s, t, k), k)
    else:
        M = gs.fr(_c(gs, t, k), k)
    if literal:
        M = mul(M, gs.epsf())
    return F.sub(lhs, M)


def _eq_ii(gs: GramSystem, t: int, s: int, h: int) -> int:
    F, p = gs.field, gs.p
    add, mul = F.add, F.mul
    lhs = gs.get(("x", t, s, h))
    for i in range(h):
        lhs = add(lhs, mul(gs.fr(_c(gs, s, p(s) + i - h), i), gs.get(("x", t, s, i))))
    for r in range(1, s):
        for i in range(min(h, p(r))):
            lhs = add(lhs, mul(gs.fr(_d(gs, r, s, p(s) + i - h), i), gs.get(("x", t, r, i))))
    for r in range(s + 1, gs.sigma + 1):
        for i in range(min(p(r) - p(s) + h, p(r) - 1) + 1):
            lhs = add(lhs, mul(gs.fr(_e(gs, r, s, p(s) + i - h), i), gs.get(("x", t, r, i))))
    if h == 0 and s > t:
        M = mul(gs.fr(_e(gs, s, t, p(s)), p(s)), gs.epsf())
    elif h == 0 and s == t:
        M = gs.epsf()
    else:
        M = 0
    return F.sub(lhs, M)


def _pair_sum(gs: GramSystem, t: int, tp: int, symmetric: bool) -> int:
    """Shared body of (iii) and (iv): sum over x^{t,r}_i y^{t',r'}_j (w^r_i, z^{r'}_j)."""
    F, p = gs.field, gs.p
    add, mul = F.add, F.mul
    epsf = gs.epsf()
    total = 0
    for r in range(1, gs.sigma + 1):
        for rp in range(1, gs.sigma + 1):
            for i in range(p(r)):
                for j in range(1, p(rp) + 1):
                    if r < rp:
                        if i + j >= p(rp):
                            continue
                        coef = gs.fr(_d(gs, r, rp, i + j), i)
                    elif r > rp:
                        if i + j > p(r):
                            continue
                        coef = gs.fr(_e(gs, r, rp, i + j), i)
                    else:
                        if i + j < p(r):
                            coef = gs.fr(_c(gs, r, i + j), i)
                        elif i + j == p(r):
                            coef = 1
                        else:
                            continue
                    if not coef:
                        continue
                    term = mul(gs.get(("x", t, r, i)), gs.get(("y", tp, rp, j)))
                    if symmetric:
                        term = add(term, mul(epsf, mul(gs.get(("x", tp, r, i)), gs.get(("y", t, rp, j)))))
                    total = add(total, mul(term, coef))
    return total


def _eq_iii(gs: GramSystem, t: int, tp: int) -> int:
    F = gs.field
    total = _pair_sum(gs, t, tp, symmetric=True)
    if gs.kappa:
        total = F.add(total, F.mul(F.mul(gs.get(("u", t)), gs.get(("u", tp))), gs.zeta))
    return total


def _eq_iv(gs: GramSystem, t: int) -> int:
    # the third sum is read with y^{t,r} (the t' there is a misprint)
    F = gs.field
    total = _pair_sum(gs, t, t, symmetric=False)
    if gs.kappa:
        u = gs.get(("u", t))
        total = F.add(total, F.mul(F.mul(u, u), gs.zeta0))
    return total


def _residual(gs: GramSystem, eq: tuple) -> int:
    kind = eq[0]
    if kind == "i":
        return _eq_i(gs, *eq[1:])
    if kind == "ii":
        return _eq_ii(gs, *eq[1:])
    if kind == "iii":
        return _eq_iii(gs, *eq[1:])
    return _eq_iv(gs, *eq[1:])


def all_equations(gs: GramSystem) -> list[tuple]:
    s, p = gs.sigma, gs.p
    out = [("i", t, r, h) for t in range(1, s + 1) for r in range(1, s + 1) for h in range(1, p(r))]
    out += [("ii", t, r, h) for t in range(1, s + 1) for r in range(1, s + 1) for h in range(p(r))]
    out += [("iii", t, tp) for t in range(1, s + 1) for tp in range(t + 1, s + 1)]
    if gs.quadratic:
        out += [("iv", t) for t in range(1, s + 1)]
    return out


# -- solve ------------------------------------------------------------------------------


def gram_solve(form: str, parts: Sequence[int], free_inputs: dict, F: GF, qexp: int | None = 1,
               zeta0: int = 1) -> GramSystem:
    """Fill in every dependent coordinate from the free ones, by substitution only."""
    parts = _check_parts(form, parts, F)
    free = free_variables(form, parts)
    extra = set(free_inputs) - set(free)
    if extra:
        raise ParamError(f"not free variables: {sorted(extra)[:3]}")
    gs = GramSystem(form, parts, F, qexp, {k: free_inputs.get(k, 0) % F.size for k in free}, zeta0)
    for var, eq in dependent_variables(gs):
        gs.values[var] = 0
        r0 = _residual(gs, eq)
        gs.values[var] = 1
        r1 = _residual(gs, eq)
        coef = F.sub(r1, r0)
        # the pivot coefficient is +-1, so no division is ever needed
        if coef not in (1, F.neg(1)):
            raise ParamError(f"pivot of {var} in {eq} is {coef}, not a unit sign")
        gs.values[var] = F.neg(F.mul(r0, coef))
    return gs


def gram_random(form: str, parts: Sequence[int], F: GF, rng: random.Random, qexp: int | None = 1,
                zeta0: int = 1, zero: bool = False) -> GramSystem:
    free = free_variables(form, _check_parts(form, parts, F))
    inputs = {k: (0 if zero else rng.randrange(F.size)) for k in free}
    return gram_solve(form, parts, inputs, F, qexp, zeta0)


# -- verify --------------------------------------------------------------------------


def _basis(gs: GramSystem) -> list[tuple]:
    s, p = gs.sigma, gs.p
    out = [("w", r, i) for r in range(1, s + 1) for i in range(p(r))]
    out += [("z", r, j) for r in range(1, s + 1) for j in range(1, p(r) + 1)]
    if gs.kappa:
        out.append(("xi",))
    return out


def _wz(gs: GramSystem, t: int, i: int, r: int, j: int) -> int:
    """(w^t_i, z^r_j) from the pairing rules."""
    p = gs.p
    if t == r:
        if i + j < p(r):
            return gs.fr(gs.get(("c", r, i + j)), i)
        return 1 if i + j == p(r) else 0
    if t < r:
        return gs.fr(gs.get(("d", t, r, i + j)), i) if i + j < p(r) else 0
    return gs.fr(gs.get(("e", t, r, i + j)), i) if i + j <= p(t) else 0


def gram_matrix(gs: GramSystem) -> tuple[list[tuple], list[list[int]]]:
    F = gs.field
    basis = _basis(gs)
    n = len(basis)
    epsf = gs.epsf()
    M = [[0] * n for _ in range(n)]
    for a, ba in enumerate(basis):
        for b, bb in enumerate(basis):
            if ba[0] == "w" and bb[0] == "z":
                M[a][b] = _wz(gs, ba[1], ba[2], bb[1], bb[2])
            elif ba[0] == "z" and bb[0] == "w":
                M[a][b] = F.mul(epsf, _wz(gs, bb[1], bb[2], ba[1], ba[2]))
            elif ba[0] == "xi" and bb[0] == "xi":
                M[a][b] = gs.zeta
    return basis, M


def gram_verify(gs: GramSystem) -> dict:
    """Residuals of (i)-(iv) plus the pairing identities (I)-(IV) on the rebuilt Gram matrix."""
    F = gs.field
    s, p = gs.sigma, gs.p
    checks: dict[str, bool] = {}
    for eq in all_equations(gs):
        checks["(" + eq[0] + ")" + str(eq[1:])] = _residual(gs, eq) == 0
    basis, M = gram_matrix(gs)
    pos = {b: k for k, b in enumerate(basis)}
    n = len(basis)
    epsf = gs.epsf()

    # nondegeneracy on the span of the w, z vectors
    core = [pos[b] for b in basis if b[0] != "xi"]
    checks["nondegenerate"] = F.rank([[M[a][b] for b in core] for a in core]) == len(core)
    checks["eps-symmetric"] = all(M[b][a] == F.mul(epsf, M[a][b]) for a in range(n) for b in range(n))

    # z^t_0 and z^t_j as coordinate vectors
    def vec_z0(t):
        v = [0] * n
        for r in range(1, s + 1):
            for i in range(p(r)):
                v[pos[("w", r, i)]] = gs.get(("x", t, r, i))
            for j in range(1, p(r) + 1):
                v[pos[("z", r, j)]] = gs.get(("y", t, r, j))
        if gs.kappa:
            v[pos[("xi",)]] = gs.get(("u", t))
        return v

    def unit(b):
        v = [0] * n
        v[pos[b]] = 1
        return v

    def form(u, v):
        tot = 0
        for a in range(n):
            if u[a]:
                row = M[a]
                for b in range(n):
                    if v[b] and row[b]:
                        tot = F.add(tot, F.mul(F.mul(u[a], v[b]), row[b]))
        return tot

    def quad(u):
        tot = 0
        for a in range(n):
            if not u[a]:
                continue
            if basis[a][0] == "xi":
                tot = F.add(tot, F.mul(F.mul(u[a], u[a]), gs.zeta0))
            for b in range(a + 1, n):
                if u[b] and M[a][b]:
                    tot = F.add(tot, F.mul(F.mul(u[a], u[b]), M[a][b]))
        return tot

    z0 = {t: vec_z0(t) for t in range(1, s + 1)}
    for t in range(1, s + 1):
        z1 = unit(("z", t, 1))
        for sp in range(1, s + 1):
            for h in range(1, p(sp)):
                lhs = form(z0[t], unit(("w", sp, p(sp) - h)))
                rhs = gs.fr(form(z1, unit(("w", sp, p(sp) - h - 1))), 1)
                checks[f"(I){(t, sp, h)}"] = lhs == rhs
                checks[f"(II){(t, sp, h)}"] = form(z0[t], unit(("z", sp, p(sp) - h))) == 0
            lhs = form(z0[t], unit(("z", sp, p(sp))))
            rhs = gs.fr(form(z1, unit(("w", sp, p(sp) - 1))), 1)
            checks[f"(II'){(t, sp)}"] = lhs == rhs
        for tp in range(t + 1, s + 1):
            checks[f"(III){(t, tp)}"] = form(z0[t], z0[tp]) == 0
        if gs.quadratic:
            checks[f"(IV){(t,)}"] = quad(z0[t]) == 0
    literal_i = all(_eq_i(gs, *eq[1:], literal=True) == 0 for eq in all_equations(gs) if eq[0] == "i")
    failed = [k for k, v in checks.items() if not v]
    return {"form": gs.form, "parts": list(gs.parts), "pass": not failed, "failed": failed,
            "checked": len(checks), "literal_i_holds": literal_i}


def perturbation_probe(gs: GramSystem, rng: random.Random) -> dict:
    """Bump one dependent coordinate and report whether verification notices."""
    deps = [v for v, _ in dependent_variables(gs)]
    var = rng.choice(deps)
    delta = rng.randrange(1, gs.field.size)
    bumped = GramSystem(gs.form, gs.parts, gs.field, gs.qexp, dict(gs.values), gs.zeta0)
    bumped.values[var] = gs.field.add(bumped.values.get(var, 0), delta)
    rep = gram_verify(bumped)
    return {"variable": var, "detected": not rep["pass"], "failed": rep["failed"][:5]}
