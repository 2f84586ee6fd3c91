"""Table-driven finite fields GF(p^k) and small dense linear algebra over them.

Elements are ints ``0 .. p^k - 1``: the base-p digits are the coefficients of
a polynomial in the generator, lowest degree first.  So the prime field sits
inside as ``0 .. p-1`` with its usual arithmetic.
"""
from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = ["GF", "make_field", "Matrix"]

Matrix = tuple  # tuple of row tuples


def _irreducible(p: int, k: int) -> list[int]:
    """Lexicographically first monic irreducible of degree k (coefficients high to low)."""
    from sympy import ZZ
    from sympy.polys.galoistools import gf_irreducible_p

    if k == 1:
        return [1, 0]
    for tail in itertools.product(range(p), repeat=k):
        poly = [1, *tail]
        if poly[-1] == 0:
            continue
        if gf_irreducible_p(poly, p, ZZ):
            return poly
    raise ValueError(f"no irreducible polynomial of degree {k} over GF({p})")


class GF:
    """GF(p^k) with full addition/multiplication tables."""

    MAX_SIZE = 4096

    def __init__(self, p: int, k: int = 1):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p, self.k = p, k
        self.size = q = p ** k
        if q > self.MAX_SIZE:
            raise ValueError(f"GF({p}^{k}) too large for table arithmetic")
        self.modulus = _irreducible(p, k)
        digits = [self._digits(a) for a in range(q)]
        self._digit_rows = digits
        self.add_t = [[self._from_digits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                       for b in range(q)] for a in range(q)]
        self.neg_t = [self._from_digits([(-x) % p for x in digits[a]]) for a in range(q)]
        self.mul_t = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                c = self._polymul(digits[a], digits[b])
                self.mul_t[a][b] = self.mul_t[b][a] = c
        self.inv_t = [0] * q
        for a in range(1, q):
            row = self.mul_t[a]
            self.inv_t[a] = row.index(1)
        self.frob_t = [self._pow_slow(a, p) for a in range(q)]
        self.sub_t = [[self.add_t[a][self.neg_t[b]] for b in range(q)] for a in range(q)]

    # -- construction helpers --------------------------------------------

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_digits(self, ds: Sequence[int]) -> int:
        v = 0
        for d in reversed(ds):
            v = v * self.p + d
        return v

    def _polymul(self, a: Sequence[int], b: Sequence[int]) -> int:
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the monic modulus (stored high to low)
        low = list(reversed(self.modulus))  # low to high, low[k] == 1
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                for j in range(k + 1):
                    prod[d - k + j] = (prod[d - k + j] - c * low[j]) % p
        return self._from_digits(prod[:k])

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = self.mul_t[r][a]
        return r

    # -- arithmetic --------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.add_t[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.sub_t[a][b]

    def neg(self, a: int) -> int:
        return self.neg_t[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_t[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self.inv_t[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_t[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r, base = 1, a
        while e:
            if e & 1:
                r = self.mul_t[r][base]
            base = self.mul_t[base][base]
            e >>= 1
        return r

    def frob(self, a: int, t: int = 1) -> int:
        """``a^(p^t)``; t may be negative (taken mod k)."""
        for _ in range(t % self.k):
            a = self.frob_t[a]
        return a

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self) -> range:
        return range(self.size)

    def nonzero(self) -> range:
        return range(1, self.size)

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.size)

    def in_subfield(self, a: int, d: int) -> bool:
        """Membership in GF(p^d) (d must divide k)."""
        return self.frob(a, d) == a

    def subfield(self, d: int) -> list[int]:
        if self.k % d:
            raise ValueError("subfield degree must divide k")
        return [a for a in range(self.size) if self.in_subfield(a, d)]

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        n, x = 1, a
        while x != 1:
            x = self.mul_t[x][a]
            n += 1
        return n

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"

    # -- vectors and matrices -------------------------------------------------

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        add, mul = self.add_t, self.mul_t
        s = 0
        for a, b in zip(u, v):
            if a and b:
                s = add[s][mul[a][b]]
        return s

    def identity(self, n: int) -> Matrix:
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))

    def matmul(self, A: Matrix, B: Matrix) -> Matrix:
        add, mul = self.add_t, self.mul_t
        cols = list(zip(*B))
        out = []
        for row in A:
            r = []
            for col in cols:
                s = 0
                for a, b in zip(row, col):
                    if a and b:
                        s = add[s][mul[a][b]]
                r.append(s)
            out.append(tuple(r))
        return tuple(out)

    def matvec(self, A: Matrix, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.dot(row, v) for row in A)

    def matprod(self, *Ms: Matrix) -> Matrix:
        out = Ms[0]
        for M in Ms[1:]:
            out = self.matmul(out, M)
        return out

    def det(self, A: Matrix) -> int:
        n = len(A)
        M = [list(r) for r in A]
        d = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if M[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                d = self.neg_t[d]
            d = self.mul_t[d][M[c][c]]
            inv = self.inv_t[M[c][c]]
            for r in range(c + 1, n):
                if M[r][c]:
                    f = self.mul_t[M[r][c]][inv]
                    M[r] = [self.sub_t[x][self.mul_t[f][y]] for x, y in zip(M[r], M[c])]
        return d

    def inverse(self, A: Matrix) -> Matrix:
        n = len(A)
        M = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(A)]
        for c in range(n):
            piv = next((r for r in range(c, n) if M[r][c]), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            M[c], M[piv] = M[piv], M[c]
            inv = self.inv_t[M[c][c]]
            M[c] = [self.mul_t[inv][x] for x in M[c]]
            for r in range(n):
                if r != c and M[r][c]:
                    f = M[r][c]
                    M[r] = [self.sub_t[x][self.mul_t[f][y]] for x, y in zip(M[r], M[c])]
        return tuple(tuple(r[n:]) for r in M)

    def rank(self, rows: Iterable[Sequence[int]]) -> int:
        M = [list(r) for r in rows]
        if not M:
            return 0
        rk = 0
        ncols = len(M[0])
        for c in range(ncols):
            piv = next((r for r in range(rk, len(M)) if M[r][c]), None)
            if piv is None:
                continue
            M[rk], M[piv] = M[piv], M[rk]
            inv = self.inv_t[M[rk][c]]
            for r in range(len(M)):
                if r != rk and M[r][c]:
                    f = self.mul_t[M[r][c]][inv]
                    M[r] = [self.sub_t[x][self.mul_t[f][y]] for x, y in zip(M[r], M[rk])]
            rk += 1
        return rk

    def solve(self, A: Matrix, b: Sequence[int]) -> tuple[int, ...] | None:
        """Some solution x of ``A x = b`` or None."""
        n = len(A[0])
        M = [list(r) + [v] for r, v in zip(A, b)]
        pivots = []
        rk = 0
        for c in range(n):
            piv = next((r for r in range(rk, len(M)) if M[r][c]), None)
            if piv is None:
                continue
            M[rk], M[piv] = M[piv], M[rk]
            inv = self.inv_t[M[rk][c]]
            M[rk] = [self.mul_t[inv][x] for x in M[rk]]
            for r in range(len(M)):
                if r != rk and M[r][c]:
                    f = M[r][c]
                    M[r] = [self.sub_t[x][self.mul_t[f][y]] for x, y in zip(M[r], M[rk])]
            pivots.append(c)
            rk += 1
        if any(M[r][n] for r in range(rk, len(M))):
            return None
        x = [0] * n
        for r, c in enumerate(pivots):
            x[c] = M[r][n]
        return tuple(x)

    def frob_matrix(self, A: Matrix, t: int = 1) -> Matrix:
        if t % self.k == 0:
            return A
        return tuple(tuple(self.frob(x, t) for x in row) for row in A)

    def scalar_matrix(self, n: int, c: int) -> Matrix:
        return tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> GF:
    return GF(p, k)
