"""Iwahori-Hecke algebra with integer Laurent coefficients and the trace polynomials n_{w,w'}.

Quadratic relation ``t_s^2 = q + (q-1) t_s``; ``t_w t_s = t_{ws}`` when the
length goes up.  The trace ``n_{w,w'}`` is that of ``t_y -> t_w t_{y•} t_{w'^-1}``
on the standard basis, where ``t_{w'^-1}`` is the basis element of the
inverse group element.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .coxeter import CoxeterSystem, SystemError_, WeylElement

__all__ = ["LaurentPoly", "Q", "HeckeElement", "HeckeAlgebra", "n_trace", "specialize", "trace_table"]


class LaurentPoly:
    """Integer Laurent polynomial in q, stored as ``{exponent: coefficient}``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self._c = {e: int(v) for e, v in (coeffs or {}).items() if v}

    @classmethod
    def const(cls, a: int) -> "LaurentPoly":
        return cls({0: a})

    @classmethod
    def from_list(cls, coeffs: Iterable[int]) -> "LaurentPoly":
        """From ascending coefficients ``[c0, c1, ...]``."""
        return cls({i: c for i, c in enumerate(coeffs)})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._c)
        for e, v in other._c.items():
            out[e] = out.get(e, 0) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + v1 * v2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, v), = self._c.items()
            if abs(v) != 1:
                raise ValueError("coefficient is not a unit")
            return LaurentPoly({e * k: v ** -k})
        out = LaurentPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_polynomial(self) -> bool:
        return all(e >= 0 for e in self._c)

    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def __call__(self, x):
        """Exact evaluation; ints and Fractions stay exact."""
        total = 0
        for e, v in self._c.items():
            total += v * (Fraction(x) ** e if e < 0 else x ** e)
        return total

    def __str__(self) -> str:
        if not self._c:
            return "0"
        out = ""
        for e in sorted(self._c, reverse=True):
            v = self._c[e]
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            mag = abs(v)
            body = str(mag) if (mag != 1 or not mono) else ""
            if body and mono:
                body += "*"
            term = body + mono
            if not out:
                out = ("-" if v < 0 else "") + term
            else:
                out += ("-" if v < 0 else "+") + term
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


Q = LaurentPoly({1: 1})
_ONE = LaurentPoly.const(1)
_QM1 = Q - 1


def specialize(p: LaurentPoly, value):
    return p(value)


class HeckeElement:
    """Finite combination ``sum c_w t_w``."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "HeckeAlgebra", terms: Mapping[WeylElement, LaurentPoly]):
        self.algebra = algebra
        self.terms = {w: c for w, c in terms.items() if c}

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self.algebra._same(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return HeckeElement(self.algebra, out)

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return self.algebra.multiply(self, other)
        if isinstance(other, (int, LaurentPoly)):
            return HeckeElement(self.algebra, {w: c * other for w, c in self.terms.items()})
        return NotImplemented

    def __eq__(self, other) -> bool:
        return isinstance(other, HeckeElement) and self.algebra is other.algebra and self.terms == other.terms

    def coeff(self, w: WeylElement) -> LaurentPoly:
        return self.terms.get(w, LaurentPoly())

    def __repr__(self) -> str:
        W = self.algebra.W
        parts = [f"({c})*t[{W.format_word(w.word())}]" for w, c in sorted(self.terms.items(), key=lambda t: t[0].sort_key())]
        return " + ".join(parts) or "0"


class HeckeAlgebra:
    def __init__(self, W: CoxeterSystem):
        self.W = W

    def _same(self, other: HeckeElement) -> None:
        if other.algebra is not self and other.algebra.W is not self.W:
            raise SystemError_("Hecke elements from different systems")

    def t(self, w: WeylElement | str) -> HeckeElement:
        if isinstance(w, str):
            w = self.W.element(w)
        return HeckeElement(self, {w: _ONE})

    def one(self) -> HeckeElement:
        return self.t(self.W.identity)

    def _rmul_s(self, terms: dict, i: int) -> dict:
        W = self.W
        out: dict = {}
        for x, c in terms.items():
            xs = W.rmul(x, i)
            if xs.length > x.length:
                out[xs] = out[xs] + c if xs in out else c
            else:
                v = c * Q
                out[xs] = out[xs] + v if xs in out else v
                v = c * _QM1
                out[x] = out[x] + v if x in out else v
        return {w: c for w, c in out.items() if c}

    def _lmul_s(self, i: int, terms: dict) -> dict:
        W = self.W
        out: dict = {}
        for x, c in terms.items():
            sx = W.lmul(i, x)
            if sx.length > x.length:
                out[sx] = out[sx] + c if sx in out else c
            else:
                v = c * Q
                out[sx] = out[sx] + v if sx in out else v
                v = c * _QM1
                out[x] = out[x] + v if x in out else v
        return {w: c for w, c in out.items() if c}

    def multiply(self, a: HeckeElement, b: HeckeElement) -> HeckeElement:
        self._same(a)
        self._same(b)
        total: dict = {}
        for w, c in b.terms.items():
            cur = dict(a.terms)
            for i in w.word():
                cur = self._rmul_s(cur, i)
            for x, d in cur.items():
                v = d * c
                total[x] = total[x] + v if x in total else v
        return HeckeElement(self, total)

    def sandwich(self, w: WeylElement, y: WeylElement, v: WeylElement) -> dict:
        """``t_w t_y t_v`` as a dict."""
        cur = {y: _ONE}
        for i in reversed(w.word()):
            cur = self._lmul_s(i, cur)
        for i in v.word():
            cur = self._rmul_s(cur, i)
        return cur

    def n_trace(self, w: WeylElement, w2: WeylElement) -> LaurentPoly:
        W = self.W
        v = w2.inverse()
        total = LaurentPoly()
        for y in W.elements():
            img = self.sandwich(w, W.bullet_apply(y), v)
            c = img.get(y)
            if c is not None:
                total = total + c
        return total


def n_trace(w: WeylElement, w2: WeylElement) -> LaurentPoly:
    return HeckeAlgebra(w.system).n_trace(w, w2)


def trace_table(W: CoxeterSystem, pairs: Iterable[tuple[WeylElement, WeylElement]] | None = None) -> list[dict]:
    H = HeckeAlgebra(W)
    if pairs is None:
        elts = W.elements()
        pairs = [(a, b) for a in elts for b in elts]
    out = []
    for a, b in pairs:
        out.append({"w": W.format_word(a.word()), "w2": W.format_word(b.word()), "n": str(H.n_trace(a, b))})
    return out
