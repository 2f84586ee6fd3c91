"""Finite Weyl groups realized as permutations of their root systems.

Every system is built from a Cartan matrix.  Roots are integer vectors in
simple-root coordinates, and a group element is stored as the permutation it
induces on the full root set.  That makes products, inverses, lengths and
descent sets exact and cheap at the ranks used here (up to E8, 240 roots).

Classical types also carry an ambient realization:

* type A_n: permutations of ``[1, n+1]``;
* types B_n, C_n, D_n: permutations of ``[1, 2n]`` commuting with
  ``i -> 2n+1-i`` (signed permutations; position ``2n+1-i`` stands for
  ``-e_i``).  B and C share this group.

Permutations given by their image lists are read in *left-to-right*
composition order: a product ``xy`` of permutations means "apply x, then y".
Under that reading the map from permutations to group elements is a
homomorphism and it agrees with the cycle notation used for the classical
stabilizer generators in :mod:`weylkit.conj`.

>>> W = make_system("A", 2)
>>> W.order()
6
>>> W.longest_element().length
3
>>> W.format_word(W.reduced_word(W.longest_element()))
'1.2.1'
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Sequence

__all__ = [
    "CoxeterSystem",
    "WeylElement",
    "SystemError_",
    "make_system",
    "parse_system",
    "cartan_matrix",
]

# eager enumeration below this order; larger groups are enumerated on demand
_EAGER_ORDER = 6000


class SystemError_(ValueError):
    """Invalid Coxeter system data (bad type, rank, bullet or word)."""


# ---------------------------------------------------------------------------
# Cartan data


def _classical_simple_roots(type_tag: str, rank: int) -> list[tuple[int, ...]]:
    """Simple roots in the ambient e-basis (length n+1 for A, n otherwise)."""
    n = rank
    if type_tag == "A":
        out = []
        for i in range(n):
            v = [0] * (n + 1)
            v[i], v[i + 1] = 1, -1
            out.append(tuple(v))
        return out
    out = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        out.append(tuple(v))
    last = [0] * n
    if type_tag in ("B", "C"):
        # B and C are realized by the same signed-permutation group
        last[n - 1] = 1
    elif type_tag == "D":
        if n < 2:
            raise SystemError_("type D needs rank >= 2")
        last[n - 2], last[n - 1] = 1, 1
    else:
        raise SystemError_(f"no ambient realization for type {type_tag}")
    out.append(tuple(last))
    return out


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


_EXCEPTIONAL_EDGES = {
    # Bourbaki labels; every listed edge has m(i,j) = 3
    "E": {
        6: [(1, 3), (3, 4), (4, 2), (4, 5), (5, 6)],
        7: [(1, 3), (3, 4), (4, 2), (4, 5), (5, 6), (6, 7)],
        8: [(1, 3), (3, 4), (4, 2), (4, 5), (5, 6), (6, 7), (7, 8)],
    },
}


def cartan_matrix(type_tag: str, rank: int) -> list[list[int]]:
    """Cartan matrix ``A[i][j] = <alpha_i^vee, alpha_j>`` (0-based indices)."""
    if type_tag in ("A", "B", "C", "D"):
        simple = _classical_simple_roots(type_tag, rank)
        return [
            [int(Fraction(2 * _dot(a, b), _dot(a, a))) for b in simple] for a in simple
        ]
    if type_tag == "E":
        if rank not in _EXCEPTIONAL_EDGES["E"]:
            raise SystemError_(f"type E needs rank 6, 7 or 8, got {rank}")
        A = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
        for i, j in _EXCEPTIONAL_EDGES["E"][rank]:
            A[i - 1][j - 1] = A[j - 1][i - 1] = -1
        return A
    if type_tag == "F" and rank == 4:
        return [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
    if type_tag == "G" and rank == 2:
        return [[2, -1], [-3, 2]]
    raise SystemError_(f"unsupported type {type_tag}{rank}")


def _coxeter_entry(aij: int, aji: int) -> int:
    prod = aij * aji
    table = {0: 2, 1: 3, 2: 4, 3: 6}
    if prod not in table:
        raise SystemError_("Cartan data does not define a finite Coxeter group")
    return table[prod]


def _degrees_order(type_tag: str, rank: int) -> int | None:
    n = rank
    if type_tag == "A":
        return factorial(n + 1)
    if type_tag in ("B", "C"):
        return 2**n * factorial(n)
    if type_tag == "D":
        return 2 ** (n - 1) * factorial(n)
    known = {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
             ("F", 4): 1152, ("G", 2): 12}
    return known.get((type_tag, n))


# ---------------------------------------------------------------------------


class WeylElement:
    """An element of a finite Weyl group, stored as a root permutation.

    ``perm[k]`` is the index of the image of root ``k``; indices ``< N`` are
    positive roots and ``k + N`` is the negative of root ``k``.
    """

    __slots__ = ("system", "perm", "length")

    def __init__(self, system: "CoxeterSystem", perm: tuple[int, ...]):
        self.system = system
        self.perm = perm
        N = system.npos
        self.length = sum(1 for k in range(N) if perm[k] >= N)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeylElement)
            and other.system is self.system
            and other.perm == self.perm
        )

    def __hash__(self) -> int:
        return hash(self.perm)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return self.system.multiply(self, other)

    def __repr__(self) -> str:
        word = self.system.format_word(self.system.reduced_word(self))
        return f"WeylElement({self.system.name}: {word or 'e'})"

    def inverse(self) -> "WeylElement":
        return self.system.invert(self)

    def word(self) -> tuple[int, ...]:
        return self.system.reduced_word(self)

    def sort_key(self) -> tuple:
        """ShortLex key: length first, then the canonical word."""
        return (self.length, self.system.reduced_word(self))


class CoxeterSystem:
    """A finite Weyl group with simple reflections and diagram automorphism.

    Parameters
    ----------
    cartan : square integer matrix
        ``cartan[i][j] = <alpha_i^vee, alpha_j>``.
    type_tag : str
        One of ``A, B, C, D`` or ``generic``.
    labels : sequence of str
        Printable names of the generators, in index order.
    bullet : sequence of int, optional
        The diagram automorphism as a permutation of the indices.
    """

    def __init__(
        self,
        cartan: Sequence[Sequence[int]],
        type_tag: str,
        labels: Sequence[str],
        bullet: Sequence[int] | None = None,
        name: str | None = None,
        family: str | None = None,
        ambient: Sequence[Sequence[int]] | None = None,
        expected_order: int | None = None,
    ):
        r = len(cartan)
        if r < 1:
            raise SystemError_("rank must be >= 1")
        self.rank = r
        self.cartan = tuple(tuple(row) for row in cartan)
        self.type_tag = type_tag
        self.family = family or type_tag
        self.labels = tuple(labels)
        if len(self.labels) != r or len(set(self.labels)) != r:
            raise SystemError_("labels must be distinct, one per generator")
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        self.coxeter_matrix = tuple(
            tuple(1 if i == j else _coxeter_entry(self.cartan[i][j], self.cartan[j][i])
                  for j in range(r))
            for i in range(r)
        )
        self.bullet = tuple(range(r)) if bullet is None else tuple(bullet)
        if sorted(self.bullet) != list(range(r)):
            raise SystemError_("bullet must be a permutation of the index set")
        for i in range(r):
            for j in range(r):
                if self.cartan[self.bullet[i]][self.bullet[j]] != self.cartan[i][j]:
                    raise SystemError_("bullet is not a diagram automorphism")
        self.name = name or f"{type_tag}{r}"
        self.expected_order = expected_order
        self._build_roots()
        self._ambient = None
        if ambient is not None:
            self._attach_ambient(ambient)
        self.identity = WeylElement(self, tuple(range(2 * self.npos)))
        self._gens = tuple(WeylElement(self, p) for p in self._gen_perms)
        self._w0 = self._compute_longest()
        self._elements: tuple[WeylElement, ...] | None = None
        if expected_order is not None and expected_order <= _EAGER_ORDER:
            self._elements = tuple(self._enumerate())

    # -- roots ------------------------------------------------------------

    def _reflect(self, i: int, v: tuple[int, ...]) -> tuple[int, ...]:
        c = sum(self.cartan[i][j] * v[j] for j in range(self.rank))
        out = list(v)
        out[i] -= c
        return tuple(out)

    def _build_roots(self) -> None:
        r = self.rank
        simple = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
        seen = set(simple)
        frontier = list(simple)
        bound = 20000
        while frontier:
            nxt = []
            for v in frontier:
                for i in range(r):
                    u = self._reflect(i, v)
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            if len(seen) > bound:
                raise SystemError_("root system is infinite (not a finite Weyl group)")
            frontier = nxt
        pos = [v for v in seen if all(c >= 0 for c in v)]
        # simple roots first, then by height, then lexicographically
        pos.sort(key=lambda v: (sum(v), tuple(-c for c in v)))
        N = len(pos)
        self.npos = N
        self.positive_roots = tuple(pos)
        roots = pos + [tuple(-c for c in v) for v in pos]
        self.roots = tuple(roots)
        self._root_index = {v: k for k, v in enumerate(roots)}
        self._gen_perms = tuple(
            tuple(self._root_index[self._reflect(i, v)] for v in roots) for i in range(r)
        )
        self.simple_action = tuple(
            tuple(tuple(self._reflect(i, col)[k] for col in simple) for k in range(r))
            for i in range(r)
        )
        b = self.bullet
        self._bullet_perm = tuple(
            self._root_index[tuple(v[b.index(k)] for k in range(r))] for v in roots
        )
        inv = [0] * len(roots)
        for k, img in enumerate(self._bullet_perm):
            inv[img] = k
        self._bullet_inv = tuple(inv)

    def _attach_ambient(self, ambient: Sequence[Sequence[int]]) -> None:
        amb = [tuple(a) for a in ambient]
        dim = len(amb[0])
        vecs = {}
        for k, v in enumerate(self.roots):
            vec = tuple(sum(v[i] * amb[i][c] for i in range(self.rank)) for c in range(dim))
            vecs[vec] = k
        self._ambient = (amb, dim, vecs)

    def _compute_longest(self) -> WeylElement:
        w = self.identity
        while True:
            asc = [i for i in range(self.rank) if i not in self.right_descents(w)]
            if not asc:
                return w
            w = self.multiply(w, self._gens[asc[0]])

    # -- basic group operations ------------------------------------------

    def _check(self, *elts: WeylElement) -> None:
        for x in elts:
            if x.system is not self:
                raise SystemError_("elements belong to different systems")

    def multiply(self, a: WeylElement, b: WeylElement) -> WeylElement:
        self._check(a, b)
        pa = a.perm
        return WeylElement(self, tuple(pa[j] for j in b.perm))

    def invert(self, a: WeylElement) -> WeylElement:
        self._check(a)
        inv = [0] * len(a.perm)
        for k, img in enumerate(a.perm):
            inv[img] = k
        return WeylElement(self, tuple(inv))

    def generator(self, i: int | str) -> WeylElement:
        return self._gens[self.index(i)]

    @property
    def generators(self) -> tuple[WeylElement, ...]:
        return self._gens

    def length(self, w: WeylElement) -> int:
        return w.length

    def right_descents(self, w: WeylElement) -> frozenset[int]:
        """``car(w) = {i : l(w s_i) < l(w)}``, i.e. ``w(alpha_i) < 0``."""
        N = self.npos
        return frozenset(i for i in range(self.rank) if w.perm[i] >= N)

    def left_descents(self, w: WeylElement) -> frozenset[int]:
        """``cl(w) = {i : l(s_i w) < l(w)}``, i.e. ``w^-1(alpha_i) < 0``."""
        N = self.npos
        perm = w.perm
        return frozenset(img for img in perm[N:] if img < self.rank)

    def lmul(self, i: int, w: WeylElement) -> WeylElement:
        """``s_i w``."""
        g = self._gen_perms[i]
        return WeylElement(self, tuple(g[j] for j in w.perm))

    def rmul(self, w: WeylElement, i: int) -> WeylElement:
        """``w s_i``."""
        p = w.perm
        return WeylElement(self, tuple(p[j] for j in self._gen_perms[i]))

    def twisted_move(self, i: int, w: WeylElement) -> WeylElement:
        """``s_i w s_{i•}``."""
        return self.rmul(self.lmul(i, w), self.bullet[i])

    # -- words ------------------------------------------------------------

    def index(self, label: int | str) -> int:
        if isinstance(label, int):
            if 0 <= label < self.rank:
                return label
            raise SystemError_(f"generator index {label} out of range")
        if label in self._label_index:
            return self._label_index[label]
        raise SystemError_(f"unknown generator label {label!r} for {self.name}")

    def parse_word(self, text: str | Sequence) -> tuple[int, ...]:
        """Parse ``"1.2.1"`` (labels separated by dots) into indices."""
        if isinstance(text, str):
            text = text.strip()
            if text in ("", "e"):
                return ()
            parts = [p.strip() for p in text.split(".")]
        else:
            parts = list(text)
        return tuple(self.index(p) for p in parts)

    def format_word(self, word: Iterable[int]) -> str:
        return ".".join(self.labels[i] for i in word)

    def evaluate(self, word: Iterable[int | str]) -> WeylElement:
        perm = self.identity.perm
        for x in word:
            g = self._gen_perms[self.index(x)]
            perm = tuple(perm[j] for j in g)
        return WeylElement(self, perm)

    def element(self, text: str | Sequence) -> WeylElement:
        """Element from a dotted word, a label sequence or an index sequence."""
        return self.evaluate(self.parse_word(text))

    def reduced_word(self, w: WeylElement) -> tuple[int, ...]:
        """ShortLex-minimal reduced word (greedy smallest left descent)."""
        self._check(w)
        out = []
        N = self.npos
        perm = w.perm
        while True:
            # smallest i with w^-1(alpha_i) negative
            best = None
            for k in range(N, 2 * N):
                img = perm[k]
                if img < self.rank and (best is None or img < best):
                    best = img
            if best is None:
                return tuple(out)
            out.append(best)
            g = self._gen_perms[best]
            perm = tuple(g[j] for j in perm)

    def is_reduced(self, word: Iterable[int | str]) -> bool:
        idx = [self.index(x) for x in word]
        return self.evaluate(idx).length == len(idx)

    # -- bullet, support, w0 -------------------------------------------

    def bullet_apply(self, w: WeylElement, k: int = 1) -> WeylElement:
        """``w^{•^k}`` for any integer k."""
        self._check(w)
        k %= self.bullet_order()
        perm = w.perm
        for _ in range(k):
            # phi w phi^-1
            perm = tuple(self._bullet_perm[perm[self._bullet_inv[j]]] for j in range(len(perm)))
        return WeylElement(self, perm)

    def bullet_order(self) -> int:
        b = self.bullet
        k, cur = 1, b
        while cur != tuple(range(self.rank)):
            cur = tuple(b[c] for c in cur)
            k += 1
        return k

    def bullet_index(self, i: int, k: int = 1) -> int:
        for _ in range(k % self.bullet_order()):
            i = self.bullet[i]
        return i

    def support(self, w: WeylElement) -> frozenset[int]:
        return frozenset(self.reduced_word(w))

    def longest_element(self) -> WeylElement:
        return self._w0

    def order_of(self, w: WeylElement) -> int:
        """Multiplicative order of w."""
        k, cur = 1, w
        while cur != self.identity:
            cur = cur * w
            k += 1
        return k

    def twisted_order(self, w: WeylElement) -> int:
        """Smallest e >= 1 with ``w w^• ... w^{•^{e-1}} = 1``."""
        delta = self.bullet_order()
        e, prod = 1, w
        while prod != self.identity or e % delta:
            prod = prod * self.bullet_apply(w, e)
            e += 1
        return e

    # -- enumeration ----------------------------------------------------

    def _enumerate(self) -> Iterator[WeylElement]:
        seen = {self.identity.perm}
        frontier = [self.identity]
        while frontier:
            frontier.sort(key=lambda x: self.reduced_word(x))
            nxt = []
            for w in frontier:
                yield w
                for i in range(self.rank):
                    v = self.rmul(w, i)
                    if v.length > w.length and v.perm not in seen:
                        seen.add(v.perm)
                        nxt.append(v)
            frontier = nxt

    def elements(self) -> tuple[WeylElement, ...]:
        """All elements in ShortLex order (BFS by length)."""
        if self._elements is not None:
            return self._elements
        return tuple(self._enumerate())

    def order(self) -> int:
        if self._elements is not None:
            return len(self._elements)
        if self.expected_order is not None:
            return self.expected_order
        return len(self.elements())

    # -- ambient realizations --------------------------------------------

    def _require_ambient(self):
        if self._ambient is None:
            raise SystemError_(f"{self.name} has no permutation realization")
        return self._ambient

    def permutation_degree(self) -> int:
        """Size of the permuted set: n+1 for A_n, 2n for B/C/D."""
        amb, dim, _ = self._require_ambient()
        return dim if self.family == "A" else 2 * dim

    def _signed_image(self, images: Sequence[int], x: int) -> tuple[int, int]:
        """Image of e_x (1-based) as (sign, index) under a mirror-commuting perm."""
        nn = len(images)
        y = images[x - 1]
        if y <= nn // 2:
            return 1, y
        return -1, nn + 1 - y

    def from_permutation(self, images: Sequence[int]) -> WeylElement:
        """Element for a permutation given by its image list (1-based).

        For A_n the list has length n+1.  For B/C/D it has length 2n and must
        commute with ``i -> 2n+1-i``.  The permutation is read left-to-right
        (see the module docstring): the element returned acts on the ambient
        space by the *inverse* permutation.
        """
        amb, dim, vecs = self._require_ambient()
        images = list(images)
        m = len(images)
        if sorted(images) != list(range(1, m + 1)):
            raise SystemError_("not a permutation")
        inv = [0] * m
        for x, y in enumerate(images, start=1):
            inv[y - 1] = x
        if self.family == "A":
            if m != dim:
                raise SystemError_(f"expected a permutation of [1,{dim}]")

            def act(vec):
                out = [0] * dim
                for x in range(dim):
                    out[inv[x] - 1] += vec[x]
                return tuple(out)
        else:
            if m != 2 * dim:
                raise SystemError_(f"expected a permutation of [1,{2 * dim}]")
            for x in range(1, m + 1):
                if images[m - x] != m + 1 - images[x - 1]:
                    raise SystemError_("permutation does not commute with i -> nn+1-i")

            def act(vec):
                out = [0] * dim
                for x in range(1, dim + 1):
                    sign, y = self._signed_image(inv, x)
                    out[y - 1] += sign * vec[x - 1]
                return tuple(out)

        perm = []
        for v in self.roots:
            vec = tuple(sum(v[i] * amb[i][c] for i in range(self.rank)) for c in range(dim))
            img = act(vec)
            if img not in vecs:
                raise SystemError_(f"permutation is not in the Weyl group of {self.name}")
            perm.append(vecs[img])
        return WeylElement(self, tuple(perm))

    def to_permutation(self, w: WeylElement) -> tuple[int, ...]:
        """Inverse of :meth:`from_permutation` (1-based image list)."""
        self._require_ambient()
        m = self.permutation_degree()
        gens = [self._generator_permutation(i) for i in range(self.rank)]
        images = list(range(1, m + 1))
        # left-to-right: the word s_a s_b ... applies s_a first
        for i in self.reduced_word(w):
            g = gens[i]
            images = [g[y - 1] for y in images]
        return tuple(images)

    def _generator_permutation(self, i: int) -> tuple[int, ...]:
        m = self.permutation_degree()
        amb, dim, _ = self._require_ambient()
        root = amb[i]
        img = list(range(1, m + 1))
        if self.family == "A":
            a, b = [k + 1 for k, c in enumerate(root) if c]
            img[a - 1], img[b - 1] = b, a
            return tuple(img)

        def pos(k, sign):
            return k if sign > 0 else m + 1 - k

        nz = [(k + 1, c) for k, c in enumerate(root) if c]
        if len(nz) == 1:
            k, _ = nz[0]
            x, y = pos(k, 1), pos(k, -1)
            img[x - 1], img[y - 1] = y, x
            return tuple(img)
        (k1, c1), (k2, c2) = nz
        # reflection in e_k1 + c e_k2 swaps e_k1 <-> -c e_k2
        pairs = [(pos(k1, 1), pos(k2, -c2)), (pos(k1, -1), pos(k2, c2))]
        for x, y in pairs:
            img[x - 1], img[y - 1] = y, x
        return tuple(img)


# ---------------------------------------------------------------------------


def _bullet_from_spec(type_tag: str, rank: int, spec) -> list[int]:
    r = rank
    ident = list(range(r))
    if spec in (None, "identity", "1", False):
        return ident
    if isinstance(spec, (list, tuple)):
        return list(spec)
    if spec in ("flip", "*", True):
        if type_tag == "A":
            return list(reversed(ident))
        if type_tag == "D":
            b = ident[:]
            b[r - 2], b[r - 1] = r - 1, r - 2
            return b
        if type_tag == "E" and r == 6:
            # Bourbaki 1<->6, 3<->5, 2 and 4 fixed
            return [5, 1, 4, 3, 2, 0]
        raise SystemError_(f"{type_tag}{r} has no nontrivial diagram flip")
    if spec == "triality" and type_tag == "D" and r == 4:
        return [2, 1, 3, 0]
    raise SystemError_(f"unknown bullet specification {spec!r}")


def make_system(type_tag: str, rank: int, bullet_spec=None) -> CoxeterSystem:
    """Build a Weyl group of the given type.

    ``bullet_spec`` is ``"identity"`` (default), ``"flip"`` for the nontrivial
    diagram involution (A_n, D_n, E6), ``"triality"`` for D4, or an explicit
    index permutation.
    """
    type_tag = type_tag.upper()
    if rank < 1:
        raise SystemError_("rank must be >= 1")
    cartan = cartan_matrix(type_tag, rank)
    bullet = _bullet_from_spec(type_tag, rank, bullet_spec)
    if type_tag == "D":
        labels = [str(i) for i in range(1, rank)] + [f"{rank - 1}'"]
    else:
        labels = [str(i) for i in range(1, rank + 1)]
    ambient = _classical_simple_roots(type_tag, rank) if type_tag in "ABCD" else None
    is_flip = bullet != list(range(rank))
    name = f"{type_tag}{rank}" + ("*" if is_flip else "")
    tag = type_tag if type_tag in "ABCD" else "generic"
    return CoxeterSystem(
        cartan,
        tag,
        labels,
        bullet=bullet,
        name=name,
        family=type_tag,
        ambient=ambient,
        expected_order=_degrees_order(type_tag, rank),
    )


def parse_system(text: str) -> CoxeterSystem:
    """Parse ``"B4"``, ``"A3*"`` (trailing ``*`` = diagram flip), ``"E8"``."""
    text = text.strip()
    flip = text.endswith("*")
    core = text[:-1] if flip else text
    if len(core) < 2 or not core[0].isalpha() or not core[1:].isdigit():
        raise SystemError_(f"cannot parse system {text!r}")
    return make_system(core[0], int(core[1:]), "flip" if flip else "identity")
