"""Twisted conjugacy classes, minimal-length sets, ellipticity and stabilizers.

Two elements are •-conjugate when ``w' = a^-1 w a^•``.  Classes are found by
closing under the elementary moves ``w -> s_i w s_{i•}``, which generate the
whole twisted action.  Everything here enumerates exhaustively; it is meant
for groups of order up to a few thousand.

The second half builds the explicit elliptic representatives and stabilizer
generators for the classical groups, in the signed-permutation picture of
:mod:`weylkit.coxeter`.  Cycle notation in the classical constructions uses
the involution ``x -> nn+1-x`` of ``[1, nn]`` (``nn = 2n``).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .coxeter import CoxeterSystem, SystemError_, WeylElement, make_system

__all__ = [
    "BulletConjClass",
    "PartitionSignature",
    "StabilizerGroup",
    "bullet_class",
    "all_bullet_classes",
    "is_bullet_elliptic",
    "c_min",
    "stabilizer",
    "generated_subgroup",
    "is_abelian",
    "classical_w",
    "classical_generators",
    "classical_element",
    "verify_12a_hypotheses",
    "class_report",
    "D4Example",
    "d4_example",
    "partitions",
]


@dataclass(frozen=True)
class BulletConjClass:
    system: CoxeterSystem
    elements: tuple[WeylElement, ...]
    min_length: int
    c_min: tuple[WeylElement, ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def representative(self) -> WeylElement:
        """ShortLex-first element of C_min."""
        return self.c_min[0]

    def __contains__(self, w: WeylElement) -> bool:
        return w in set(self.elements)


def bullet_class(w: WeylElement) -> BulletConjClass:
    """Closure of ``{w}`` under ``x -> s_i x s_{i•}``."""
    W = w.system
    seen = {w}
    frontier = [w]
    while frontier:
        nxt = []
        for x in frontier:
            for i in range(W.rank):
                y = W.twisted_move(i, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    elts = tuple(sorted(seen, key=lambda x: x.sort_key()))
    m = elts[0].length
    cmin = tuple(x for x in elts if x.length == m)
    return BulletConjClass(W, elts, m, cmin)


def all_bullet_classes(W: CoxeterSystem) -> list[BulletConjClass]:
    """All •-conjugacy classes, ordered by their ShortLex-first element."""
    remaining = set(W.elements())
    out = []
    for w in W.elements():
        if w in remaining:
            C = bullet_class(w)
            remaining.difference_update(C.elements)
            out.append(C)
    return out


def _bullet_closure(W: CoxeterSystem, J: Iterable[int]) -> frozenset[int]:
    J = set(J)
    while True:
        more = {W.bullet[j] for j in J} - J
        if not more:
            return frozenset(J)
        J |= more


def is_bullet_elliptic(C: BulletConjClass) -> bool:
    """True iff no element lies in a proper •-stable standard parabolic.

    ``w`` lies in ``W_J`` iff ``support(w)`` is contained in J, so it is enough
    to check whether the •-closure of some element's support is proper.
    """
    W = C.system
    full = frozenset(range(W.rank))
    return all(_bullet_closure(W, W.support(x)) == full for x in C.elements)


def c_min(C: BulletConjClass) -> tuple[WeylElement, ...]:
    return C.c_min


@dataclass(frozen=True)
class StabilizerGroup:
    """The twisted stabilizer ``W_w = {z : z^-1 w z^• = w}``."""

    base: WeylElement
    elements: tuple[WeylElement, ...]
    generators: tuple[tuple[str, WeylElement], ...] = field(default=())

    @property
    def order(self) -> int:
        return len(self.elements)

    def poincare(self) -> list[int]:
        """Coefficients ``n_i`` of ``sum n_i t^i`` (number of elements of length i)."""
        counts = Counter(z.length for z in self.elements)
        top = max(counts)
        return [counts.get(i, 0) for i in range(top + 1)]

    def contains(self, z: WeylElement) -> bool:
        return z in set(self.elements)


def stabilizer(w: WeylElement) -> StabilizerGroup:
    W = w.system
    elts = tuple(z for z in W.elements() if w * W.bullet_apply(z) == z * w)
    return StabilizerGroup(w, elts)


def generated_subgroup(gens: Sequence[WeylElement]) -> frozenset[WeylElement]:
    if not gens:
        raise ValueError("need at least one generator to know the system")
    W = gens[0].system
    seen = {W.identity}
    frontier = [W.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def is_abelian(elements: Sequence[WeylElement]) -> bool:
    elts = list(elements)
    return all(a * b == b * a for a in elts for b in elts)


def format_poincare(coeffs: Sequence[int]) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mono = "1" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if i == 0:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) or "0"


# ---------------------------------------------------------------------------
# Reports


def verify_12a_hypotheses(C: BulletConjClass) -> dict:
    """Ellipticity, |C_min| and stabilizer order; non-elliptic classes are skipped."""
    ell = is_bullet_elliptic(C)
    rep = C.representative
    out = {
        "elliptic": ell,
        "c_min_size": len(C.c_min),
        "stabilizer_order": stabilizer(rep).order if ell else None,
        "skip": not ell,
    }
    return out


def class_report(C: BulletConjClass) -> dict:
    W = C.system
    rep = C.representative
    stab = stabilizer(rep)
    return {
        "representative": W.format_word(rep.word()),
        "size": C.size,
        "min_length": C.min_length,
        "c_min_size": len(C.c_min),
        "elliptic": is_bullet_elliptic(C),
        "stabilizer_order": stab.order,
        "stabilizer_poincare": format_poincare(stab.poincare()),
    }


# ---------------------------------------------------------------------------
# Classical constructions


@dataclass(frozen=True)
class PartitionSignature:
    """Parts ``p_1 >= ... >= p_sigma > 0``."""

    parts: tuple[int, ...]

    def __post_init__(self):
        p = tuple(self.parts)
        if not p or any(x <= 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise SystemError_(f"invalid partition {p}")
        object.__setattr__(self, "parts", p)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def sigma(self) -> int:
        return len(self.parts)

    def before(self, r: int) -> int:
        """``p_{<r}`` for 1-based r."""
        return sum(self.parts[: r - 1])

    def part(self, r: int) -> int:
        return self.parts[r - 1]

    @property
    def multiplicities(self) -> tuple[int, ...]:
        out: list[int] = []
        prev = None
        for x in self.parts:
            if x == prev:
                out[-1] += 1
            else:
                out.append(1)
            prev = x
        return tuple(out)


def partitions(n: int) -> list[tuple[int, ...]]:
    """All partitions of n as weakly decreasing tuples."""
    out: list[tuple[int, ...]] = []

    def rec(rest: int, cap: int, acc: list[int]):
        if rest == 0:
            out.append(tuple(acc))
            return
        for k in range(min(rest, cap), 0, -1):
            rec(rest - k, k, acc + [k])

    rec(n, n, [])
    return out


def _as_signature(p) -> PartitionSignature:
    return p if isinstance(p, PartitionSignature) else PartitionSignature(tuple(p))


def _mirror(nn: int, x: int) -> int:
    return nn + 1 - x


def _cycle_images(nn: int, cycles: Iterable[Sequence[int]]) -> list[int]:
    img = list(range(1, nn + 1))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a - 1] = b
    return img


def w_cycle(p: PartitionSignature, r: int) -> list[int]:
    """The 2p_r-cycle of ``w_r``: e_{a+1} -> ... -> e_{a+p_r} -> -e_{a+1}.

    Written on ``[1, nn]``: a+1 -> ... -> a+p_r -> nn-a -> ... -> nn-a-p_r+1 -> a+1.
    """
    nn = 2 * p.n
    a = p.before(r)
    up = [a + j for j in range(1, p.part(r) + 1)]
    return up + [_mirror(nn, x) for x in up]


def w_r_images(p: PartitionSignature, r: int) -> list[int]:
    return _cycle_images(2 * p.n, [w_cycle(p, r)])


def h_r_images(p: PartitionSignature, r: int) -> list[int]:
    """Involution swapping block r with block r+1 (requires p_r = p_{r+1})."""
    if not (1 <= r < p.sigma) or p.part(r) != p.part(r + 1):
        raise SystemError_(f"h_{r} needs p_r = p_(r+1)")
    nn = 2 * p.n
    a, b = p.before(r), p.before(r + 1)
    cycles = []
    for j in range(1, p.part(r) + 1):
        cycles.append([a + j, b + j])
        cycles.append([_mirror(nn, a + j), _mirror(nn, b + j)])
    return _cycle_images(nn, cycles)


def _system_for(p: PartitionSignature, variant: str, W: CoxeterSystem | None) -> CoxeterSystem:
    variant = variant.upper()
    if variant not in ("BC", "B", "C", "D"):
        raise SystemError_(f"unknown variant {variant}")
    if variant == "D" and p.sigma % 2:
        raise SystemError_("type D needs an even number of parts")
    if W is None:
        W = make_system("D" if variant == "D" else "B", p.n)
    if W.rank != p.n:
        raise SystemError_("system rank does not match the partition")
    return W


def classical_w(p, variant: str = "BC", W: CoxeterSystem | None = None):
    """Return ``(w, [w_1, ..., w_sigma])`` with ``w = w_1 ... w_sigma``.

    For ``variant="D"`` the elements live in the type D system; the factors
    ``w_r`` are then odd and are returned as signed-permutation image lists
    instead of group elements.
    """
    p = _as_signature(p)
    W = _system_for(p, variant, W)
    nn = 2 * p.n
    imgs = [w_r_images(p, r) for r in range(1, p.sigma + 1)]
    total = list(range(1, nn + 1))
    for im in imgs:
        # left-to-right product
        total = [im[x - 1] for x in total]
    w = W.from_permutation(total)
    if variant.upper() == "D":
        return w, imgs
    return w, [W.from_permutation(im) for im in imgs]


def _compose_lr(*images: Sequence[int]) -> list[int]:
    total = list(range(1, len(images[0]) + 1))
    for im in images:
        total = [im[x - 1] for x in total]
    return total


def _inverse_images(im: Sequence[int]) -> list[int]:
    out = [0] * len(im)
    for x, y in enumerate(im, start=1):
        out[y - 1] = x
    return out


def classical_element(p, name: str, variant: str = "BC", W: CoxeterSystem | None = None) -> WeylElement:
    """Named element ``w_r``, ``h_r``, ``w'_r`` or ``h'_{sigma-1}``.

    ``name`` is ``"w3"``, ``"h1"``, ``"w'2"`` or ``"h'"`` (the latter is
    ``w_sigma^-1 h_{sigma-1} w_sigma``).
    """
    p = _as_signature(p)
    W = _system_for(p, variant, W)
    s = p.sigma
    if name == "h'":
        ws = w_r_images(p, s)
        im = _compose_lr(_inverse_images(ws), h_r_images(p, s - 1), ws)
        return W.from_permutation(im)
    if name.startswith("w'"):
        r = int(name[2:])
        return W.from_permutation(_compose_lr(w_r_images(p, r), w_r_images(p, s)))
    if name.startswith("w"):
        return W.from_permutation(w_r_images(p, int(name[1:])))
    if name.startswith("h"):
        return W.from_permutation(h_r_images(p, int(name[1:])))
    raise SystemError_(f"unknown generator name {name!r}")


def classical_generators(p, variant: str = "BC", W: CoxeterSystem | None = None) -> list[tuple[str, WeylElement]]:
    """Stabilizer generators of the classical representative.

    The rule for the factors ``w_r`` keeps ``r`` when ``p_r > p_{r+1}``: the
    last index of each block of equal parts.
    """
    p = _as_signature(p)
    W = _system_for(p, variant, W)
    s = p.sigma
    names: list[str] = []
    if variant.upper() != "D":
        names.append(f"w{s}")
        names += [f"w{r}" for r in range(1, s) if p.part(r) > p.part(r + 1)]
        names += [f"h{r}" for r in range(1, s) if p.part(r) == p.part(r + 1)]
    elif p.part(s - 1) > p.part(s):
        names.append(f"w'{s}")
        names += [f"w'{r}" for r in range(1, s) if p.part(r) > p.part(r + 1)]
        names += [f"h{r}" for r in range(1, s - 1) if p.part(r) == p.part(r + 1)]
    else:
        names.append(f"w'{s}")
        names += [f"w'{r}" for r in range(1, s - 1) if p.part(r) > p.part(r + 1)]
        names.append("h'")
        names += [f"h{r}" for r in range(1, s) if p.part(r) == p.part(r + 1)]
    return [(nm, classical_element(p, nm, variant, W)) for nm in names]


# ---------------------------------------------------------------------------
# The D4 example with generators 0 (trivalent node) and 1, 2, 3 (commuting).


@dataclass(frozen=True)
class D4Example:
    system: CoxeterSystem
    label_map: dict  # example label -> generator index
    i: int
    j: int
    k: int

    def idx(self, x) -> int:
        return self.label_map[x]

    def word(self, letters: Sequence) -> tuple[int, ...]:
        return tuple(self.label_map[x] for x in letters)

    def element(self, letters: Sequence) -> WeylElement:
        return self.system.evaluate(self.word(letters))

    @property
    def w(self) -> WeylElement:
        i, j, k = self.i, self.j, self.k
        return self.element([i, 0, j, 0, k, 0])

    @property
    def alpha(self) -> WeylElement:
        return self.element([0, self.i, self.j, 0])

    @property
    def beta(self) -> WeylElement:
        return self.element([self.j, self.k])

    @property
    def gamma(self) -> WeylElement:
        i, k = self.i, self.k
        return self.element([i, 0, k, i, 0, i])


def d4_example(i: int = 1, j: int = 2, k: int = 3, W: CoxeterSystem | None = None) -> D4Example:
    """The D4 setup with ``0`` the trivalent node; ``(i, j, k)`` a permutation of 1, 2, 3."""
    if sorted((i, j, k)) != [1, 2, 3]:
        raise SystemError_("(i, j, k) must be a permutation of (1, 2, 3)")
    W = W or make_system("D", 4)
    # D4 labels are 1, 2, 3, 3' with 2 trivalent
    label_map = {0: W.index("2"), 1: W.index("1"), 2: W.index("3"), 3: W.index("3'")}
    return D4Example(W, label_map, i, j, k)
