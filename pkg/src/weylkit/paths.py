"""The graph on C_min, paths in it, rewriting moves and the maps tau_w, tilde-tau_w.

A path is a base element together with signed steps ``(i, +1)`` / ``(i, -1)``.
A ``+`` step from ``v`` needs ``i in cl(v)``; a ``-`` step needs
``i• in car(v)``; both go to ``s_i v s_{i•}`` and must keep the length.
Literal syntax: ``[1.2.1; 1,2~,3']`` where ``~`` marks a barred letter.  The
head may be ``w`` when the base is supplied separately.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .conj import (
    BulletConjClass,
    PartitionSignature,
    bullet_class,
    classical_element,
    d4_example,
    generated_subgroup,
    stabilizer,
)
from .coxeter import CoxeterSystem, SystemError_, WeylElement

__all__ = [
    "PathError",
    "Path",
    "GammaGraph",
    "TauImage",
    "gamma_graph",
    "is_connected",
    "z_of_path",
    "braid_of_path",
    "apply_move",
    "free_reduce",
    "equivalence_search",
    "tau_image",
    "verify_stabilizer_image",
    "builtin_paths",
    "builtin_target",
    "make_path",
    "apply_moves",
    "parse_path",
    "format_path",
    "reduced_word_path",
]


class PathError(ValueError):
    pass


Step = tuple[int, int]


def _step(W: CoxeterSystem, v: WeylElement, i: int, eps: int) -> WeylElement | None:
    """Target of the step or None if it is not an edge of the graph."""
    if eps == 1:
        if i not in W.left_descents(v):
            return None
    elif eps == -1:
        if W.bullet[i] not in W.right_descents(v):
            return None
    else:
        return None
    v2 = W.twisted_move(i, v)
    return v2 if v2.length == v.length else None


@dataclass(frozen=True)
class Path:
    base: WeylElement
    steps: tuple[Step, ...] = ()

    @property
    def system(self) -> CoxeterSystem:
        return self.base.system

    def vertices(self) -> list[WeylElement]:
        """``w_1, ..., w_t``; raises PathError on the first invalid step."""
        W = self.system
        out = [self.base]
        v = self.base
        for k, (i, eps) in enumerate(self.steps):
            nxt = _step(W, v, i, eps)
            if nxt is None:
                raise PathError(f"step {k} ({format_step(W, (i, eps))}) is not an edge at {W.format_word(v.word())}")
            out.append(nxt)
            v = nxt
        return out

    def is_valid(self) -> bool:
        try:
            self.vertices()
        except PathError:
            return False
        return True

    @property
    def end(self) -> WeylElement:
        return self.vertices()[-1]

    def __len__(self) -> int:
        return len(self.steps)

    def __add__(self, other: "Path") -> "Path":
        if self.end != other.base:
            raise PathError("concatenation needs matching endpoints")
        return Path(self.base, self.steps + other.steps)

    def reverse(self) -> "Path":
        return Path(self.end, tuple((i, -e) for i, e in reversed(self.steps)))

    def letters(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.steps)

    def __str__(self) -> str:
        return format_path(self)


def format_step(W: CoxeterSystem, st: Step) -> str:
    return W.labels[st[0]] + ("~" if st[1] < 0 else "")


def format_path(p: Path, head: str | None = None) -> str:
    W = p.system
    if head is None:
        head = W.format_word(p.base.word()) or "e"
    return f"[{head}; " + ",".join(format_step(W, s) for s in p.steps) + "]"


_LIT = re.compile(r"^\s*\[\s*([^;\]]*)\s*;\s*(.*?)\s*\]\s*$")


def parse_steps(W: CoxeterSystem, text: str) -> tuple[Step, ...]:
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        eps = 1
        if tok.endswith("~"):
            eps, tok = -1, tok[:-1]
        out.append((W.index(tok), eps))
    return tuple(out)


def parse_path(W: CoxeterSystem, text: str, base: WeylElement | None = None) -> Path:
    """Parse ``[head; a,b~,c]``; ``head`` is a dotted word unless ``base`` is given."""
    m = _LIT.match(text)
    if not m:
        raise PathError(f"bad path literal {text!r}")
    head, body = m.groups()
    if base is None:
        base = W.element(head.strip())
    return Path(base, parse_steps(W, body))


def make_path(base: WeylElement, letters: Iterable) -> Path:
    """Steps from labels, indices or ``(label, sign)`` pairs; ``"x~"`` is barred."""
    W = base.system
    steps = []
    for x in letters:
        if isinstance(x, tuple):
            steps.append((W.index(x[0]), x[1]))
        elif isinstance(x, str) and x.endswith("~"):
            steps.append((W.index(x[:-1]), -1))
        else:
            steps.append((W.index(x), 1))
    return Path(base, tuple(steps))


def reduced_word_path(w: WeylElement, word: Sequence[int] | None = None) -> Path:
    """``[w; i_1, ..., i_r]`` for a reduced word of w (a path from w to w^•)."""
    word = w.word() if word is None else tuple(word)
    return Path(w, tuple((i, 1) for i in word))


def z_of_path(p: Path) -> WeylElement:
    p.vertices()
    return p.system.evaluate(p.letters())


def braid_of_path(p: Path):
    from .braid import BraidGroup

    p.vertices()
    B = BraidGroup.of(p.system)
    return B.from_signed_word(p.steps)


# ---------------------------------------------------------------------------
# graph


@dataclass(frozen=True)
class GammaGraph:
    vertices: tuple[WeylElement, ...]
    edges: tuple[tuple[WeylElement, int, WeylElement], ...]  # oriented w -i+-> w'

    def neighbours(self, v: WeylElement) -> list[tuple[int, int, WeylElement]]:
        """Steps ``(i, eps, target)`` leaving v, in a fixed order."""
        out = []
        for a, i, b in self.edges:
            if a == v:
                out.append((i, 1, b))
            if b == v:
                out.append((i, -1, a))
        out.sort(key=lambda t: (t[0], -t[1], t[2].sort_key()))
        return out


def gamma_graph(C: BulletConjClass) -> GammaGraph:
    W = C.system
    edges = []
    for v in C.c_min:
        for i in sorted(W.left_descents(v)):
            v2 = W.twisted_move(i, v)
            if v2.length == v.length:
                edges.append((v, i, v2))
    return GammaGraph(C.c_min, tuple(edges))


def _components(G: GammaGraph) -> int:
    adj: dict[WeylElement, set] = {v: set() for v in G.vertices}
    for a, _, b in G.edges:
        adj[a].add(b)
        adj[b].add(a)
    seen: set = set()
    count = 0
    for v in G.vertices:
        if v in seen:
            continue
        count += 1
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def is_connected(G: GammaGraph) -> bool:
    return _components(G) <= 1


def _tree_paths(G: GammaGraph, base: WeylElement) -> dict[WeylElement, Path]:
    """BFS spanning tree; ties broken by (label, sign, ShortLex target)."""
    tree = {base: Path(base)}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for i, eps, t in G.neighbours(v):
            if t not in tree:
                tree[t] = Path(base, tree[v].steps + ((i, eps),))
                queue.append(t)
    return tree


@dataclass(frozen=True)
class TauImage:
    base: WeylElement
    elements: frozenset
    certificates: tuple[tuple[WeylElement, Path], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def report(self) -> list[dict]:
        W = self.base.system
        head = W.format_word(self.base.word())
        return [{"generator": W.format_word(z.word()), "loop": format_path(p, head)} for z, p in self.certificates]


def tau_image(w: WeylElement, C: BulletConjClass | None = None) -> TauImage:
    """Subgroup of W_w generated by the z-values of the fundamental loops at w."""
    C = C or bullet_class(w)
    if w not in set(C.c_min):
        raise PathError("base point must lie in C_min")
    G = gamma_graph(C)
    tree = _tree_paths(G, w)
    if len(tree) != len(G.vertices):
        raise PathError("graph on C_min is disconnected")
    certs = []
    seen_z = set()
    for a, i, b in G.edges:
        loop = Path(w, tree[a].steps + ((i, 1),) + tree[b].reverse().steps)
        z = z_of_path(loop)
        if z != w.system.identity and z not in seen_z:
            seen_z.add(z)
            certs.append((z, loop))
    gens = [z for z, _ in certs]
    elts = generated_subgroup(gens) if gens else frozenset({w.system.identity})
    return TauImage(w, elts, tuple(certs))


def verify_stabilizer_image(C: BulletConjClass, all_bases: bool = True) -> dict:
    """Compare the image of tau_w with W_w at every (or the first) base point of C_min."""
    bases = C.c_min if all_bases else C.c_min[:1]
    per_base = []
    witnesses = None
    for w in bases:
        img = tau_image(w, C)
        stab = stabilizer(w)
        ok = img.elements == frozenset(stab.elements)
        per_base.append({"base": w.system.format_word(w.word()), "image_order": img.order,
                         "stabilizer_order": stab.order, "holds": ok})
        if witnesses is None:
            witnesses = img.report()
    return {"holds": all(b["holds"] for b in per_base), "per_base": per_base, "witnesses": witnesses}


# ---------------------------------------------------------------------------
# moves


MOVE_KINDS = ("i", "ii", "iii", "iv")


def _braid_block(W: CoxeterSystem, steps: Sequence[Step], k: int, sign: int) -> tuple[Step, ...] | None:
    if k + 1 >= len(steps):
        return None
    (i, e1), (j, e2) = steps[k], steps[k + 1]
    if i == j or e1 != sign or e2 != sign:
        return None
    m = W.coxeter_matrix[i][j]
    if k + m > len(steps):
        return None
    want = tuple(((i, j)[u % 2], sign) for u in range(m))
    if tuple(steps[k:k + m]) != want:
        return None
    return tuple(((j, i)[u % 2], sign) for u in range(m))


def _move_result(p: Path, k: int, kind: str) -> tuple[Step, ...] | None:
    W = p.system
    st = p.steps
    if kind in ("i", "ii"):
        if k + 1 >= len(st):
            return None
        (i, e1), (j, e2) = st[k], st[k + 1]
        want = (1, -1) if kind == "i" else (-1, 1)
        if i != j or (e1, e2) != want:
            return None
        return st[:k] + st[k + 2:]
    if kind in ("iii", "iv"):
        blk = _braid_block(W, st, k, 1 if kind == "iii" else -1)
        if blk is None:
            return None
        return st[:k] + blk + st[k + len(blk):]
    raise PathError(f"unknown move kind {kind!r}")


def apply_move(p: Path, position: int, kind: str) -> Path:
    new = _move_result(p, position, kind)
    if new is None:
        raise PathError(f"move ({kind}) does not match at position {position}")
    q = Path(p.base, new)
    if not q.is_valid():
        raise PathError(f"move ({kind}) at {position} leaves the graph")
    return q


def free_reduce(p: Path) -> tuple[Path, list[tuple[int, str]]]:
    """Apply moves (i)/(ii) leftmost-first until none applies."""
    moves = []
    st = list(p.steps)
    changed = True
    while changed:
        changed = False
        for k in range(len(st) - 1):
            (i, e1), (j, e2) = st[k], st[k + 1]
            if i == j and e1 == -e2:
                moves.append((k, "i" if e1 == 1 else "ii"))
                del st[k:k + 2]
                changed = True
                break
    return Path(p.base, tuple(st)), moves


def replay(p: Path, moves: Sequence[tuple[int, str]]) -> Path:
    for k, kind in moves:
        p = apply_move(p, k, kind)
    return p


def equivalence_search(p: Path, q: Path, depth_bound: int = 12, max_states: int = 200000,
                       insertions: int = 0):
    """Search from both ends (see :func:`_one_way_search`); None means unknown."""
    found = _one_way_search(p, q, depth_bound, max_states, insertions)
    if found is not None:
        return found
    back = _one_way_search(q, p, depth_bound, max_states, insertions)
    return None if back is None else invert_moves(q, back)


def _one_way_search(p: Path, q: Path, depth_bound: int, max_states: int, insertions: int):
    """Bounded BFS over braid moves with eager free cancellation.

    Returns a list of moves turning ``p`` into ``q``, or None when the bound
    is exhausted ("unknown", not "inequivalent").  Entries are
    ``(position, kind)`` or, for insertions of a cancelling pair,
    ``(position, tag, pair)``; :func:`apply_moves` replays either.

    With ``insertions > 0`` a step may also insert ``x, x~`` or ``x~, x``
    and immediately apply a braid move touching the inserted letters (an
    insertion on its own would be cancelled again); at most ``insertions``
    such steps are used.
    """
    if p.base != q.base:
        raise PathError("paths must share the base point")
    W = p.system
    p0, mp = free_reduce(p)
    q0, mq = free_reduce(q)
    if p0.end != q0.end:
        return None
    target = q0.steps
    tail = _invert_reductions(q, mq)
    if p0.steps == target:
        return mp + tail
    parent = {p0.steps: None}
    used = {p0.steps: 0}
    frontier = [p0.steps]

    def successors(st):
        cur = Path(p.base, st)
        for k in range(len(st)):
            for kind in ("iii", "iv"):
                new = _move_result(cur, k, kind)
                if new is not None:
                    yield new, [(k, kind)], 0
        if used[st] >= insertions:
            return
        for k in range(len(st) + 1):
            for x in range(W.rank):
                for pair in (((x, 1), (x, -1)), ((x, -1), (x, 1))):
                    ins = Path(p.base, st[:k] + pair + st[k:])
                    if not ins.is_valid():
                        continue
                    lo = max(0, k - max(max(row) for row in W.coxeter_matrix) + 1)
                    for pos in range(lo, k + 2):
                        for kind in ("iii", "iv"):
                            new = _move_result(ins, pos, kind)
                            if new is not None:
                                yield new, [(k, "ins", pair), (pos, kind)], 1

    for _ in range(depth_bound):
        nxt = []
        for st in frontier:
            for new, mv, cost in successors(st):
                cand = Path(p.base, new)
                if not cand.is_valid():
                    continue
                red, mr = free_reduce(cand)
                key = red.steps
                u = used[st] + cost
                if key in used and used[key] <= u:
                    continue
                used[key] = u
                parent[key] = (st, mv + mr)
                if key == target:
                    return mp + _trace(parent, key) + tail
                nxt.append(key)
                if len(parent) > max_states:
                    return None
        if not nxt:
            return None
        frontier = nxt
    return None


def _trace(parent, key) -> list:
    chunks = []
    while parent[key] is not None:
        prev, mv = parent[key]
        chunks.append(mv)
        key = prev
    out = []
    for mv in reversed(chunks):
        out += mv
    return out


def _invert_reductions(q: Path, moves: list[tuple[int, str]]) -> list:
    """Insertions that rebuild q from its free reduction."""
    states = [q.steps]
    st = list(q.steps)
    for k, _ in moves:
        del st[k:k + 2]
        states.append(tuple(st))
    out = []
    for (k, kind), before in zip(reversed(moves), reversed(states[:-1])):
        out.append((k, kind + "+", before[k:k + 2]))
    return out


def invert_moves(p: Path, moves: Sequence) -> list:
    """Move list taking ``apply_moves(p, moves)`` back to ``p``."""
    states = [p]
    for mv in moves:
        states.append(apply_moves(states[-1], [mv]))
    out = []
    for mv, before in zip(reversed(moves), reversed(states[:-1])):
        k = mv[0]
        if len(mv) == 3:
            out.append((k, "i" if mv[2][0][1] == 1 else "ii"))
        elif mv[1] in ("i", "ii"):
            out.append((k, mv[1] + "+", before.steps[k:k + 2]))
        else:
            out.append((k, mv[1]))
    return out


def apply_moves(p: Path, moves: Sequence) -> Path:
    """Replay a move list from :func:`equivalence_search` (insertions included)."""
    for mv in moves:
        if len(mv) == 3:
            k, _, pair = mv
            q = Path(p.base, p.steps[:k] + tuple(pair) + p.steps[k:])
            if not q.is_valid():
                raise PathError("insertion leaves the graph")
            p = q
        else:
            p = apply_move(p, mv[0], mv[1])
    return p


# ---------------------------------------------------------------------------
# builtin paths


def _sig(p) -> PartitionSignature:
    return p if isinstance(p, PartitionSignature) else PartitionSignature(tuple(p))


def _iota_letters(p: PartitionSignature, r: int) -> list:
    n, a, pr = p.n, sum(p.parts[:r]), p.part(r)
    return list(range(a, n + 1)) + list(range(n - 1, a - pr, -1))


def _iota_prime_letters(p: PartitionSignature, r: int) -> list:
    """Blocks ``B_k = (a-k+1, ..., a+p-2k)``, middle ``(a+p-1, a+p-3, ..., a-p+1)``, bars."""
    if not (1 <= r < p.sigma) or p.part(r) != p.part(r + 1):
        raise PathError("iota'_r needs p_r = p_(r+1)")
    a, q = sum(p.parts[:r]), p.part(r)
    blocks: list = []
    for k in range(1, q):
        blocks += list(range(a - k + 1, a + q - 2 * k + 1))
    middle = list(range(a + q - 1, a - q, -2))
    return blocks + middle + [f"{x}~" for x in reversed(blocks)]


def _iota_dprime_letters(p: PartitionSignature, r: int) -> list:
    n, a, pr, ps = p.n, sum(p.parts[:r]), p.part(r), p.part(p.sigma)
    return (list(range(a, n)) + [f"{n - 1}'"] + list(range(n - 2, a - pr, -1))
            + list(range(n - 1, n - ps, -1)))


def _iota_tilde_letters(p: PartitionSignature) -> list:
    """The h'_{sigma-1} loop, written for the last two blocks (offset ``n - 2p``)."""
    s = p.sigma
    q = p.part(s)
    if p.part(s - 1) != q:
        raise PathError("tilde-iota needs p_(sigma-1) = p_sigma")
    n = p.n
    c = n - 2 * q
    top = f"{n - 1}'"
    head = [top] + list(range(n - 2, q + c - 1, -1)) + list(range(q + c + 1, n - 1))
    for j in range(1, q):
        head += list(range(q + c - j, n - 2 - 2 * j + 1))
    middle = [top] + list(range(n - 3, c, -2))
    return head + middle + [f"{x}~" if isinstance(x, int) else x + "~" for x in reversed(head)]


def _labels(W: CoxeterSystem, letters: Iterable) -> list:
    out = []
    for x in letters:
        if isinstance(x, int):
            out.append(str(x))
        else:
            out.append(x)
    return out


def builtin_paths(example: str, W: CoxeterSystem | None = None, p=None, r: int | None = None,
                  ijk: tuple[int, int, int] = (1, 2, 3), literal: bool = False):
    """Paths displayed for the D4 example and the classical constructions.

    ``example`` is one of ``d4`` (returns a dict iota/iota'/iota''),
    ``bn`` (iota_r), ``bn_h`` (iota'_r), ``dn`` (iota''_r), ``dn_h`` (iota'_r in
    type D) and ``dn_tilde``.  Classical paths are based at the element of
    :func:`weylkit.conj.classical_w`.

    Two type D displays need repair; ``literal=True`` returns them unrepaired:

    * iota''_sigma with p_sigma = 1 reads ``[w; (n-1)']`` but w'_sigma = w_sigma^2
      is trivial there, so the repaired loop is empty.
    * tilde-iota realises ``w_sigma h_{sigma-1} w_sigma^-1``; conjugating by
      iota''_sigma turns it into ``h'_{sigma-1} = w_sigma^-1 h_{sigma-1} w_sigma``.
    """
    from .conj import classical_w

    if example == "d4":
        ex = d4_example(*ijk, W=W)
        i, j, k = ex.i, ex.j, ex.k
        w = ex.w
        L = ex.label_map
        def mk(seq):
            return Path(w, tuple((L[x], e) for x, e in seq))
        return {
            "iota": mk([(0, -1), (i, 1), (j, 1), (0, 1)]),
            "iota'": mk([(j, 1), (k, 1)]),
            "iota''": mk([(i, 1), (0, 1), (k, 1), (i, 1), (0, -1), (i, -1)]),
            "example": ex,
        }
    p = _sig(p)
    if example in ("bn", "bn_h"):
        w, _ = classical_w(p, "BC", W)
        letters = _iota_letters(p, r) if example == "bn" else _iota_prime_letters(p, r)
    elif example in ("dn", "dn_h", "dn_tilde"):
        w, _ = classical_w(p, "D", W)
        if example == "dn":
            if not literal and r == p.sigma and p.part(r) == 1:
                return Path(w)
            letters = _iota_dprime_letters(p, r)
        elif example == "dn_h":
            letters = _iota_prime_letters(p, r)
        else:
            loop = make_path(w, _labels(w.system, _iota_tilde_letters(p)))
            if literal:
                return loop
            conj = builtin_paths("dn", w.system, p, p.sigma)
            return conj.reverse() + loop + conj
    else:
        raise PathError(f"unknown builtin example {example!r}")
    return make_path(w, _labels(w.system, letters))


def builtin_target(example: str, p, r: int | None = None, W: CoxeterSystem | None = None) -> WeylElement:
    """The generator a builtin classical path is claimed to realise."""
    p = _sig(p)
    name = {"bn": f"w{r}", "bn_h": f"h{r}", "dn": f"w'{r}", "dn_h": f"h{r}", "dn_tilde": "h'"}[example]
    variant = "D" if example.startswith("dn") else "BC"
    return classical_element(p, name, variant, W)
