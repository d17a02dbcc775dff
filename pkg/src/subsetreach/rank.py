"""Words of rank n-1, their signatures and the Gamma_1 graph.

A rank n-1 map misses exactly one state (``excl``), hits exactly one state
twice (``dupl``), and the two states sent to ``dupl`` are its ``root``.
The Gamma_1 graph has an edge ``excl(w) -> dupl(w)`` for every word ``w``
of rank n-1.  It is computed exactly from the closure of the letters
under composition, restricted to maps of rank at least n-1.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .automaton import AutomatonError, CapExceeded, Dfa, StateSet, Word, apply
from .power import ReachabilityIndex

DEFAULT_CLOSURE_CAP = 10**7


class RankError(AutomatonError):
    pass


class PreconditionError(AutomatonError):
    pass


@dataclass(frozen=True)
class Transformation:
    """Full map ``Q -> Q`` with 1-indexed images and a witness word."""

    images: tuple[int, ...]
    witness: Word = ()

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def rank(self) -> int:
        return len(set(self.images))

    def then(self, other: Transformation) -> Transformation:
        """Apply ``self`` first, then ``other``."""
        return Transformation(tuple(other.images[q - 1] for q in self.images), self.witness + other.witness)

    @classmethod
    def of_word(cls, dfa: Dfa, word) -> Transformation:
        w = dfa.check_word(word)
        return cls(tuple(x + 1 for x in dfa.transformation(w)), w)


@dataclass(frozen=True)
class RankSignature:
    excl: int
    dupl: int
    root: frozenset[int]
    witness: Word = ()

    @property
    def edge(self) -> tuple[int, int]:
        return (self.excl, self.dupl)


class RankDropped(NamedTuple):
    """Marker returned when a composition falls to rank n-2."""

    rank: int


def signature_of(t: Transformation) -> RankSignature:
    n = t.n
    if t.rank != n - 1:
        raise RankError(f"signature needs rank {n - 1}, got rank {t.rank}")
    hits: dict[int, list[int]] = {}
    for q, p in enumerate(t.images, 1):
        hits.setdefault(p, []).append(q)
    (excl,) = set(range(1, n + 1)) - hits.keys()
    (dupl,) = [p for p, qs in hits.items() if len(qs) == 2]
    return RankSignature(excl, dupl, frozenset(hits[dupl]), t.witness)


def compose_check(t1: Transformation, t2: Transformation) -> RankSignature | RankDropped:
    """Signature of ``t1`` followed by ``t2`` predicted from the two signatures
    (plus the image of ``dupl(t1)`` under ``t2``)."""
    s1 = signature_of(t1)
    s2 = signature_of(t2)
    if s1.excl not in s2.root:
        return RankDropped(t1.n - 2)
    return RankSignature(s2.excl, t2.images[s1.dupl - 1], s1.root, t1.witness + t2.witness)


@dataclass
class Closure:
    """Distinct maps of rank >= n-1 generated by the letters, with BFS-shortest,
    lexicographically least witnesses, in discovery order."""

    dfa: Dfa
    transformations: list[Transformation]

    def of_rank(self, r: int) -> list[Transformation]:
        return [t for t in self.transformations if t.rank == r]

    def near_permutations(self) -> list[Transformation]:
        return self.of_rank(self.dfa.n - 1)

    def __len__(self) -> int:
        return len(self.transformations)


def high_rank_closure(dfa: Dfa, cap: int = DEFAULT_CLOSURE_CAP) -> Closure:
    n = dfa.n
    maps = dfa.maps
    identity = tuple(range(n))
    seen = {identity: ()}
    order = [identity]
    queue = deque([identity])
    while queue:
        t = queue.popleft()
        w = seen[t]
        for l, m in enumerate(maps):
            u = tuple(m[x] for x in t)
            if u in seen:
                continue
            # rank never recovers along a word, so nothing below n-1 can lead back up
            if len(set(u)) < n - 1:
                continue
            seen[u] = w + (l,)
            if len(seen) > cap:
                raise CapExceeded("distinct transformations", cap)
            order.append(u)
            queue.append(u)
    return Closure(dfa, [Transformation(tuple(x + 1 for x in t), seen[t]) for t in order])


@dataclass
class Gamma1Graph:
    n: int
    edges: dict[tuple[int, int], Word]
    letters: tuple[str, ...] = ()

    def successors(self, u: int) -> list[int]:
        return sorted(v for (a, v) in self.edges if a == u)

    def in_degree(self, v: int) -> int:
        return sum(1 for (_, b) in self.edges if b == v)

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def format_word(self, w: Word) -> str:
        if not self.letters:
            return " ".join(map(str, w))
        sep = "" if all(len(x) == 1 for x in self.letters) else "."
        return sep.join(self.letters[l] for l in w)


def gamma1(dfa: Dfa, cap: int = DEFAULT_CLOSURE_CAP, closure: Closure | None = None) -> Gamma1Graph:
    if closure is None:
        closure = high_rank_closure(dfa, cap)
    edges: dict[tuple[int, int], Word] = {}
    # discovery order is (length, lexicographic), so the first witness per edge is the best
    for t in closure.near_permutations():
        sig = signature_of(t)
        edges.setdefault(sig.edge, t.witness)
    return Gamma1Graph(dfa.n, edges, dfa.letters)


def _reach(n: int, adjacency: dict[int, list[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adjacency.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def is_strongly_connected(g) -> bool:
    """Every node reaches every node.

    Accepts a ``Gamma1Graph`` or a pair ``(n, edges)`` over nodes ``1..n``.
    """
    n, edges = (g.n, g.edges) if isinstance(g, Gamma1Graph) else g
    if n <= 1:
        return True
    fwd: dict[int, list[int]] = {}
    back: dict[int, list[int]] = {}
    for u, v in edges:
        fwd.setdefault(u, []).append(v)
        back.setdefault(v, []).append(u)
    return len(_reach(n, fwd, 1)) == n and len(_reach(n, back, 1)) == n


class Edge(NamedTuple):
    source: int
    target: int
    witness: Word


def _proper(g: Gamma1Graph, s) -> StateSet:
    s = s if isinstance(s, StateSet) else StateSet.of(g.n, s)
    if s.n != g.n or len(s) == 0 or len(s) == g.n:
        raise PreconditionError("expected a non-empty proper subset of the nodes")
    return s


def intersecting_edge(g: Gamma1Graph, s) -> Edge | None:
    """First edge (in sorted order) leaving the complement of ``s`` into ``s``."""
    s = _proper(g, s)
    for u, v in sorted(g.edges):
        if u not in s and v in s:
            return Edge(u, v, g.edges[(u, v)])
    return None


def preimage(dfa: Dfa, s: StateSet, w: Word) -> StateSet:
    t = dfa.transformation(w)
    return StateSet.of(dfa.n, (q + 1 for q in range(dfa.n) if (t[q] + 1) in s))


def extend_set(dfa: Dfa, g: Gamma1Graph, s) -> tuple[StateSet, Word] | None:
    """Grow ``s`` by one state through an intersecting edge's witness.

    Returns ``(S', w)`` with ``|S'| = |s| + 1`` and ``S'·w = s``.
    """
    s = _proper(g, s)
    edge = intersecting_edge(g, s)
    if edge is None:
        return None
    bigger = preimage(dfa, s, edge.witness)
    assert len(bigger) == len(s) + 1 and apply(dfa, bigger, edge.witness) == s
    return bigger, edge.witness


def intersect_from_factorization(dfa: Dfa, g: Gamma1Graph, w1, w2) -> Edge:
    """Edge ``(excl(w2), dupl(w2))`` for a reaching word ``w1·w2`` whose last
    factor has rank n-1 and drops the size of the image by one."""
    w1 = dfa.check_word(w1)
    w2 = dfa.check_word(w2)
    t2 = Transformation.of_word(dfa, w2)
    if t2.rank != dfa.n - 1:
        raise PreconditionError(f"second factor has rank {t2.rank}, expected {dfa.n - 1}")
    before = apply(dfa, StateSet.full(dfa.n), w1)
    s = apply(dfa, before, w2)
    if len(before) != len(s) + 1:
        raise PreconditionError(f"image size goes {len(before)} -> {len(s)}, expected a drop of one")
    sig = signature_of(t2)
    if sig.excl in s or sig.dupl not in s:
        raise AssertionError(f"edge {sig.edge} does not intersect {s}")
    if sig.edge not in g.edges:
        raise AssertionError(f"edge {sig.edge} missing from the graph")
    return Edge(sig.excl, sig.dupl, w2)


def theorem_premise_holds(dfa: Dfa, s, index: ReachabilityIndex, closure: Closure) -> bool:
    """Whether ``s`` is reached from a reachable set one larger through a
    rank n-1 map that merges its two roots."""
    s = s if isinstance(s, StateSet) else StateSet.of(dfa.n, s)
    if len(s) == 0 or len(s) == dfa.n:
        raise PreconditionError("expected a non-empty proper subset")
    if s.mask not in index.dist:
        raise PreconditionError(f"{s} is not reachable")
    size = len(s) + 1
    candidates = [m for m in index.dist if m.bit_count() == size]
    for t in closure.near_permutations():
        sig = signature_of(t)
        root_mask = StateSet.of(dfa.n, sig.root).mask
        # only dupl can sit in s without excl; cheap filter first
        if sig.dupl not in s or sig.excl in s:
            continue
        m = [q - 1 for q in t.images]
        for big in candidates:
            if big & root_mask != root_mask:
                continue
            image = 0
            rest = big
            while rest:
                low = rest & -rest
                rest ^= low
                image |= 1 << m[low.bit_length() - 1]
            if image == s.mask:
                return True
    return False


def gamma1_triples(g: Gamma1Graph) -> str:
    return "".join(f"{u} {v} {g.format_word(g.edges[(u, v)])}\n" for u, v in g.edge_list())


def gamma1_dot(g: Gamma1Graph, name: str = "gamma1", witnesses: bool = True) -> str:
    out = [f"digraph {name} {{"]
    out += [f"  q{q};" for q in range(1, g.n + 1)]
    for u, v in g.edge_list():
        if witnesses:
            out.append(f'  q{u} -> q{v} [label="{g.format_word(g.edges[(u, v)])}"];')
        else:
            out.append(f"  q{u} -> q{v};")
    out.append("}")
    return "\n".join(out) + "\n"
