"""Breadth-first search over the power automaton.

All searches expand letters in alphabet order from a FIFO queue.  The
queue therefore holds each BFS level sorted by the lexicographically least
shortest word of its subsets, so the first-discovery predecessor of every
subset spells out its lexicographically least shortest word.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .automaton import CapExceeded, Dfa, StateSet, Word, mask_states

DEFAULT_FRONTIER_CAP = 1 << 25


def _as_mask(dfa: Dfa, s) -> int:
    if isinstance(s, StateSet):
        if s.n != dfa.n:
            raise ValueError(f"state set over {s.n} states used with a {dfa.n}-state automaton")
        return s.mask
    return StateSet.of(dfa.n, s).mask


@dataclass
class ReachabilityIndex:
    """Shortest distances from ``source`` to every reachable subset.

    ``dist`` and ``pred`` are keyed by subset bit masks; ``pred`` maps a
    subset to ``(parent_mask, letter)``.  Iteration order of ``dist`` is
    discovery order.
    """

    dfa: Dfa
    source: int
    dist: dict[int, int] = field(default_factory=dict)
    pred: dict[int, tuple[int, int]] = field(default_factory=dict)

    def __contains__(self, s) -> bool:
        return _as_mask(self.dfa, s) in self.dist

    def __len__(self) -> int:
        return len(self.dist)

    def distance(self, s) -> int | None:
        return self.dist.get(_as_mask(self.dfa, s))

    def subsets(self) -> Iterable[StateSet]:
        n = self.dfa.n
        return (StateSet(n, m) for m in self.dist)

    def word_to_mask(self, mask: int) -> Word:
        letters = []
        while mask != self.source:
            mask, l = self.pred[mask]
            letters.append(l)
        return tuple(reversed(letters))

    def prefix_images(self, mask: int) -> list[int]:
        """Masks along the stored path from ``source`` to ``mask``, both ends included."""
        chain = [mask]
        while mask != self.source:
            mask = self.pred[mask][0]
            chain.append(mask)
        return chain[::-1]


def power_bfs(
    dfa: Dfa,
    source=None,
    frontier_cap: int = DEFAULT_FRONTIER_CAP,
    stop: Callable[[int], bool] | None = None,
) -> ReachabilityIndex:
    """Exact BFS in the power automaton from ``source`` (default: all states).

    With ``stop``, the search halts as soon as a discovered subset satisfies
    it; the index is then complete only up to that subset's level.
    """
    src = dfa.full_mask if source is None else _as_mask(dfa, source)
    if src == 0:
        raise ValueError("source set must be non-empty")
    index = ReachabilityIndex(dfa, src)
    dist, pred = index.dist, index.pred
    dist[src] = 0
    if stop is not None and stop(src):
        return index
    queue = deque([src])
    step = dfa.step_mask
    letters = range(dfa.k)
    while queue:
        s = queue.popleft()
        d = dist[s] + 1
        for l in letters:
            t = step(s, l)
            if t in dist:
                continue
            dist[t] = d
            pred[t] = (s, l)
            if len(dist) > frontier_cap:
                raise CapExceeded("visited subsets", frontier_cap)
            if stop is not None and stop(t):
                return index
            queue.append(t)
    return index


def shortest_reaching_word(index: ReachabilityIndex, target) -> Word | None:
    """Lexicographically least shortest ``w`` with ``source·w == target``."""
    mask = _as_mask(index.dfa, target)
    if mask not in index.dist:
        return None
    return index.word_to_mask(mask)


def shortest_word_into(dfa: Dfa, target, frontier_cap: int = DEFAULT_FRONTIER_CAP) -> Word | None:
    """Shortest ``w`` with ``Q·w`` contained in ``target``, ties broken lexicographically."""
    mask = _as_mask(dfa, target)
    if mask == 0:
        raise ValueError("target set must be non-empty")
    outside = dfa.full_mask & ~mask
    hit = []

    def inside(s):
        if s & outside == 0:
            hit.append(s)
            return True
        return False

    index = power_bfs(dfa, None, frontier_cap, stop=inside)
    return index.word_to_mask(hit[0]) if hit else None


def shortest_synchronizing_word(dfa: Dfa, frontier_cap: int = DEFAULT_FRONTIER_CAP) -> Word | None:
    hit = []

    def singleton(s):
        if s & (s - 1) == 0:
            hit.append(s)
            return True
        return False

    index = power_bfs(dfa, None, frontier_cap, stop=singleton)
    return index.word_to_mask(hit[0]) if hit else None


def is_completely_reachable(
    dfa: Dfa, frontier_cap: int = DEFAULT_FRONTIER_CAP, index: ReachabilityIndex | None = None
) -> tuple[bool, StateSet | None]:
    """Whether every non-empty proper subset is reachable from ``Q``.

    Returns ``(verdict, certificate)`` where the certificate is the
    unreachable subset with the smallest bit mask, or ``None``.
    """
    if (1 << dfa.n) > frontier_cap:
        raise CapExceeded("subset lattice", frontier_cap)
    if index is None:
        index = power_bfs(dfa, None, frontier_cap)
    dist = index.dist
    for m in range(1, dfa.full_mask):
        if m not in dist:
            return False, StateSet(dfa.n, m)
    return True, None


def _pair_mask(dfa: Dfa, pair) -> int:
    p, q = pair
    if p == q:
        raise ValueError("a pair needs two distinct states")
    return StateSet.of(dfa.n, (p, q)).mask


@dataclass
class PairIndex:
    """BFS distances in the square graph restricted to some letters."""

    dfa: Dfa
    letters: tuple[int, ...]
    source: int
    dist: dict[int, int]

    def distance(self, pair) -> int | None:
        return self.dist.get(_pair_mask(self.dfa, pair))


def pair_bfs(dfa: Dfa, letters: Iterable[int], source) -> PairIndex:
    ls = tuple(sorted(set(letters)))
    dfa.check_word(ls)
    src = _pair_mask(dfa, source)
    dist = {src: 0}
    queue = deque([src])
    while queue:
        s = queue.popleft()
        for l in ls:
            t = dfa.step_mask(s, l)
            # a pair merged into a single state leaves the square graph
            if t & (t - 1) == 0 or t in dist:
                continue
            dist[t] = dist[s] + 1
            queue.append(t)
    return PairIndex(dfa, ls, src, dist)


def pair_distance(dfa: Dfa, letters: Iterable[int], source, target) -> int | None:
    target_mask = _pair_mask(dfa, target)
    return pair_bfs(dfa, letters, source).dist.get(target_mask)


def check_shortest_word_lemma(index: ReachabilityIndex, target) -> bool:
    """Prefix images of the stored shortest word are pairwise distinct and no
    smaller than the target.  This always holds; ``False`` means a bug."""
    mask = _as_mask(index.dfa, target)
    chain = index.prefix_images(mask)
    size = mask.bit_count()
    return len(set(chain)) == len(chain) and all(m.bit_count() >= size for m in chain)


@dataclass(frozen=True)
class AuditEntry:
    subset: tuple[int, ...]
    size: int
    dist: int
    bound: int
    mode: str  # "reach" or "into"

    @property
    def excess(self) -> int:
        return self.dist - self.bound

    @property
    def violated(self) -> bool:
        return self.dist > self.bound

    def as_dict(self) -> dict:
        return {
            "subset": list(self.subset),
            "size": self.size,
            "dist": self.dist,
            "bound": self.bound,
            "violated": self.violated,
        }


@dataclass
class DonReport:
    n: int
    reach: list[AuditEntry]
    into: list[AuditEntry] | None = None

    def violations(self, mode: str = "reach") -> list[AuditEntry]:
        entries = self.reach if mode == "reach" else (self.into or [])
        bad = [e for e in entries if e.violated]
        bad.sort(key=lambda e: (-e.excess, e.size, e.subset))
        return bad

    def as_dict(self) -> dict:
        out = {
            "n": self.n,
            "reach": {
                "entries": [e.as_dict() for e in self.reach],
                "violations": [e.as_dict() for e in self.violations("reach")],
            },
        }
        if self.into is not None:
            out["into"] = {
                "entries": [e.as_dict() for e in self.into],
                "violations": [e.as_dict() for e in self.violations("into")],
            }
        return out


def don_audit(
    dfa: Dfa, frontier_cap: int = DEFAULT_FRONTIER_CAP, into: bool = True
) -> DonReport:
    """Compare shortest reaching lengths against the ``n(n - |S|)`` bound.

    The ``reach`` part covers every reachable non-empty proper subset ``S``
    with ``dist(Q -> S)``.  The ``into`` part covers every non-empty proper
    ``S`` that contains some reachable set, with the length of the shortest
    word landing inside ``S``; it walks the whole subset lattice.
    """
    n = dfa.n
    full = dfa.full_mask
    index = power_bfs(dfa, None, frontier_cap)
    reach = []
    for m in sorted(index.dist, key=lambda m: (m.bit_count(), mask_states(m))):
        if m == full:
            continue
        size = m.bit_count()
        reach.append(AuditEntry(tuple(mask_states(m)), size, index.dist[m], n * (n - size), "reach"))
    report = DonReport(n, reach)
    if into:
        if (1 << n) > frontier_cap:
            raise CapExceeded("subset lattice", frontier_cap)
        best = _into_distances(n, index.dist)
        entries = []
        for m in range(1, full):
            d = best[m]
            if d is None:
                continue
            size = m.bit_count()
            entries.append(AuditEntry(tuple(mask_states(m)), size, d, n * (n - size), "into"))
        entries.sort(key=lambda e: (e.size, e.subset))
        report.into = entries
    return report


def _into_distances(n: int, dist: dict[int, int]) -> list[int | None]:
    # best[S] = min dist over reachable subsets of S, by removing one state at a time
    best: list[int | None] = [None] * (1 << n)
    for m, d in dist.items():
        best[m] = d
    for m in range(1, 1 << n):
        cur = best[m]
        rest = m
        while rest:
            low = rest & -rest
            rest ^= low
            sub = best[m ^ low]
            if sub is not None and (cur is None or sub < cur):
                cur = sub
        best[m] = cur
    return best
