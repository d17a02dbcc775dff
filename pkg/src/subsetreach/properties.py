"""Randomized consistency checks backed by exhaustive oracles.

Each ``check_*`` function draws its own instances from a ``random.Random``
and returns a ``PropertyOutcome`` counting trials and failures.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .automaton import Dfa, mask_states
from .power import is_completely_reachable, power_bfs
from .rank import (
    RankDropped,
    Transformation,
    compose_check,
    gamma1,
    high_rank_closure,
    is_strongly_connected,
    signature_of,
)


@dataclass
class PropertyOutcome:
    name: str
    trials: int = 0
    failures: int = 0
    counterexamples: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def fail(self, example) -> None:
        self.failures += 1
        if len(self.counterexamples) < 5:
            self.counterexamples.append(example)


def random_map(rng: random.Random, n: int) -> list[int]:
    return [rng.randint(1, n) for _ in range(n)]


def random_permutation(rng: random.Random, n: int) -> list[int]:
    p = list(range(1, n + 1))
    rng.shuffle(p)
    return p


def random_near_permutation(rng: random.Random, n: int) -> list[int]:
    """A uniformly shaped rank n-1 map."""
    p = random_permutation(rng, n)
    i, j = rng.sample(range(n), 2)
    p[j] = p[i]
    return p


def random_dfa(rng: random.Random, n: int, k: int, style: str = "mixed") -> Dfa:
    """``style`` is ``uniform`` (arbitrary maps) or ``mixed`` (each letter a
    permutation, a rank n-1 map or an arbitrary map)."""
    maps = []
    for _ in range(k):
        if style == "uniform" or n < 2:
            maps.append(random_map(rng, n))
            continue
        kind = rng.random()
        if kind < 0.35:
            maps.append(random_permutation(rng, n))
        elif kind < 0.85:
            maps.append(random_near_permutation(rng, n))
        else:
            maps.append(random_map(rng, n))
    return Dfa.from_maps([chr(ord("a") + i) for i in range(k)], maps)


def random_digraph(rng: random.Random, n: int) -> tuple[int, set[tuple[int, int]]]:
    density = rng.uniform(0.05, 0.5)
    edges = {(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v and rng.random() < density}
    return n, edges


def subset_formulation_connected(n: int, edges) -> bool:
    """Every non-empty proper node set has an edge entering it from outside."""
    for mask in range(1, (1 << n) - 1):
        if not any(not mask >> (u - 1) & 1 and mask >> (v - 1) & 1 for u, v in edges):
            return False
    return True


def check_key_lemma(rng: random.Random, pairs: int, max_n: int = 6, pairs_per_dfa: int = 100) -> PropertyOutcome:
    """Signature composition against the directly composed full map."""
    out = PropertyOutcome("key-lemma composition")
    while out.trials < pairs:
        n = rng.randint(3, max_n)
        dfa = random_dfa(rng, n, rng.randint(2, 3))
        near = high_rank_closure(dfa).near_permutations()
        if not near:
            continue
        for _ in range(min(pairs_per_dfa, pairs - out.trials)):
            t1, t2 = rng.choice(near), rng.choice(near)
            direct = t1.then(t2)
            predicted = compose_check(t1, t2)
            out.trials += 1
            if isinstance(predicted, RankDropped):
                if direct.rank != n - 2 or predicted.rank != n - 2:
                    out.fail((dfa, t1.witness, t2.witness))
                continue
            if direct.rank != n - 1:
                out.fail((dfa, t1.witness, t2.witness))
                continue
            actual = signature_of(direct)
            if (actual.excl, actual.dupl, actual.root) != (predicted.excl, predicted.dupl, predicted.root):
                out.fail((dfa, t1.witness, t2.witness))
    return out


def check_corank_one_distance(rng: random.Random, automata: int, max_n: int = 6) -> PropertyOutcome:
    """Reachable sets of size n-1 are at distance at most n."""
    out = PropertyOutcome("size n-1 within n")
    for _ in range(automata):
        n = rng.randint(3, max_n)
        dfa = random_dfa(rng, n, rng.randint(1, 3), rng.choice(("mixed", "uniform")))
        index = power_bfs(dfa)
        out.trials += 1
        bad = [m for m, d in index.dist.items() if m.bit_count() == n - 1 and d > n]
        if bad:
            out.fail((dfa, [mask_states(m) for m in bad]))
    return out


def check_scc_equivalence(rng: random.Random, graphs: int, max_nodes: int = 12) -> PropertyOutcome:
    out = PropertyOutcome("strong connectivity equivalence")
    for _ in range(graphs):
        n, edges = random_digraph(rng, rng.randint(1, max_nodes))
        out.trials += 1
        if is_strongly_connected((n, edges)) != subset_formulation_connected(n, edges):
            out.fail((n, sorted(edges)))
    return out


def check_gamma1_sufficiency(rng: random.Random, automata: int, max_n: int = 6) -> PropertyOutcome:
    """A strongly connected Gamma_1 graph forces complete reachability."""
    out = PropertyOutcome("strongly connected gamma1 implies completely reachable")
    out.notes["strongly_connected"] = 0
    for _ in range(automata):
        n = rng.randint(3, max_n)
        dfa = random_dfa(rng, n, rng.randint(2, 3))
        out.trials += 1
        if not is_strongly_connected(gamma1(dfa)):
            continue
        out.notes["strongly_connected"] += 1
        if not is_completely_reachable(dfa)[0]:
            out.fail(dfa)
    return out


def brute_force_distances(dfa: Dfa, max_len: int) -> dict[frozenset, int]:
    """First word length at which each subset appears, by plain enumeration."""
    delta = {(q, l): dfa.delta[q - 1][l] for q in range(1, dfa.n + 1) for l in range(dfa.k)}
    found: dict[frozenset, int] = {}
    for length in range(max_len + 1):
        for word in product(range(dfa.k), repeat=length):
            s = set(range(1, dfa.n + 1))
            for l in word:
                s = {delta[q, l] for q in s}
            found.setdefault(frozenset(s), length)
    return found


def check_bfs_exactness(
    rng: random.Random, automata: int, max_n: int = 5, word_budget: int = 200_000
) -> PropertyOutcome:
    """Power BFS distances against word enumeration up to the BFS depth.

    Instances whose enumeration would exceed ``word_budget`` words are
    redrawn; ``notes['skipped']`` counts them.
    """
    out = PropertyOutcome("bfs equals word enumeration")
    out.notes["skipped"] = 0
    while out.trials < automata:
        n = rng.randint(2, max_n)
        k = rng.randint(1, 3)
        dfa = random_dfa(rng, n, k, rng.choice(("mixed", "uniform")))
        index = power_bfs(dfa)
        depth = max(index.dist.values())
        if sum(k**i for i in range(depth + 2)) > word_budget:
            out.notes["skipped"] += 1
            continue
        out.trials += 1
        # one level past the depth: nothing new may show up there
        oracle = brute_force_distances(dfa, depth + 1)
        bfs = {frozenset(mask_states(m)): d for m, d in index.dist.items()}
        if oracle != bfs:
            out.fail(dfa)
    return out


def gamma1_edges_by_enumeration(dfa: Dfa, max_len: int) -> set[tuple[int, int]]:
    n = dfa.n
    edges = set()
    for length in range(1, max_len + 1):
        for word in product(range(dfa.k), repeat=length):
            t = Transformation.of_word(dfa, word)
            if t.rank == n - 1:
                edges.add(signature_of(t).edge)
    return edges

