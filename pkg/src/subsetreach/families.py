"""Generators for the example automata and counterexample families."""

from __future__ import annotations

from itertools import combinations
from math import comb

from .automaton import AutomatonError, Dfa
from .power import pair_distance
from .rank import Transformation, signature_of


class SelfCheckError(AssertionError):
    """A generated automaton failed the property it is built to have."""


def cerny(n: int) -> Dfa:
    """``a`` sends q_n to q_1 and fixes the rest; ``b`` is the cycle q_i -> q_{i+1}."""
    if n < 2:
        raise AutomatonError("the Cerny automaton needs n >= 2")
    a = list(range(1, n)) + [1]
    b = list(range(2, n + 1)) + [1]
    return Dfa.from_maps(("a", "b"), (a, b))


def fig2_example() -> Dfa:
    """Three-state completely reachable automaton with a strongly connected Gamma_1."""
    return Dfa.from_maps(
        ("a", "b", "c"),
        (
            (1, 2, 2),
            (2, 3, 2),
            (3, 3, 1),
        ),
    )


def _chain(perms, states):
    # consecutive states are swapped by b, a, b, a, ... in turn
    for i in range(len(states) - 1):
        p = perms[i % 2]
        x, y = states[i], states[i + 1]
        p[x - 1], p[y - 1] = y, x


def p2n_pair_length(n: int) -> int:
    return (n * n + 5 * n) // 4 - 7


def p2n(n: int, check: bool = True) -> Dfa:
    """Two permutation letters with a long square-graph path plus one rank
    n-2 letter ``c``, for ``n = 2k + 5`` with ``n % 4 == 3``.

    ``a`` is the 4-cycle (1 2 3 4) together with the ``a``-swaps of two
    alternating chains; ``b`` swaps the other links.  The chains are
    1, 6, 8, ..., 2k+4 and 3, 5, 7, ..., 2k+5, both starting with ``b``.
    ``c`` sends 2 -> 3 and 4 -> 1.
    """
    if n < 7 or n % 4 != 3:
        raise AutomatonError(f"p2n needs n >= 7 with n % 4 == 3, got {n}")
    k = (n - 5) // 2
    b = list(range(1, n + 1))
    a = list(range(1, n + 1))
    a[0:4] = [2, 3, 4, 1]
    _chain((b, a), [1] + list(range(6, 2 * k + 5, 2)))
    _chain((b, a), list(range(3, 2 * k + 6, 2)))
    c = list(range(1, n + 1))
    c[1], c[3] = 3, 1
    dfa = Dfa.from_maps(("a", "b", "c"), (a, b, c))
    if check:
        d = pair_distance(dfa, (0, 1), (2, 4), (k + 2, k + 4))
        if d != p2n_pair_length(n):
            raise SelfCheckError(
                f"p2n({n}): pair distance {{2,4}} -> {{{k + 2},{k + 4}}} is {d}, expected {p2n_pair_length(n)}"
            )
    return dfa


def p2n_target(n: int) -> list[int]:
    """States of the hard-to-reach set: everything except q_{k+2}, q_{k+4}."""
    k = (n - 5) // 2
    return [q for q in range(1, n + 1) if q not in (k + 2, k + 4)]


def p3n_sets(n: int) -> list[tuple[int, ...]]:
    """The floor(n/2)-subsets of {2..n} in lexicographic order."""
    return list(combinations(range(2, n + 1), n // 2))


def p3n(n: int, letter_cap: int = 1000) -> Dfa:
    """``a`` plus letters ``l1..l{L-1}``, ``l_i`` carrying the i-th
    floor(n/2)-subset of {2..n} onto the next one in order and everything
    else onto q1."""
    if n < 4:
        raise AutomatonError(f"p3n needs n >= 4, got {n}")
    h = n // 2
    count = comb(n - 1, h)
    if count > letter_cap:
        raise AutomatonError(f"p3n({n}) needs {count} letters, above the cap of {letter_cap}")
    a = [2] + [q if q <= h + 1 else 2 for q in range(2, n + 1)]
    sets = p3n_sets(n)
    letters = ["a"]
    maps = [a]
    for i in range(count - 1):
        m = [1] * n
        for src, dst in zip(sets[i], sets[i + 1]):
            m[src - 1] = dst
        letters.append(f"l{i + 1}")
        maps.append(m)
    return Dfa.from_maps(letters, maps)


# drawn label -> state index; label 0 becomes state 4 so labels 1, 2, 3 keep their numbers
FIG5_LABELS = {0: 4, 1: 1, 2: 2, 3: 3}


def fig5_p4() -> Dfa:
    """Four-state automaton whose set of labels {1, 2, 3} is slow to land in.

    Labels follow ``FIG5_LABELS``.  On labels: ``a`` = 0->1, 1->0, 2->2,
    3->0 and ``b`` = 0->0, 1->2, 2->3, 3->1.
    """
    a = {0: 1, 1: 0, 2: 2, 3: 0}
    b = {0: 0, 1: 2, 2: 3, 3: 1}
    by_state = {v: k for k, v in FIG5_LABELS.items()}
    maps = [[FIG5_LABELS[m[by_state[q]]] for q in range(1, 5)] for m in (a, b)]
    return Dfa.from_maps(("a", "b"), maps)


def fig5_states(labels) -> list[int]:
    return [FIG5_LABELS[x] for x in labels]


# (letter, excl, dupl, roots) for the six letters
BV_LETTER_SIGNATURES = (
    ("a", 1, 2, (1, 6)),
    ("b", 2, 3, (5, 6)),
    ("c", 3, 4, (5, 6)),
    ("d", 4, 5, (5, 6)),
    ("e", 5, 6, (5, 6)),
    ("f", 6, 2, (5, 6)),
)


def bv_counterexample(check: bool = True) -> Dfa:
    """Six states, six rank-5 letters; completely reachable but its Gamma_1
    graph has no edge into state 1."""
    dfa = Dfa.from_maps(
        ("a", "b", "c", "d", "e", "f"),
        (
            (2, 3, 4, 5, 6, 2),
            (4, 6, 5, 1, 3, 3),
            (1, 2, 5, 6, 4, 4),
            (1, 2, 3, 6, 5, 5),
            (1, 2, 3, 4, 6, 6),
            (1, 5, 3, 4, 2, 2),
        ),
    )
    if check:
        for l, (name, excl, dupl, root) in enumerate(BV_LETTER_SIGNATURES):
            sig = signature_of(Transformation.of_word(dfa, (l,)))
            if (sig.excl, sig.dupl, sig.root) != (excl, dupl, frozenset(root)):
                raise SelfCheckError(f"letter {name}: got {sig}, expected {(excl, dupl, root)}")
    return dfa


FAMILIES = {
    "cerny": cerny,
    "fig2": fig2_example,
    "p2n": p2n,
    "p3n": p3n,
    "fig5": fig5_p4,
    "bv": bv_counterexample,
}
