import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subsetreach.automaton import Dfa, StateSet, apply
from subsetreach.power import is_completely_reachable, power_bfs, shortest_reaching_word
from subsetreach.properties import (
    check_gamma1_sufficiency,
    check_key_lemma,
    gamma1_edges_by_enumeration,
    random_dfa,
    subset_formulation_connected,
)
from subsetreach.rank import (
    CapExceeded,
    Gamma1Graph,
    PreconditionError,
    RankDropped,
    RankError,
    Transformation,
    compose_check,
    extend_set,
    gamma1,
    gamma1_triples,
    high_rank_closure,
    intersect_from_factorization,
    intersecting_edge,
    is_strongly_connected,
    preimage,
    signature_of,
    theorem_premise_holds,
)

FIG2_EDGES = {(1, 2), (1, 3), (2, 3), (2, 1), (3, 2)}


def letter(dfa, name):
    return Transformation.of_word(dfa, dfa.parse_word(name))


def sig_tuple(s):
    return (s.excl, s.dupl, set(s.root))


def fig8_pairs():
    """(excl, dupl) pairs spelled out by the rows of the exhaustive rank-5 table."""
    pairs = {(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 2)}
    pairs |= {(1, d) for d in (2, 3, 4, 5, 6)}  # a*
    pairs |= {(e, d) for e in (5, 6) for d in (2, 5, 6) if e != d}  # {e,f}*
    pairs |= {(1, d) for d in (2, 3, 4, 5, 6)}  # {e,f}* f a*
    pairs |= {(2, 6), (2, 3)}  # {e,f}* b
    pairs |= {(3, 2), (3, 4)}  # {e,f}* c
    pairs |= {(4, 2), (4, 5)}  # {e,f}* d
    return pairs


def test_signature_examples(bv, fig2):
    assert sig_tuple(signature_of(letter(bv, "a"))) == (1, 2, {1, 6})
    assert sig_tuple(signature_of(letter(bv, "d"))) == (4, 5, {5, 6})
    assert sig_tuple(signature_of(letter(fig2, "c"))) == (2, 3, {1, 2})
    assert sig_tuple(signature_of(letter(fig2, "b"))) == (1, 2, {1, 3})


def test_signature_wrong_rank(c4, fig2):
    with pytest.raises(RankError):
        signature_of(letter(c4, "b"))
    with pytest.raises(RankError):
        signature_of(letter(fig2, "cb"))


def test_signature_invariants(bv):
    for t in high_rank_closure(bv).near_permutations():
        s = signature_of(t)
        image = set(t.images)
        assert s.excl not in image and s.dupl in image and s.excl != s.dupl
        assert {q for q in range(1, 7) if t.images[q - 1] == s.dupl} == s.root
        assert all(t.images.count(p) == 1 for p in image if p != s.dupl)


def test_compose_examples(fig2):
    b, c = letter(fig2, "b"), letter(fig2, "c")
    assert compose_check(b, b).edge == (1, 3)
    assert compose_check(c, c).edge == (2, 1)
    dropped = compose_check(c, b)
    assert dropped == RankDropped(1)
    assert c.then(b).rank == 1


def test_compose_matches_direct_map(fig2, bv):
    for dfa in (fig2, bv):
        near = high_rank_closure(dfa).near_permutations()[:30]
        for t1 in near:
            for t2 in near:
                predicted = compose_check(t1, t2)
                direct = t1.then(t2)
                assert direct == Transformation.of_word(dfa, t1.witness + t2.witness)
                if isinstance(predicted, RankDropped):
                    assert direct.rank == dfa.n - 2
                else:
                    assert sig_tuple(predicted) == sig_tuple(signature_of(direct))


def test_key_lemma_random():
    out = check_key_lemma(random.Random(3), 2000)
    assert out.trials == 2000 and out.ok


def test_closure_identity_letter():
    dfa = Dfa.from_maps(("a",), ([1, 2, 3],))
    closure = high_rank_closure(dfa)
    assert [t.images for t in closure.transformations] == [(1, 2, 3)]
    assert gamma1(dfa).edges == {}


def test_closure_bv_matches_table(bv):
    realized = {signature_of(t).edge for t in high_rank_closure(bv).near_permutations()}
    assert realized == fig8_pairs()


def test_closure_fig2_against_enumeration(fig2):
    realized = {signature_of(t).edge for t in high_rank_closure(fig2).near_permutations()}
    assert FIG2_EDGES <= realized
    assert signature_of(Transformation.of_word(fig2, fig2.parse_word("abca"))).edge == (3, 1)
    assert realized == gamma1_edges_by_enumeration(fig2, 4)


def test_closure_witnesses_are_shortest(fig2):
    closure = high_rank_closure(fig2)
    first_seen = {}
    for length in range(0, 6):
        for w in product(range(3), repeat=length):
            first_seen.setdefault(Transformation.of_word(fig2, w).images, w)
    for t in closure.transformations:
        assert t.witness == first_seen[t.images]
        assert Transformation.of_word(fig2, t.witness).images == t.images


def test_closure_cap(bv):
    with pytest.raises(CapExceeded):
        high_rank_closure(bv, cap=5)


def test_gamma1_fig2(fig2):
    g = gamma1(fig2)
    assert FIG2_EDGES <= set(g.edges)
    assert set(g.edges) == FIG2_EDGES | {(3, 1)}
    assert g.edges[(3, 2)] == fig2.parse_word("a")
    assert g.edges[(1, 2)] == fig2.parse_word("b")
    assert g.edges[(2, 3)] == fig2.parse_word("c")
    assert gamma1_triples(g).splitlines()[0] == "1 2 b"


def test_gamma1_bv(bv):
    g = gamma1(bv)
    assert g.in_degree(1) == 0
    assert {(2, 3), (3, 4), (4, 5), (5, 6), (6, 2), (1, 2)} <= set(g.edges)
    for (u, v), w in g.edges.items():
        assert signature_of(Transformation.of_word(bv, w)).edge == (u, v)


def test_strong_connectivity_examples(fig2, bv):
    assert is_strongly_connected(gamma1(fig2))
    assert not is_strongly_connected(gamma1(bv))
    assert is_strongly_connected(Gamma1Graph(1, {}))
    assert not is_strongly_connected(Gamma1Graph(2, {(1, 2): (0,)}))


@st.composite
def digraphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    return n, draw(st.sets(st.sampled_from(pairs))) if pairs else set()


@settings(max_examples=300)
@given(digraphs())
def test_scc_matches_subset_formulation(graph):
    n, edges = graph
    assert is_strongly_connected((n, edges)) == subset_formulation_connected(n, edges)


def test_intersecting_edge_examples(bv):
    g = gamma1(bv)
    assert intersecting_edge(g, [1]) is None
    e = intersecting_edge(g, [2])
    assert (e.source, e.target) in {(1, 2), (6, 2)}
    with pytest.raises(PreconditionError):
        intersecting_edge(g, range(1, 7))
    with pytest.raises(PreconditionError):
        intersecting_edge(g, [])


def test_every_other_subset_intersected(bv):
    g = gamma1(bv)
    for m in range(1, 63):
        s = StateSet(6, m)
        assert (intersecting_edge(g, s) is None) == (s.states() == [1])


def test_extend_set_examples(bv, fig2):
    bigger, w = extend_set(bv, gamma1(bv), [2])
    assert len(bigger) == 2 and bigger.states() in ([1, 6], [5, 6])
    assert apply(bv, bigger, w).states() == [2]
    bigger, w = extend_set(fig2, gamma1(fig2), [2])
    assert w == fig2.parse_word("b") and bigger.states() == [1, 3]
    assert preimage(fig2, StateSet.of(3, [2]), fig2.parse_word("a")).states() == [2, 3]
    assert extend_set(bv, gamma1(bv), [1]) is None


def test_extension_reaches_every_set(fig2):
    # growing a set back to Q and reading the witnesses backwards reaches it
    g = gamma1(fig2)
    for m in range(1, 7):
        s = StateSet(3, m)
        parts = []
        while len(s) < 3:
            s, w = extend_set(fig2, g, s)
            parts.append(w)
        word = sum(reversed(parts), ())
        assert apply(fig2, StateSet.full(3), word) == StateSet(3, m)


def test_extension_soundness_random():
    rng = random.Random(11)
    for _ in range(60):
        dfa = random_dfa(rng, rng.randint(3, 5), 2)
        g = gamma1(dfa)
        for m in range(1, dfa.full_mask):
            s = StateSet(dfa.n, m)
            out = extend_set(dfa, g, s)
            if out is not None:
                bigger, w = out
                assert len(bigger) == len(s) + 1 and apply(dfa, bigger, w) == s


def test_factorization_examples(fig2, bv):
    e = intersect_from_factorization(fig2, gamma1(fig2), (), fig2.parse_word("c"))
    assert (e.source, e.target) == (2, 3)
    e = intersect_from_factorization(bv, gamma1(bv), (), bv.parse_word("b"))
    assert (e.source, e.target) == (2, 3)
    assert apply(bv, StateSet.full(6), bv.parse_word("b")).states() == [1, 3, 4, 5, 6]


def test_factorization_rejects_bad_input(fig2, bv):
    g = gamma1(fig2)
    e = intersect_from_factorization(fig2, g, fig2.parse_word("b"), fig2.parse_word("a"))
    assert (e.source, e.target) == (3, 2)
    with pytest.raises(PreconditionError):
        intersect_from_factorization(fig2, g, fig2.parse_word("a"), fig2.parse_word("b"))
    with pytest.raises(PreconditionError):
        intersect_from_factorization(fig2, g, (), fig2.parse_word("cb"))
    # {4} -> {1} through b keeps the size, so no edge can be read off
    to_4 = shortest_reaching_word(power_bfs(bv), [4])
    with pytest.raises(PreconditionError):
        intersect_from_factorization(bv, gamma1(bv), to_4, bv.parse_word("b"))


def test_theorem_premise(bv, fig2):
    index = power_bfs(bv)
    closure = high_rank_closure(bv)
    assert not theorem_premise_holds(bv, [1], index, closure)
    assert theorem_premise_holds(bv, [2], index, closure)
    index2, closure2 = power_bfs(fig2), high_rank_closure(fig2)
    for m in range(1, 7):
        assert theorem_premise_holds(fig2, StateSet(3, m), index2, closure2)
    with pytest.raises(PreconditionError):
        theorem_premise_holds(fig2, [1, 2, 3], index2, closure2)


def test_theorem_random():
    rng = random.Random(5)
    premise_everywhere = 0
    for _ in range(150):
        dfa = random_dfa(rng, rng.randint(3, 5), rng.randint(2, 3))
        index = power_bfs(dfa)
        if not is_completely_reachable(dfa)[0]:
            continue
        closure = high_rank_closure(dfa)
        if all(theorem_premise_holds(dfa, StateSet(dfa.n, m), index, closure) for m in range(1, dfa.full_mask)):
            premise_everywhere += 1
            assert is_strongly_connected(gamma1(dfa, closure=closure))
    assert premise_everywhere > 10


def test_sufficiency_random():
    out = check_gamma1_sufficiency(random.Random(9), 80)
    assert out.ok and out.notes["strongly_connected"] > 0


def test_gamma1_exact_against_enumeration():
    rng = random.Random(13)
    checked = 0
    while checked < 30:
        n = rng.randint(2, 5)
        k = rng.randint(1, 2)
        dfa = random_dfa(rng, n, k)
        closure = high_rank_closure(dfa)
        longest = max(len(t.witness) for t in closure.transformations)
        if k ** (longest + 2) > 50_000:
            continue
        checked += 1
        g = gamma1(dfa, closure=closure)
        assert set(g.edges) == gamma1_edges_by_enumeration(dfa, longest + 1)
        assert all(u != v for u, v in g.edges)
