"""Reproduction checks for the counterexample families and length claims.

Every check compares exact integers or booleans.  A check whose search hits
a resource cap is reported as ``inconclusive`` rather than ``fail``.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from math import comb
from typing import Callable

from .automaton import CapExceeded, StateSet, rank
from .families import (
    BV_LETTER_SIGNATURES,
    bv_counterexample,
    cerny,
    fig2_example,
    fig5_p4,
    fig5_states,
    p2n,
    p2n_pair_length,
    p2n_target,
    p3n,
    p3n_sets,
)
from .power import (
    DEFAULT_FRONTIER_CAP,
    is_completely_reachable,
    pair_distance,
    power_bfs,
    shortest_reaching_word,
    shortest_synchronizing_word,
    shortest_word_into,
)
from .properties import check_corank_one_distance, check_key_lemma, check_scc_equivalence
from .rank import Transformation, gamma1, is_strongly_connected, signature_of

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class CheckResult:
    name: str
    citation: str
    expected: dict
    measured: dict = field(default_factory=dict)
    status: str = FAIL
    runtime_ms: float = 0.0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "expected": self.expected,
            "measured": self.measured,
            "citation": self.citation,
            "runtime_ms": round(self.runtime_ms, 1),
            "detail": self.detail,
        }


def _run(name: str, citation: str, expected: dict, measure: Callable[[], dict]) -> CheckResult:
    result = CheckResult(name, citation, expected)
    start = time.perf_counter()
    try:
        result.measured = measure()
        result.status = PASS if result.measured == expected else FAIL
    except CapExceeded as exc:
        result.status = INCONCLUSIVE
        result.detail = str(exc)
    result.runtime_ms = (time.perf_counter() - start) * 1000
    return result


def check_prop1(n: int, cap: int = DEFAULT_FRONTIER_CAP) -> CheckResult:
    k = (n - 5) // 2
    expected = {
        "pair_distance": p2n_pair_length(n),
        "length": p2n_pair_length(n) + 1,
        "first_letter": "c",
    }

    def measure():
        # the generator runs the same pair-distance check and raises on mismatch
        dfa = p2n(n, check=False)
        out = {"pair_distance": pair_distance(dfa, (0, 1), (2, 4), (k + 2, k + 4))}
        word = shortest_reaching_word(power_bfs(dfa, None, cap), p2n_target(n))
        out["length"] = None if word is None else len(word)
        out["first_letter"] = dfa.letters[word[0]] if word else None
        return out

    return _run(f"prop1[n={n}]", "shortest word reaching Q minus {q_k+2, q_k+4} has length n^2/4+5n/4-6", expected, measure)


def check_prop2(n: int, cap: int = DEFAULT_FRONTIER_CAP) -> CheckResult:
    count = comb(n - 1, n // 2)
    expected = {
        "length": count,
        "suffix": ["a"] + [f"l{i}" for i in range(1, count)],
    }

    def measure():
        dfa = p3n(n)
        word = shortest_reaching_word(power_bfs(dfa, None, cap), p3n_sets(n)[-1])
        if word is None:
            return {"length": None, "suffix": None}
        last_a = max(i for i, l in enumerate(word) if l == 0)
        return {"length": len(word), "suffix": [dfa.letters[l] for l in word[last_a:]]}

    return _run(f"prop2[n={n}]", "shortest word reaching S_L has length C(n-1, floor(n/2))", expected, measure)


# the drawn power automaton has all 15 non-empty subsets; {1,2,3} has no incoming edge
FIG6_REACHABLE = 14


def check_fig5(cap: int = DEFAULT_FRONTIER_CAP) -> CheckResult:
    target = fig5_states((1, 2, 3))
    expected = {
        "into_length": 6,
        "min_subset_distance": 6,
        "reachable_subsets": FIG6_REACHABLE,
        "unreachable_subsets": [[1, 2, 3]],
    }

    def measure():
        dfa = fig5_p4()
        word = shortest_word_into(dfa, target, cap)
        index = power_bfs(dfa, None, cap)
        target_mask = StateSet.of(4, target).mask
        subsets = [m for m in range(1, 16) if m & ~target_mask == 0]
        dists = [index.dist[m] for m in subsets if m in index.dist]
        missing = [StateSet(4, m).states() for m in range(1, 16) if m not in index.dist]
        return {
            "into_length": None if word is None else len(word),
            "min_subset_distance": min(dists) if dists else None,
            "reachable_subsets": len(index),
            "unreachable_subsets": missing,
        }

    return _run("fig5", "{1,2,3} and its subsets are not reached by words shorter than 6", expected, measure)


def check_prop4(cap: int = DEFAULT_FRONTIER_CAP) -> CheckResult:
    expected = {
        "completely_reachable": True,
        "gamma1_strongly_connected": False,
        "in_degree_1": 0,
        "letter_signatures": [[name, e, d, list(r)] for name, e, d, r in BV_LETTER_SIGNATURES],
    }

    def measure():
        dfa = bv_counterexample(check=False)
        g = gamma1(dfa, cap)
        sigs = []
        for l, name in enumerate(dfa.letters):
            s = signature_of(Transformation.of_word(dfa, (l,)))
            sigs.append([name, s.excl, s.dupl, sorted(s.root)])
        return {
            "completely_reachable": is_completely_reachable(dfa, cap)[0],
            "gamma1_strongly_connected": is_strongly_connected(g),
            "in_degree_1": g.in_degree(1),
            "letter_signatures": sigs,
        }

    return _run("prop4", "completely reachable while Gamma_1 is not strongly connected", expected, measure)


FIG2_EDGES = [(1, 2), (1, 3), (2, 1), (2, 3), (3, 2)]


def check_fig2(cap: int = DEFAULT_FRONTIER_CAP) -> CheckResult:
    expected = {"strongly_connected": True, "contains_figure_edges": True, "edge_count": 6}

    def measure():
        g = gamma1(fig2_example(), cap)
        return {
            "strongly_connected": is_strongly_connected(g),
            "contains_figure_edges": set(FIG2_EDGES) <= set(g.edges),
            "edge_count": len(g.edges),
        }

    return _run("fig2", "Gamma_1 of the three-state example is strongly connected", expected, measure)


def check_cerny(n: int, cap: int = DEFAULT_FRONTIER_CAP) -> CheckResult:
    expected = {"sync_length": (n - 1) ** 2, "rank": 1}

    def measure():
        dfa = cerny(n)
        word = shortest_synchronizing_word(dfa, cap)
        if word is None:
            return {"sync_length": None, "rank": None}
        return {"sync_length": len(word), "rank": rank(dfa, word)}

    return _run(f"cerny[n={n}]", "the Cerny family attains (n-1)^2", expected, measure)


def check_random_properties(seed: int = 42, trials: int = 200) -> CheckResult:
    expected = {"key_lemma_failures": 0, "corank_one_failures": 0, "scc_failures": 0}

    def measure():
        rng = random.Random(seed)
        return {
            "key_lemma_failures": check_key_lemma(rng, trials * 10).failures if trials else 0,
            "corank_one_failures": check_corank_one_distance(rng, trials).failures,
            "scc_failures": check_scc_equivalence(rng, trials).failures,
        }

    return _run(
        f"random[seed={seed},trials={trials}]",
        "key composition lemma, size n-1 within n, subset form of strong connectivity",
        expected,
        measure,
    )


@dataclass
class VerifyConfig:
    only: frozenset[str] | None = None
    seed: int = 42
    trials: int = 200
    prop1_sizes: tuple[int, ...] = (7, 11)
    prop2_sizes: tuple[int, ...] = (5, 6, 7)
    cerny_sizes: tuple[int, ...] = (2, 4, 6, 8)
    cap: int = DEFAULT_FRONTIER_CAP


CHECK_GROUPS = ("cerny", "fig2", "fig5", "prop1", "prop2", "prop4", "random")


def run_all(config: VerifyConfig | None = None) -> list[CheckResult]:
    config = config or VerifyConfig()
    selected = CHECK_GROUPS if config.only is None else [g for g in CHECK_GROUPS if g in config.only]
    unknown = set(config.only or ()) - set(CHECK_GROUPS)
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")
    cap = config.cap
    results = []
    for group in selected:
        if group == "cerny":
            results += [check_cerny(n, cap) for n in config.cerny_sizes]
        elif group == "fig2":
            results.append(check_fig2(cap))
        elif group == "fig5":
            results.append(check_fig5(cap))
        elif group == "prop1":
            results += [check_prop1(n, cap) for n in config.prop1_sizes]
        elif group == "prop2":
            results += [check_prop2(n, cap) for n in config.prop2_sizes]
        elif group == "prop4":
            results.append(check_prop4(cap))
        elif group == "random":
            results.append(check_random_properties(config.seed, config.trials))
    return results


def _short(value) -> str:
    text = json.dumps(value, separators=(",", ":"))
    return text if len(text) <= 60 else text[:57] + "..."


def format_report(results: list[CheckResult], timings: bool = False) -> str:
    lines = []
    for r in results:
        line = f"{r.status.upper():<12} {r.name}"
        for key, want in r.expected.items():
            got = r.measured.get(key, "-")
            line += f"\n    {key}: expected {_short(want)}, measured {_short(got)}"
        if r.detail:
            line += f"\n    {r.detail}"
        if timings:
            line += f"\n    {r.runtime_ms:.1f} ms"
        lines.append(line)
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"


def report_json(results: list[CheckResult], timings: bool = False) -> str:
    items = []
    for r in results:
        d = r.as_dict()
        if not timings:
            del d["runtime_ms"]
        items.append(d)
    return json.dumps({"checks": items, "all_passed": all(r.passed for r in results)}, indent=2) + "\n"
