"""Command-line interface: ``subsetreach <command> ...``.

Exit status is 0 on success, 1 when an analysis fails or a verification
check does not pass, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .automaton import AutomatonError, CapExceeded, Dfa, StateSet, parse, serialize, to_dot
from .families import FAMILIES, SelfCheckError
from .power import (
    DEFAULT_FRONTIER_CAP,
    don_audit,
    is_completely_reachable,
    power_bfs,
    shortest_reaching_word,
    shortest_synchronizing_word,
    shortest_word_into,
)
from .rank import DEFAULT_CLOSURE_CAP, gamma1, gamma1_dot, gamma1_triples, is_strongly_connected
from .verify import CHECK_GROUPS, VerifyConfig, format_report, report_json, run_all

FAMILY_DEFAULT_N = {"cerny": 4, "p2n": 7, "p3n": 5}


class UsageError(Exception):
    pass


def _cap(args) -> int:
    return args.cap or DEFAULT_FRONTIER_CAP


def _read_dfa(path: str) -> Dfa:
    if path == "-":
        return parse(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _parse_target(dfa: Dfa, text: str) -> StateSet:
    try:
        states = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"bad target list {text!r}") from None
    if not states:
        raise UsageError("empty target set")
    return StateSet.of(dfa.n, states)


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    elif not args.quiet:
        sys.stdout.write(text)


def _word_payload(dfa: Dfa, word) -> dict:
    if word is None:
        return {"word": None, "length": None, "letters": None}
    return {"word": dfa.format_word(word), "length": len(word), "letters": [dfa.letters[l] for l in word]}


def cmd_gen(args) -> int:
    family = FAMILIES[args.family]
    if args.family in FAMILY_DEFAULT_N:
        dfa = family(args.n if args.n is not None else FAMILY_DEFAULT_N[args.family])
    else:
        if args.n is not None:
            raise UsageError(f"family {args.family} takes no --n")
        dfa = family()
    text = serialize(dfa)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_sync(args) -> int:
    dfa = _read_dfa(args.file)
    word = shortest_synchronizing_word(dfa, _cap(args))
    payload = {"synchronizing": word is not None, **_word_payload(dfa, word)}
    if word is None:
        text = "synchronizing: false\n"
    else:
        text = f"synchronizing: true\nword: {dfa.format_word(word)}\nlength: {len(word)}\n"
    _emit(args, text, payload)
    return 0


def cmd_reach(args) -> int:
    dfa = _read_dfa(args.file)
    target = _parse_target(dfa, args.target)
    if args.into:
        word = shortest_word_into(dfa, target, _cap(args))
    else:
        word = shortest_reaching_word(power_bfs(dfa, None, _cap(args)), target)
    mode = "into" if args.into else "reach"
    payload = {"target": target.states(), "mode": mode, "reachable": word is not None, **_word_payload(dfa, word)}
    if word is None:
        text = f"target {target}: unreachable\n"
    else:
        text = f"target {target} ({mode})\nword: {dfa.format_word(word)}\nlength: {len(word)}\n"
    _emit(args, text, payload)
    return 0


def cmd_gamma1(args) -> int:
    dfa = _read_dfa(args.file)
    g = gamma1(dfa, args.cap or DEFAULT_CLOSURE_CAP)
    connected = is_strongly_connected(g) if args.check_scc else None
    payload = {
        "n": g.n,
        "edges": [{"excl": u, "dupl": v, "witness": g.format_word(g.edges[(u, v)])} for u, v in g.edge_list()],
    }
    if connected is not None:
        payload["strongly_connected"] = connected
    if args.dot:
        text = gamma1_dot(g, witnesses=args.witnesses)
    elif args.witnesses:
        text = gamma1_triples(g)
    else:
        text = "".join(f"{u} {v}\n" for u, v in g.edge_list())
    if connected is not None and not args.dot:
        text += f"strongly connected: {str(connected).lower()}\n"
    _emit(args, text, payload)
    if connected is not None and args.dot and not args.json:
        sys.stderr.write(f"strongly connected: {str(connected).lower()}\n")
    return 0


def cmd_cr(args) -> int:
    dfa = _read_dfa(args.file)
    ok, missing = is_completely_reachable(dfa, _cap(args))
    payload = {"completely_reachable": ok, "certificate": None if missing is None else missing.states()}
    text = f"completely reachable: {str(ok).lower()}\n"
    if missing is not None:
        text += f"unreachable subset: {missing}\n"
    _emit(args, text, payload)
    return 0


def cmd_audit(args) -> int:
    dfa = _read_dfa(args.file)
    report = don_audit(dfa, _cap(args), into=args.into)
    mode = "into" if args.into else "reach"
    bad = report.violations(mode)
    if args.json:
        payload = {"n": dfa.n, "mode": mode, "violations": [e.as_dict() for e in bad]}
        entries = report.into if args.into else report.reach
        payload["entries"] = [e.as_dict() for e in entries]
        _emit(args, "", payload)
        return 0
    lines = ["subset\tsize\tdist\tbound\tviolated"]
    for e in bad:
        lines.append(f"{','.join(map(str, e.subset))}\t{e.size}\t{e.dist}\t{e.bound}\t{str(e.violated).lower()}")
    lines.append(f"{len(bad)} violation(s)")
    _emit(args, "\n".join(lines) + "\n", {})
    return 0


def cmd_verify(args) -> int:
    only = None
    if args.only:
        only = frozenset(x.strip() for x in args.only.split(",") if x.strip())
        unknown = only - set(CHECK_GROUPS)
        if unknown:
            raise UsageError(f"unknown checks: {', '.join(sorted(unknown))}; choose from {', '.join(CHECK_GROUPS)}")
    config = VerifyConfig(only=only, seed=args.seed, cap=_cap(args))
    if args.trials is not None:
        config.trials = args.trials
    results = run_all(config)
    if args.json:
        sys.stdout.write(report_json(results, timings=args.timings))
    elif not args.quiet:
        sys.stdout.write(format_report(results, timings=args.timings))
    return 0 if all(r.passed for r in results) else 1


def cmd_export(args) -> int:
    dfa = _read_dfa(args.file)
    if args.dot:
        sys.stdout.write(to_dot(dfa))
    else:
        sys.stdout.write(serialize(dfa))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--cap",
        type=int,
        help=f"search cap: visited subsets (default {DEFAULT_FRONTIER_CAP}) or distinct transformations for gamma1 (default {DEFAULT_CLOSURE_CAP})",
    )
    common.add_argument("--quiet", action="store_true", help="suppress human-readable output")
    common.add_argument("--json", action="store_true", help="structured output")

    parser = argparse.ArgumentParser(prog="subsetreach", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="print a family automaton")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--n", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sync", parents=[common], help="shortest synchronizing word")
    p.add_argument("file")
    p.set_defaults(func=cmd_sync)

    p = sub.add_parser("reach", parents=[common], help="shortest word reaching a subset")
    p.add_argument("file")
    p.add_argument("--target", required=True, help="comma-separated states, e.g. 1,3,5")
    p.add_argument("--into", action="store_true", help="land anywhere inside the target")
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("gamma1", parents=[common], help="Gamma_1 graph edges")
    p.add_argument("file")
    p.add_argument("--dot", action="store_true")
    p.add_argument("--witnesses", action="store_true")
    p.add_argument("--check-scc", action="store_true")
    p.set_defaults(func=cmd_gamma1)

    p = sub.add_parser("cr", parents=[common], help="complete reachability")
    p.add_argument("file")
    p.set_defaults(func=cmd_cr)

    p = sub.add_parser("audit-don", parents=[common], help="reaching lengths against n(n-k)")
    p.add_argument("file")
    p.add_argument("--into", action="store_true")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("verify", parents=[common], help="run the reproduction checks")
    p.add_argument("--only", help=f"comma-separated subset of {','.join(CHECK_GROUPS)}")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int)
    p.add_argument("--timings", action="store_true", help="include runtimes (output no longer reproducible)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", parents=[common], help="print an automaton")
    p.add_argument("file")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (AutomatonError, CapExceeded, SelfCheckError, OSError) as exc:
        sys.stderr.write(f"subsetreach: error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
