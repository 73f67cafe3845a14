"""Command-line interface: ``ctrslab check|transform|rewrite|oracle|corpus``.

Exit codes: 0 all verified / property holds, 1 refuted / property fails,
2 a cap was hit before a verdict, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from ctrslab.engine import ConditionalEngine, EngineCaps, EngineError, trs_reachable
from ctrslab.generators import random_seeds
from ctrslab.oracle import (
    REFUTED,
    UNVERIFIED,
    CheckReport,
    CorpusConfig,
    ProbeResult,
    VERIFIED,
    check_completeness,
    check_iff_theorem,
    check_soundness,
    check_t_equivalence,
    run_corpus,
    sr_pair,
    sr_t_pair,
    unraveling_pair,
)
from ctrslab.report import corpus_dict, dump, report_dict
from ctrslab.syntax import ParseError, parse_system, parse_term, render_system
from ctrslab.systems import PROPERTIES, MalformedSystem, classify_system
from ctrslab.transforms import TransformError, linearize, sr_transform, unravel

EXIT_OK, EXIT_FALSE, EXIT_CAPS, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc.strerror)) from None
    try:
        return parse_system(text)
    except ParseError as exc:
        raise InputError("%s: %s" % (path, exc)) from None


def _caps(args) -> EngineCaps:
    caps = EngineCaps.default()
    try:
        if getattr(args, "caps", None):
            caps = EngineCaps.parse(args.caps, caps)
        updates = []
        for name in ("max_steps", "max_level", "max_nodes"):
            value = getattr(args, name, None)
            if value is not None:
                updates.append("%s=%d" % (name, value))
        if updates:
            caps = EngineCaps.parse(",".join(updates), caps)
    except ValueError as exc:
        raise InputError("bad caps: %s" % exc) from None
    return caps


def _verdict_exit(verdict: str) -> int:
    return {VERIFIED: EXIT_OK, REFUTED: EXIT_FALSE, UNVERIFIED: EXIT_CAPS}.get(verdict, EXIT_OK)


# -- subcommands ------------------------------------------------------------


def cmd_check(args) -> int:
    system = _load(args.file)
    rep = classify_system(system)
    if not args.prop:
        if args.json:
            print(json.dumps(rep.as_dict(), indent=2))
        else:
            for key, value in rep.as_dict().items():
                if key not in ("rules", "notes"):
                    print("%s: %s" % (key, value))
            for note in rep.notes:
                print("note: %s" % note)
        return EXIT_OK
    ok = True
    for prop in args.prop:
        value = PROPERTIES[prop](rep)
        extra = " (max type %d)" % rep.max_type if prop == "type" else ""
        print("%s: %s%s" % (prop, "true" if value else "false", extra))
        ok &= value
    return EXIT_OK if ok else EXIT_FALSE


def cmd_transform(args) -> int:
    system = _load(args.file)
    method = args.method
    try:
        if method == "u":
            ctx = unravel(system)
        elif method == "t":
            ctx = linearize(system)
        else:
            ctx = sr_transform(system)
    except TransformError as exc:
        raise InputError(str(exc)) from None
    text = render_system(ctx)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_rewrite(args) -> int:
    system = _load(args.file)
    caps = _caps(args)
    try:
        term = parse_term(args.term, signature=system)
    except ParseError as exc:
        raise InputError("term: %s" % exc) from None
    try:
        if system.kind == "trs" and not args.conditional:
            graph = trs_reachable(system, term, caps)
        else:
            graph = ConditionalEngine(system, caps).reachable(term)
    except EngineError as exc:
        raise InputError(str(exc)) from None
    print("reachable: %d terms (%s)" % (len(graph), graph.status))
    if args.all:
        for t in graph.nodes:
            print("  %r" % (t,))
    nfs = graph.normal_forms()
    if graph.complete:
        print("normal forms:")
        for t in nfs:
            print("  %r" % (t,))
        return EXIT_OK
    print("search truncated; normal forms are not reported")
    return EXIT_CAPS


def _seeds(args, system) -> List:
    if args.seeds:
        try:
            lines = Path(args.seeds).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise InputError("cannot read %s: %s" % (args.seeds, exc.strerror)) from None
        out = []
        for n, line in enumerate(lines, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                out.append(parse_term(line, signature=system))
            except ParseError as exc:
                raise InputError("%s:%d: %s" % (args.seeds, n, exc)) from None
        return out
    n = args.random if args.random is not None else 5
    return random_seeds(system, n, seed=args.seed)


def cmd_oracle(args) -> int:
    system = _load(args.file)
    caps = _caps(args)
    if args.check == "iff":
        ok = check_iff_theorem(system)
        report = CheckReport([ProbeResult("iff", VERIFIED if ok else REFUTED, caps)], caps)
        method = "SR"
    else:
        seeds = _seeds(args, system)
        try:
            if args.check == "t-equiv":
                report = check_t_equivalence(system, seeds, caps)
                method = "T"
            else:
                pair = {"u": unraveling_pair, "sr": sr_pair, "sr-t": sr_t_pair}[args.method](system)
                method = pair.name
                check = check_soundness if args.check == "soundness" else check_completeness
                report = check(pair, seeds, caps)
        except (TransformError, EngineError) as exc:
            raise InputError(str(exc)) from None
    for p in report.probes:
        print("%-60s %s%s" % (p.name, p.verdict, " (%s)" % p.note if p.note else ""))
    print("verdict: %s" % report.verdict)
    if args.report:
        dump(report_dict(args.file, method, report), args.report)
    return _verdict_exit(report.verdict)


def cmd_corpus(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        raise InputError("%s is not a directory" % root)
    systems = [(p.name, _load(str(p))) for p in sorted(root.glob("*.trs"))]
    config = CorpusConfig(seeds_per_system=args.seeds_per_system, random_seed=args.seed)
    if args.caps:
        try:
            config.caps = EngineCaps.parse(args.caps, config.caps)
        except ValueError as exc:
            raise InputError("bad caps: %s" % exc) from None
    reports = run_corpus(systems, config)
    data = corpus_dict(reports)
    for entry in data["systems"]:
        counts = {}
        for p in entry["probes"]:
            counts[p["verdict"]] = counts.get(p["verdict"], 0) + 1
        summary = ", ".join("%s=%d" % kv for kv in sorted(counts.items()))
        print("%-30s %s [%s]" % (entry["system"], entry["verdict"], summary))
    print("verdict: %s" % data["verdict"])
    if args.report:
        dump(data, args.report)
    return _verdict_exit(data["verdict"])


# -- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctrslab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify a system")
    p.add_argument("file")
    p.add_argument("--prop", action="append", choices=sorted(PROPERTIES), help="test one property (repeatable)")
    p.add_argument("--json", action="store_true", help="print the full report as JSON")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("transform", help="apply U, T or SR and print the result")
    p.add_argument("file")
    p.add_argument("--method", choices=("u", "t", "sr"), required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("rewrite", help="bounded reachability from a term")
    p.add_argument("file")
    p.add_argument("--term", required=True)
    p.add_argument("--conditional", action="store_true", help="use the conditional engine even for a TRS")
    p.add_argument("--all", action="store_true", help="list every reachable term")
    p.add_argument("--max-steps", type=int)
    p.add_argument("--max-level", type=int)
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--caps", help='e.g. "max_steps=20,max_level=3"')
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("oracle", help="check soundness, completeness, T-equivalence or the iff theorem")
    p.add_argument("file")
    p.add_argument("--check", choices=("soundness", "completeness", "t-equiv", "iff"), required=True)
    p.add_argument("--method", choices=("u", "sr", "sr-t"), default="sr")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--seeds", help="file with one seed term per line")
    g.add_argument("--random", type=int, help="number of random seed terms")
    p.add_argument("--seed", type=int, default=0, help="random seed for generated terms")
    p.add_argument("--caps", help='e.g. "max_steps=20,max_level=3"')
    p.add_argument("--report", help="write a JSON report here")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("corpus", help="run every applicable check on each *.trs file of a directory")
    p.add_argument("dir")
    p.add_argument("--report", help="write a JSON report here")
    p.add_argument("--seeds-per-system", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--caps")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, MalformedSystem) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
