"""latcheck command line: analyze, verify, export, catalog."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .cache import CachedLoader, load_or_build
from .group import GroupError
from .groupspec import SpecError, canonical, make_named
from .harness import (
    CATALOG,
    CLAIMS,
    SKIP_BUDGET,
    SUITES,
    TIERS,
    SuiteReport,
    catalog,
    run_suite,
    verify_spec,
)
from .invariants import invariant_report, modular_elements, normal_sublattice
from .lattice import BudgetExceeded, LatticeError, enumerate_subgroups

logger = logging.getLogger("latcheck")


def _lattice(spec: str, group, args):
    if args.no_cache:
        return enumerate_subgroups(group)
    return load_or_build(spec, group, args.cache_dir)


def _load(args):
    spec = canonical(args.spec)
    group = make_named(spec)
    return spec, group, _lattice(spec, group, args)


def cmd_analyze(args) -> int:
    from .export import chain_words, hasse_figure

    spec, group, lat = _load(args)
    rep = invariant_report(group, lat, spec=spec, modular=not args.no_modular)
    out = {
        "spec": rep.spec,
        "order": rep.order,
        "subgroups": rep.subgroups,
        "minmaxl": rep.minmaxl,
        "chiefl": rep.chiefl,
        "modl": rep.modl,
        "solvable": rep.solvable,
        "supersolvable": rep.supersolvable,
        "graded": rep.graded,
    }
    if args.witness:
        out["witnesses"] = {k: chain_words(group, lat, v) for k, v in sorted(rep.witnesses.items())}
    if args.json:
        print(json.dumps(out, indent=2, sort_keys=False))
    else:
        width = max(len(k) for k in out if k != "witnesses")
        for k, v in out.items():
            if k == "witnesses":
                continue
            if isinstance(v, bool):
                v = "yes" if v else "no"
            print(f"{k:<{width}}  {v}")
        if args.no_modular:
            print("(modular-element scan skipped; modl reported as -1)")
        for name, chain in out.get("witnesses", {}).items():
            print(f"\n{name} witness ({len(chain) - 1} links):")
            for link in chain:
                gens = ", ".join(link["generators"]) or "()"
                print(f"  order {link['order']:>6}  <{gens}>")
    if args.figure:
        mods = None if args.no_modular else modular_elements(lat)
        hasse_figure(lat, args.figure, mods, normal_sublattice(group, lat), title=spec)
        logger.info("wrote %s", args.figure)
    return 0


def _print_suite(report: SuiteReport, stream=None) -> None:
    stream = stream or sys.stdout
    for r in report.reports:
        print(f"{r.group}  (order {r.order})", file=stream)
        for e in r.entries:
            marker = {"pass": "ok  ", "fail": "FAIL", SKIP_BUDGET: "BUDG"}.get(e.status, "skip")
            line = f"  [{marker}] {e.claim:<15} {e.status}"
            if e.detail and e.status != "pass":
                line += f": {e.detail}"
            print(line, file=stream)
    counts = report.counts()
    print("\nsummary: " + ", ".join(f"{k} {v}" for k, v in counts.items()), file=stream)
    if counts.get(SKIP_BUDGET):
        print(f"warning: {counts[SKIP_BUDGET]} claim(s) skipped for budget, not verified", file=stream)


def cmd_verify(args) -> int:
    loader = None if args.no_cache else CachedLoader(args.cache_dir)
    started = time.monotonic()
    if args.catalog:
        entries = catalog(args.tier)
        report = run_suite(entries, suite=args.suite, jobs=args.jobs,
                           budget_minutes=args.budget_mins, lattice_loader=loader)
    else:
        deadline = None if args.budget_mins is None else started + 60.0 * args.budget_mins
        report = SuiteReport([verify_spec(args.spec, suite=args.suite, lattice_loader=loader,
                                          deadline=deadline)])
        report.reports = [r for r in report.reports if r.entries]
    if args.json:
        print(json.dumps(report.to_dict(timing=True), indent=2))
    else:
        _print_suite(report)
        print(f"elapsed {time.monotonic() - started:.1f}s")
    if args.report_dir:
        from .export import verdict_figure, write_verdicts_tsv

        out = Path(args.report_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_verdicts_tsv(report, out / "verdicts.tsv")
        verdict_figure(report, out / "verdicts.png")
        logger.info("wrote %s and %s", out / "verdicts.tsv", out / "verdicts.png")
    return report.exit_code


def cmd_export(args) -> int:
    from .export import hasse_figure, to_dot, to_json

    spec, group, lat = _load(args)
    mods = modular_elements(lat)
    normal = normal_sublattice(group, lat)
    if args.format == "dot":
        text = to_dot(lat, mods, normal, name=spec)
    else:
        text = json.dumps(to_json(lat, spec, mods, normal), indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.figure:
        hasse_figure(lat, args.figure, mods, normal, title=spec)
    return 0


def cmd_catalog(args) -> int:
    if args.action == "claims":
        for cid, text in CLAIMS.items():
            print(f"{cid}\t{text}")
        return 0
    print("tier\torder\tspec\tclaims")
    for e in CATALOG:
        if args.tier in (None, e.tier):
            print(f"{e.tier}\t{e.order}\t{e.spec}\t{','.join(e.claims) if e.claims else '*'}")
    return 0


def _add_cache_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cache-dir", type=Path, default=None,
                   help="lattice cache directory (default: $LATCHECK_CACHE or the user cache dir)")
    p.add_argument("--no-cache", action="store_true", help="always recompute the lattice")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latcheck", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="subgroup lattice invariants of one group")
    p.add_argument("spec")
    p.add_argument("--json", action="store_true")
    p.add_argument("--witness", action="store_true", help="include witness chains")
    p.add_argument("--no-modular", action="store_true",
                   help="skip the modular-element scan (large lattices)")
    p.add_argument("--figure", type=Path, help="write a Hasse diagram PNG")
    _add_cache_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="check theorem claims on a group or the catalog")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("spec", nargs="?")
    target.add_argument("--catalog", action="store_true")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.add_argument("--tier", choices=TIERS + ("all",), default="core")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget-mins", type=float, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--report-dir", type=Path, help="write verdicts.tsv and verdicts.png here")
    _add_cache_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="write the lattice as DOT or JSON")
    p.add_argument("spec")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--out", type=Path)
    p.add_argument("--figure", type=Path, help="also write a Hasse diagram PNG")
    _add_cache_flags(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("catalog", help="list the built-in catalog")
    p.add_argument("action", choices=("list", "claims"))
    p.add_argument("--tier", choices=TIERS)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("latcheck: --jobs must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"latcheck: bad group spec: {exc}", file=sys.stderr)
        return 2
    except (GroupError, LatticeError, BudgetExceeded) as exc:
        print(f"latcheck: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"latcheck: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
