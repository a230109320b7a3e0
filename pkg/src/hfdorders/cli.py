"""Command line: ``analyze`` (config driven), ``boundary`` and ``factor`` one-shots."""
from __future__ import annotations

import argparse
import json
import sys

from .config import FORMATS, ConfigError, load_config
from .core import KElement, QuadraticOrder, ValidationError, format_element, norm
from .factor import (
    BudgetExceeded,
    UncertifiedDomain,
    boundary,
    boundary_norm_requirement,
    factorizations,
    hfd_certify,
)
from .report import EXIT_ERROR, EXIT_OK, ReportIOError, emit, exit_code, run_analysis


def _order_args(p: argparse.ArgumentParser):
    p.add_argument("--d", type=int, required=True, help="squarefree negative field parameter")
    p.add_argument("--f", type=int, default=1, help="conductor index of the order")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hfdorders", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="run the checks listed in a config file")
    an.add_argument("--config", required=True, metavar="PATH")
    an.add_argument("--format", choices=FORMATS, help="overrides the config's format")
    an.add_argument("--bound", type=int, help="overrides norm_bound")
    an.add_argument("--jobs", type=int, help="worker processes (overrides workers)")
    an.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")

    bd = sub.add_parser("boundary", help="boundary of (x + y*omega)/den in an HFD order")
    _order_args(bd)
    bd.add_argument("--x", type=int, required=True)
    bd.add_argument("--y", type=int, default=0)
    bd.add_argument("--den", type=int, default=1)
    bd.add_argument("--format", choices=("text", "json"), default="text")

    fa = sub.add_parser("factor", help="length set and factorizations of x + y*omega")
    _order_args(fa)
    fa.add_argument("--x", type=int, required=True)
    fa.add_argument("--y", type=int, default=0)
    fa.add_argument("--bound", type=int, default=10**6, help="norm budget")
    fa.add_argument("--format", choices=("text", "json"), default="text")
    return ap


def _analyze(args) -> int:
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read {args.config}: {exc.strerror}", file=sys.stderr)
        return EXIT_ERROR
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return EXIT_ERROR
    changes = {}
    if args.bound is not None:
        if args.bound < 2:
            print("config error: --bound must be >= 2", file=sys.stderr)
            return EXIT_ERROR
        changes["norm_bound"] = args.bound
    if args.format:
        changes["format"] = args.format
    if changes:
        from dataclasses import replace
        cfg = replace(cfg, **changes)
    jobs = args.jobs or cfg.workers
    if jobs < 1:
        print("config error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    report = run_analysis(cfg, workers=jobs)
    try:
        emit(report, cfg.format, args.output)
    except ReportIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return exit_code(report)


def _boundary(args) -> int:
    R = QuadraticOrder(args.d, args.f)
    x = KElement(R.maximal.from_maximal(args.x, args.y), args.den)
    m = R.f
    need = max(norm(x.num) * m * m, x.den * x.den * m * m, boundary_norm_requirement(R, 2))
    cert = hfd_certify(R, need)
    try:
        value = boundary(R, x, cert)
    except UncertifiedDomain as exc:
        print(f"error: UNCERTIFIED_DOMAIN: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.format == "json":
        print(json.dumps({"order": [R.d, R.f], "num": list(x.num.coords), "den": x.den,
                          "boundary": value, "certificate": cert.verdict.value}, sort_keys=True))
    else:
        print(f"boundary in {R} of ({format_element(x.num)})/{x.den} = {value}  [{cert.verdict.value}]")
    return EXIT_OK


def _factor(args) -> int:
    R = QuadraticOrder(args.d, args.f)
    x = R.from_maximal(args.x, args.y)
    try:
        fs = factorizations(R, x, budget=args.bound)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    facts = fs.sorted_factorizations()
    if args.format == "json":
        print(json.dumps({"order": [R.d, R.f], "element": list(x.coords), "norm": norm(x),
                          "lengths": list(fs.lengths),
                          "factorizations": [[list(y.coords) for y in fac] for fac in facts]},
                         sort_keys=True))
    else:
        print(f"{format_element(x)} in {R}: norm {norm(x)}, lengths {list(fs.lengths)}")
        for fac in facts:
            print("  " + " * ".join(f"({format_element(y)})" for y in fac))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return _analyze(args)
        if args.command == "boundary":
            return _boundary(args)
        return _factor(args)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
