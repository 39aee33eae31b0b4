"""Command-line front end: check, translate, run, oracle, diff."""

from __future__ import annotations

import argparse
import os
import sys
import time
from collections import Counter
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from . import lambda_core as lc
from . import realizers as R
from . import system_f as sf
from .ltbbc import syntax as lts
from .ltbbc.machine import eval_value, readback
from .ltbbc.typecheck import LTTypeError, lt_typecheck
from .names import Fresh

EXIT_OK, EXIT_STATIC, EXIT_FUEL, EXIT_CONTRACT = 0, 1, 2, 3
SEED_ENV = "SYSF_BBC_SEED"


class StaticError(Exception):
    pass


@dataclass
class RunReport:
    derivation: str
    term_size: int
    bound: Optional[int]
    steps_oracle: Optional[int]
    nf: Optional[str]
    oracle_nf: Optional[str]
    norm_steps: Optional[int]
    nf_steps: Optional[int]
    wall_time: float
    status: str

    def lines(self, fmt: str) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "wall_time":
                v = f"{v:.3f}"
            out.append(f"{f.name}={v}" if fmt == "machine" else f"{f.name:>12}: {v}")
        return out


def load_derivation(path: Path) -> sf.Derivation:
    try:
        src = path.read_text()
    except OSError as e:
        raise StaticError(str(e)) from e
    try:
        d = sf.elaborate(sf.parse_term(src))
    except (sf.ParseError, sf.FTypeError) as e:
        raise StaticError(f"{type(e).__name__}: {e}") from e
    verdict = sf.check_derivation(d)
    if not verdict:
        raise StaticError(f"rule violation at {verdict.path}: {verdict.reason}")
    return d


def load_ltb(path: Path) -> lts.LTTerm:
    try:
        return lts.parse(path.read_text())
    except (OSError, lts.ParseError) as e:
        raise StaticError(str(e)) from e


def _is_ltb(path: Path) -> bool:
    return path.suffix == ".ltb"


def _context(seed: int, explain: bool = False) -> R.GenContext:
    return R.GenContext(fresh=Fresh(start=seed), notes=[] if explain else None)


# --- commands ---


def cmd_check(args) -> int:
    path = Path(args.file)
    if _is_ltb(path):
        t = load_ltb(path)
        try:
            ty = lt_typecheck({}, t)
        except LTTypeError as e:
            raise StaticError(f"type error: {e}") from e
        print(lts.show_type(ty))
        return EXIT_OK
    d = load_derivation(path)
    print(sf.show_derivation(d))
    return EXIT_OK


def cmd_translate(args) -> int:
    d = load_derivation(Path(args.file))
    ctx = _context(args.seed, args.explain)
    try:
        norm = R.gen_norm(d, ctx)
    except R.OpenDerivation as e:
        raise StaticError(str(e)) from e
    if args.explain:
        counts = Counter(tag for tag, _ in ctx.notes)
        print(f"; {lc.show(d.subject)} : {sf.show_type(d.type)}")
        for tag, n in sorted(counts.items()):
            print(f"; {tag} x{n}")
    print(lts.show(norm))
    return EXIT_OK


def _tracer(enabled: bool, limit: int):
    if not enabled:
        return None
    count = [0]

    def trace(rule: str) -> None:
        count[0] += 1
        if count[0] <= limit:
            print(f"step {count[0]}: {rule}", file=sys.stderr)

    return trace


def _run_ltb(args, path: Path) -> int:
    t = load_ltb(path)
    start = time.perf_counter()
    try:
        steps, v = eval_value(t, args.fuel, trace=_tracer(args.trace, args.trace_limit))
    except lc.FuelExhausted as e:
        print(f"fuel exhausted after {e.steps} steps")
        return EXIT_FUEL
    print(f"steps={steps}")
    print(f"value={lts.show(readback(v))}")
    print(f"wall_time={time.perf_counter() - start:.3f}")
    return EXIT_OK


def run_report(d: sf.Derivation, fuel: int, seed: int = 0, trace=None) -> RunReport:
    start = time.perf_counter()
    norm = R.gen_norm(d, _context(seed))
    size = lts.size(norm)
    summary = f"{lc.show(d.subject)} : {sf.show_type(d.type)}"
    try:
        e = R.extract_normal_form(d, fuel, norm=norm, trace=trace)
    except lc.FuelExhausted as ex:
        return RunReport(
            summary, size, getattr(ex, "bound", None), None, None, None,
            getattr(ex, "norm_steps", ex.steps if getattr(ex, "phase", "") == "norm" else None),
            ex.steps if getattr(ex, "phase", "") == "nf" else None,
            time.perf_counter() - start, f"fuel:{getattr(ex, 'phase', '?')}",
        )
    return RunReport(
        summary, size, e.bound, e.steps_oracle, lc.show(e.nf), lc.show(e.oracle_nf),
        e.norm_steps, e.nf_steps, time.perf_counter() - start,
        "ok" if e.sound else "contract",
    )


def _exit_for(report: RunReport) -> int:
    if report.status == "ok":
        return EXIT_OK
    if report.status.startswith("fuel"):
        return EXIT_FUEL
    return EXIT_CONTRACT


def cmd_run(args) -> int:
    path = Path(args.file)
    if _is_ltb(path):
        return _run_ltb(args, path)
    d = load_derivation(path)
    report = run_report(d, args.fuel, args.seed, _tracer(args.trace, args.trace_limit))
    print("\n".join(report.lines(args.format)))
    return _exit_for(report)


def cmd_oracle(args) -> int:
    d = load_derivation(Path(args.file))
    try:
        steps, nf = lc.normalize_wh(d.subject, args.fuel)
    except lc.FuelExhausted as e:
        print(f"fuel exhausted after {e.steps} steps")
        return EXIT_FUEL
    if args.format == "machine":
        print(f"steps={steps}\nnf={lc.show(nf)}")
    else:
        print(f"{steps} {lc.show(nf)}")
    return EXIT_OK


def cmd_diff(args) -> int:
    d = load_derivation(Path(args.file))
    report = run_report(d, args.fuel, args.seed)
    lines = report.lines(args.format)
    if report.status == "ok" or report.status == "contract":
        verdict = "match" if report.nf == report.oracle_nf else "mismatch"
        bound = "sufficient" if report.bound >= report.steps_oracle else "insufficient"
        lines += [f"nf_verdict={verdict}", f"bound_verdict={bound}"]
    print("\n".join(lines))
    return _exit_for(report)


# --- entry point ---


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=int(os.environ.get(SEED_ENV, "0")),
        help=f"fresh-name supply seed (default ${SEED_ENV} or 0)",
    )
    common.add_argument("--format", choices=("text", "machine"), default="text")

    fueled = argparse.ArgumentParser(add_help=False)
    fueled.add_argument("--fuel", type=int, default=R.DEFAULT_FUEL, help="steps per phase")

    p = argparse.ArgumentParser(prog="sysf-bbc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="elaborate and re-check a term")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("translate", parents=[common], help="print the normalizer term")
    t.add_argument("file")
    t.add_argument("--explain", action="store_true", help="prefix clause annotations")
    t.set_defaults(func=cmd_translate)

    r = sub.add_parser("run", parents=[common, fueled], help="extract the normal form")
    r.add_argument("file")
    r.add_argument("--trace", action="store_true", help="stream fired rules to stderr")
    r.add_argument("--trace-limit", type=int, default=200)
    r.set_defaults(func=cmd_run)

    o = sub.add_parser("oracle", parents=[common, fueled], help="weak head normalize directly")
    o.add_argument("file")
    o.set_defaults(func=cmd_oracle)

    df = sub.add_parser("diff", parents=[common, fueled], help="run and compare with the oracle")
    df.add_argument("file")
    df.set_defaults(func=cmd_diff)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StaticError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_STATIC


if __name__ == "__main__":
    sys.exit(main())
