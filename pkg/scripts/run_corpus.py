"""Extract bounds and normal forms for every corpus term and print a table."""

from __future__ import annotations

import argparse

from sysf_bbc import corpus
from sysf_bbc.cli import run_report
from sysf_bbc.realizers import DEFAULT_FUEL

COLUMNS = ("name", "status", "bound", "steps_oracle", "norm_steps", "nf_steps", "term_size", "wall_time")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("names", nargs="*", help="corpus entries (default: all)")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.add_argument("--small", action="store_true", help="only the three smallest terms")
    args = p.parse_args()
    names = args.names or (list(corpus.SMALL) if args.small else corpus.names())
    print("\t".join(COLUMNS))
    for name in names:
        r = run_report(corpus.load(name), args.fuel)
        row = [name] + [getattr(r, c) for c in COLUMNS[1:]]
        row[-1] = f"{r.wall_time:.2f}"
        print("\t".join(str(v) for v in row), flush=True)


if __name__ == "__main__":
    main()
