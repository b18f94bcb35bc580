#!/usr/bin/env python3
"""Emit the tail-vs-p curve data for several trial counts.

Writes figure_n{n}.csv files (p, exact 12-digit tail, segment) into the
current working directory; n = 5 is the canonical sawtooth example.
"""

import argparse

from binexceed.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=1000)
    parser.add_argument("--trials", type=int, nargs="+", default=[2, 5, 10])
    args = parser.parse_args()
    for n in args.trials:
        code = cli_main(["figure", str(n), "--points", str(args.points),
                         "--out", f"figure_n{n}.csv"])
        if code != 0:
            raise SystemExit(code)


if __name__ == "__main__":
    main()
