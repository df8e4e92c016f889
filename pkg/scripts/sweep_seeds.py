#!/usr/bin/env python3
"""Sweep one preset over a seed range and print (or dump) the summary.

Handy for bisecting a flaky seed or checking how a tolerance change shifts
the pass rate, e.g.::

    python scripts/sweep_seeds.py fig2 --seeds 500 --json > fig2.json
"""

from __future__ import annotations

import argparse
import json
import sys

from spectral_scope.scenarios import SCENARIOS, summarize, sweep


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("name", choices=SCENARIOS)
    parser.add_argument("--seeds", type=int, default=100)
    parser.add_argument("--seed0", type=int, default=0, help="first seed of the range")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--sign", choices=("plus", "minus"), default="plus",
                        help="orientation of the continuous-time vector field")
    parser.add_argument("--json", action="store_true", help="emit the summary as JSON")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    sign = -1.0 if args.sign == "minus" else 1.0
    results = sweep(args.name, seeds=args.seeds, jobs=args.jobs, seed0=args.seed0, sign=sign)
    summary = summarize(results)
    if args.json:
        json.dump(summary.to_json_dict(), sys.stdout, indent=2)
        print()
    else:
        print(f"{summary.name}: {summary.passes}/{summary.total} passed "
              f"(rate {summary.pass_rate:.2f}), "
              f"max error among passes {summary.max_error_passing:.3e}, "
              f"mean {summary.mean_error_passing:.3e}")
        if summary.failed_seeds:
            print(f"failed seeds: {summary.failed_seeds}")
        if summary.overflow_seeds:
            print(f"overflow seeds: {summary.overflow_seeds}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
