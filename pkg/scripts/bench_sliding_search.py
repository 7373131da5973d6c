#!/usr/bin/env python3
"""Timing sweep of the naive vs FFT sliding-distance paths.

Prints a table and optionally writes the CSV that `quakescope
bench-search` emits, including the whole-collection mode (one query swept
over many targets, which is what an interactive search actually costs).
"""

import argparse
import csv
import sys

from quakescope.search import benchmark_rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-n", type=int, nargs="*",
                        default=[1024 * 2**i for i in range(5)])
    parser.add_argument("--m", type=int, default=5, help="topic rows")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--collection", type=int, default=50,
                        help="targets per collection-mode row (0 disables)")
    parser.add_argument("--out", default=None, help="also write CSV here")
    args = parser.parse_args()

    rows = benchmark_rows(args.n, m=args.m, repeats=args.repeats,
                          collection_size=args.collection)
    print(f"{'mode':<12}{'n':>8}{'naive_ms':>12}{'fft_ms':>10}{'speedup':>9}")
    for row in rows:
        print(f"{row['mode']:<12}{row['n']:>8}{row['naive_ms']:>12.2f}"
              f"{row['fft_ms']:>10.2f}{row['naive_ms'] / row['fft_ms']:>8.1f}x")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["mode", "n", "naive_ms", "fft_ms"])
            writer.writeheader()
            writer.writerows(rows)
        print(f"\nwrote {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
