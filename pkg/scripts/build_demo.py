#!/usr/bin/env python3
"""One-shot demo build: synthetic ensemble -> full artifacts directory.

Afterwards: `quakescope serve --artifacts <out>/artifacts` (add
`--static frontend/dist` for the browser UI).
"""

import argparse
from pathlib import Path

from quakescope.cli import main as cli


def run(*args):
    code = cli([str(a) for a in args])
    if code != 0:
        raise SystemExit(code)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo", help="output directory")
    parser.add_argument("--count", type=int, default=50)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--k", type=int, default=5)
    parser.add_argument("--four-phase", action="store_true",
                        help="include the 4-phase reference record")
    args = parser.parse_args()

    out = Path(args.out)
    data, artifacts = out / "data", out / "artifacts"
    run("synth", "--out", data, "--count", args.count, "--seed", args.seed)
    if args.four_phase:
        run("synth", "--out", data, "--four-phase")
    run("fit", "--records", data, "--artifacts", artifacts,
        "--K", args.k, "--seed", args.seed)
    run("topics", "--artifacts", artifacts)
    run("matrix", "--artifacts", artifacts)
    print(f"\nready: quakescope serve --artifacts {artifacts}")


if __name__ == "__main__":
    main()
