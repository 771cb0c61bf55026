#!/usr/bin/env python3
"""Random-matrix check of the scalar atom rule.

Draws two block-diagonal projection families in generic position via
Haar-random rotation and measures the rank of every pairwise
intersection.  Each measured rank over the matrix dimension should land
on max(alpha + beta - 1, 0) for the corresponding pair of masses.

Example:

    python3 scripts/atom_oracle.py --weights1 4/5,1/10,1/10 \
        --weights2 7/10,3/10 --min-dim 2000 --trials 5
"""

import argparse
import json
import sys
from fractions import Fraction

from freecore.oracle import simulate_pair_atoms


def _mass_list(text: str) -> list[Fraction]:
    parts = [Fraction(p) for p in text.split(",") if p.strip()]
    if sum(parts) != 1:
        raise argparse.ArgumentTypeError(f"masses must sum to 1, got {text!r}")
    return parts


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--weights1", type=_mass_list, default=_mass_list("4/5,1/10,1/10"))
    parser.add_argument("--weights2", type=_mass_list, default=_mass_list("7/10,3/10"))
    parser.add_argument("--min-dim", type=int, default=2000)
    parser.add_argument("--trials", type=int, default=5)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--tol", type=float, default=0.02)
    args = parser.parse_args(argv)

    report = simulate_pair_atoms(
        args.weights1,
        args.weights2,
        min_dim=args.min_dim,
        trials=args.trials,
        seed=args.seed,
        tol=args.tol,
    )
    print(json.dumps(report, indent=2, default=str, sort_keys=True))
    return 0 if report["agrees"] else 1


if __name__ == "__main__":
    sys.exit(main())
