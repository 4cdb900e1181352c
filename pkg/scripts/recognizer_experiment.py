#!/usr/bin/env python3
"""Measure recognition success rates across degrees and budgets.

The draw budget is sized for a worst-case density of 1/19, so on
uniform input the observed success rate should crush the 1 - epsilon
guarantee; this script shows by how much, and how many draws a typical
run actually needs.
"""
import argparse
import sys
from fractions import Fraction

import numpy as np

from precycles import bounds, recognize


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degrees", type=str, default="10,20,50,100")
    ap.add_argument("--epsilon", type=str, default="1/100")
    ap.add_argument("--reps", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--parity", choices=("any", "even"), default="any")
    args = ap.parse_args()
    degrees = [int(tok) for tok in args.degrees.split(",")]
    epsilon = Fraction(args.epsilon)
    budget = bounds.sample_count(epsilon, Fraction(1, 19))

    print(f"epsilon = {epsilon}, draw budget = {budget}, "
          f"reps = {args.reps}, parity = {args.parity}")
    print(f"{'n':>5} {'found':>7} {'rate':>8} {'mean draws':>11} "
          f"{'max draws':>10}")
    for n in degrees:
        found = 0
        draws = []
        for rep in range(args.reps):
            seq = np.random.SeedSequence(
                entropy=args.seed, spawn_key=(n, rep))
            source = recognize.UniformSource(
                n, args.parity, np.random.Generator(np.random.PCG64(seq)))
            out = recognize.run_recognizer(source, epsilon)
            if out.found:
                found += 1
                draws.append(out.draws_used)
        rate = found / args.reps
        mean = sum(draws) / len(draws) if draws else float("nan")
        top = max(draws) if draws else 0
        print(f"{n:>5} {found:>7} {rate:>8.4f} {mean:>11.2f} {top:>10}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
