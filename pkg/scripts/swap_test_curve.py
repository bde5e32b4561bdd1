"""Swap-test repetitions versus target error: prediction and Monte-Carlo check.

Writes a CSV of (p, epsilon, predicted, empirical, coverage) rows.

    python3 scripts/swap_test_curve.py --out swap_curve.csv
"""

import argparse
import csv
import sys

from aeqsvm.resources import SWAP_TEST_PROBABILITIES, swap_test_baseline


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--eps", default="0.02,0.05,0.1,0.15,0.2,0.3")
    ap.add_argument("--out", help="CSV path (default: stdout)")
    args = ap.parse_args(argv)

    eps_grid = [float(e) for e in args.eps.split(",")]
    rows = []
    for p in SWAP_TEST_PROBABILITIES:
        for eps in eps_grid:
            rep = swap_test_baseline(p, eps, trials=args.trials, seed=args.seed, eps_grid=[eps])
            rows.append(
                {
                    "p": p,
                    "epsilon": eps,
                    "predicted": rep.predicted_iterations,
                    "empirical": rep.empirical_iterations,
                    "coverage_at_predicted": rep.coverage_at_prediction,
                }
            )
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
