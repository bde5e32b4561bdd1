"""Quantum versus classical label agreement across counting-register sizes.

For each h, random separable datasets are trained and every query is
classified both ways; queries inside the boundary resolution are skipped.

    python3 scripts/parity_sweep.py --h 6,8,10 --datasets 20
"""

import argparse

import numpy as np

from aeqsvm.verify import parity_runs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", default="6,8,10")
    ap.add_argument("--datasets", type=int, default=20)
    ap.add_argument("--queries", type=int, default=6)
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    print("h  retained  agreed  skipped  agreement")
    for h in (int(s) for s in args.h.split(",")):
        rng = np.random.default_rng([args.seed, h])
        retained, agreed, skipped = parity_runs(rng, args.datasets, args.queries, h, args.gamma)
        rate = agreed / retained if retained else float("nan")
        print(f"{h:<2} {retained:>8} {agreed:>7} {skipped:>8}  {rate:9.4f}")


if __name__ == "__main__":
    main()
