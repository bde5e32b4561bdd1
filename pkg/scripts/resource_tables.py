"""Print qubit and complexity tables for the six benchmark datasets.

    python3 scripts/resource_tables.py --kappa 1.0
"""

import argparse

from aeqsvm.resources import BENCHMARK_ACCURACIES, BENCHMARK_DATASETS, TABLE_NAMES, emit_comparison_table


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kappa", type=float, default=1.0)
    args = ap.parse_args(argv)

    table = emit_comparison_table([(n, m, f, args.kappa) for n, m, f in BENCHMARK_DATASETS], BENCHMARK_ACCURACIES)
    header = f"{'dataset':<16}" + "".join(f"{a:>12}" for a in BENCHMARK_ACCURACIES)
    for name in TABLE_NAMES:
        print(f"\n{name}")
        print(header)
        for (ds, *_), row in zip(table.datasets, table.grid(name)):
            cells = "".join(f"{v:>12}" if isinstance(v, int) else f"{v:>12.4g}" for v in row)
            print(f"{ds:<16}{cells}")


if __name__ == "__main__":
    main()
