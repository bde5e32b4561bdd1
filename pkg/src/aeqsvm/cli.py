"""Command line: ``aeqsvm {train, classify, verify, resources}``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 numerical
failure. Reports are JSON with top-level keys ``schema_version``,
``command``, ``config``, ``results`` and ``residuals``.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import qtrain, resources, verify
from .config import resolve
from .datasets import DatasetError, load_dataset, parse_queries
from .errors import QubitBudgetError, SingularSystemError, ZeroOperatorError
from .qclassify import classify_quantum
from .svm import SvmModel, TrainingSet, build_kernel, build_system, classify_classical

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class InputError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def report(command: str, config: dict, results: list, residuals: dict) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "results": results,
        "residuals": residuals,
    }
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --- train -----------------------------------------------------------------------------


def cmd_train(args) -> int:
    cfg = resolve(args.config, gamma=args.gamma, k=args.k, kappa_cap=args.kappa_cap, epsilon=args.epsilon)
    ts = load_dataset(args.data)
    params = qtrain.PrecisionParams(cfg.k, cfg.kappa_cap, cfg.epsilon)
    res = qtrain.train(ts, cfg.gamma, params)
    model = res.model
    record = {
        "b": model.b,
        "alpha": model.alpha,
        "c_norm": model.c_norm,
        "amplitudes": res.amplitudes,
        "eigenvalues": res.decomposition.eigenvalues,
        "quantized_eigenvalues": res.quantized.eigenvalues,
        "retained": res.retained,
        "input_scale": res.decomposition.input_scale,
        "kappa": res.kappa,
        "quantization": {"k": cfg.k, "step": 2.0**-cfg.k, "kappa_cap": cfg.kappa_cap},
        "gamma": cfg.gamma,
        "training_set": {"vectors": ts.vectors, "labels": ts.labels},
    }
    residuals = {"solver": res.residual, "retained_subspace": res.projected_residual}
    _emit(report("train", cfg.as_dict() | {"data": str(args.data)}, [record], residuals), args.out)
    return EXIT_OK


# --- classify --------------------------------------------------------------------------


def load_model(path) -> tuple[SvmModel, TrainingSet, dict]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        rec = doc["results"][0]
        ts = TrainingSet(rec["training_set"]["vectors"], rec["training_set"]["labels"])
        alpha = np.array(rec["alpha"], dtype=float)
        model = SvmModel(float(rec["b"]), alpha, float(rec["c_norm"]))
    except FileNotFoundError:
        raise InputError(f"{path}: file not found") from None
    except (OSError, ValueError, KeyError, IndexError, TypeError) as exc:
        raise InputError(f"{path}: not a model file ({exc})") from None
    if alpha.size != ts.m:
        raise InputError(f"{path}: {alpha.size} multipliers for {ts.m} training vectors")
    return model, ts, doc


def cmd_classify(args) -> int:
    cfg = resolve(args.config, h=args.h, mode=args.mode, seed=args.seed)
    model, ts, _ = load_model(args.model)
    queries, true_labels = parse_queries(args.query, ts.n)

    def one(i):
        q = queries[i]
        if not np.any(q):
            raise InputError(f"query {i + 1} is the zero vector")
        seed = [cfg.seed, i] if cfg.mode == "sample" else None
        qres = classify_quantum(model, ts, q, cfg.h, mode=cfg.mode, seed=seed)
        cres = classify_classical(model, ts, q)
        rec = {
            "query": q,
            "quantum_label": qres.label,
            "a_hat": qres.a_hat,
            "y": qres.y,
            "inner_estimate": qres.inner_estimate,
            "exact_inner": qres.exact_inner,
            "boundary": qres.boundary,
            "classical_label": cres.label,
            "margin": cres.margin,
            "agreement": qres.label == cres.label,
        }
        if true_labels[i] is not None:
            rec["true_label"] = int(true_labels[i])
        if qres.distribution is not None:
            rec["distribution"] = qres.distribution
        return rec

    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        records = list(pool.map(one, range(len(queries))))
    errors = [abs(r["inner_estimate"] - r["exact_inner"]) for r in records]
    non_boundary = [r for r in records if not r["boundary"]]
    residuals = {
        "max_abs_inner_error": max(errors),
        "non_boundary_disagreements": sum(not r["agreement"] for r in non_boundary),
    }
    config = cfg.as_dict() | {"model": str(args.model), "query": args.query}
    _emit(report("classify", config, records, residuals), args.out)
    return EXIT_OK


# --- verify ----------------------------------------------------------------------------


def cmd_verify(args) -> int:
    checks = verify.run(args.scope, args.seed, corrupt_q_sign=args.corrupt_q_sign)
    results = [c.as_record() for c in checks]
    residuals = {c.name: c.max_residual for c in checks}
    config = {"scope": args.scope, "seed": args.seed, "corrupt_q_sign": args.corrupt_q_sign}
    _emit(report("verify", config, results, residuals), args.out)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  max_residual={c.max_residual:.3e}  tol={c.tolerance:.1e}", file=sys.stderr)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


# --- resources -------------------------------------------------------------------------


def _float_list(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def cmd_resources(args) -> int:
    if args.data:
        ts = load_dataset(args.data)
        f = build_system(build_kernel(ts), ts.labels, args.gamma).f_matrix
        kappa = qtrain.condition_number(qtrain.eigendecompose(f), 1e-10)
        datasets = [(Path(args.data).stem, ts.m, ts.n, kappa)]
    elif args.benchmark_datasets:
        datasets = [(name, m, n, args.kappa) for name, m, n in resources.BENCHMARK_DATASETS]
    else:
        if args.m is None or args.n is None:
            raise InputError("give --m and --n, or --data, or --benchmark-datasets")
        datasets = [(f"m={args.m},n={args.n}", args.m, args.n, args.kappa)]
    for _, m, n, kappa in datasets:
        if m < 1 or n < 1 or kappa < 1:
            raise InputError("need m >= 1, n >= 1, kappa >= 1")
    for acc in args.accuracies:
        if not 0 < acc < 1:
            raise InputError(f"accuracy {acc} outside (0, 1)")
    table = resources.emit_comparison_table(datasets, args.accuracies)
    curve = resources.iteration_curve()
    results = [{"kind": "comparison_table", **table.to_json()}, {"kind": "swap_test_curve", "rows": curve}]
    if args.csv:
        Path(args.csv).write_text(table.to_csv(), encoding="utf-8")
    if args.curve_csv:
        lines = ["p,epsilon,iterations"] + [f"{r['p']!r},{r['epsilon']!r},{r['iterations']}" for r in curve]
        Path(args.curve_csv).write_text("\n".join(lines) + "\n", encoding="utf-8")
    config = {
        "accuracies": args.accuracies,
        "kappa": args.kappa,
        "gamma": args.gamma,
        "datasets": [list(d) for d in datasets],
    }
    _emit(report("resources", config, results, {}), args.out)
    return EXIT_OK


# --- entry point -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aeqsvm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train an LS-SVM through the filtered spectral inverse")
    p.add_argument("--data", required=True, help="CSV: label, features...")
    p.add_argument("--gamma", type=float)
    p.add_argument("--k", type=int, help="eigenvalue precision bits")
    p.add_argument("--kappa-cap", type=float, dest="kappa_cap")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--config", help="flat key = value file; flags win")
    p.add_argument("--out", help="model JSON path (default: stdout)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify queries with amplitude estimation")
    p.add_argument("--model", required=True)
    p.add_argument("--query", required=True, help="CSV path or inline 'x1,x2;y1,y2'")
    p.add_argument("--h", type=int, help="counting qubits")
    p.add_argument("--mode", choices=["sample", "modal", "full-distribution"])
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--scope", choices=verify.SCOPES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--corrupt-q-sign", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("resources", help="qubit and complexity tables")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--data", help="derive m, n and kappa from a dataset CSV")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--benchmark-datasets", action="store_true", help="the six benchmark (m, n) pairs")
    p.add_argument("--accuracies", type=_float_list, default=list(resources.BENCHMARK_ACCURACIES))
    p.add_argument("--csv", help="write the long-format table CSV here")
    p.add_argument("--curve-csv", help="write swap-test iteration curve CSV here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_resources)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ZeroOperatorError, SingularSystemError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DatasetError, InputError, QubitBudgetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
