"""Qubit counts, swap-test repetition model and complexity surrogates.

All logarithms are base 2. The precision-register width ``k`` is taken as
``ceil(log2(1/eps))`` (eigenvalues resolved to ``2**-k ~ eps``), and the
counting-register width as ``h = ceil(log2((pi + sqrt(3) pi) / eps))``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .qsim import Statevector, apply_hadamard, measurement_distribution

SWAP_TEST_PROBABILITIES = (0.1, 0.3, 0.5)

FORMULAS = {
    "aeqsvm_qubits": "3 + ceil(log2(m+1)) + ceil(log2(1/eps)) + ceil(log2(2 + 1/(2 eps))) + 1 + ceil(log2((pi + sqrt(3) pi)/eps))",
    "lsqsvm_qubits": "T * (3 + ceil(log2(m+1)) + ceil(log2(1/eps)) + ceil(log2(2 + 1/(2 eps))) + 1)",
    "swap_iterations": "ceil(P (1 - P) / eps^2)",
    "aeqsvm_complexity": "kappa^3 eps^-3 (log2(m n) + 1)",
    "lsqsvm_complexity": "(kappa^3 eps^-3 log2(m n) + log2(n)) / (12 eps^2)",
}


def _ceil_log2(x: float) -> int:
    # A relative guard keeps exact powers of two from rounding up on float noise.
    return math.ceil(math.log2(x) - 1e-12)


def _check_eps(epsilon: float):
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")


def precision_bits(epsilon: float) -> int:
    _check_eps(epsilon)
    return _ceil_log2(1.0 / epsilon)


def counting_bits(epsilon: float) -> int:
    _check_eps(epsilon)
    return _ceil_log2((math.pi + math.sqrt(3.0) * math.pi) / epsilon)


def training_qubits(m: int, epsilon: float) -> int:
    """Per-run training register count ``Q`` (shared by both algorithms)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    _check_eps(epsilon)
    return 3 + _ceil_log2(m + 1) + precision_bits(epsilon) + _ceil_log2(2.0 + 1.0 / (2.0 * epsilon)) + 1


def aeqsvm_qubits(m: int, epsilon: float) -> int:
    return training_qubits(m, epsilon) + counting_bits(epsilon)


def lsqsvm_qubits(m: int, epsilon: float, t_iterations: int) -> int:
    if t_iterations < 1:
        raise ValueError("T must be >= 1")
    return t_iterations * training_qubits(m, epsilon)


def swap_iterations(p: float, epsilon: float) -> int:
    """Swap-test repetitions to resolve a success probability ``p`` to ``epsilon``."""
    if not 0 < p < 1:
        raise ValueError(f"p must be in (0, 1), got {p}")
    _check_eps(epsilon)
    # Rounding to 9 decimals before the ceiling absorbs float noise and makes
    # p and 1 - p agree exactly.
    return math.ceil(round(p * (1.0 - p) / epsilon**2, 9))


def mean_swap_iterations(epsilon: float, probabilities=SWAP_TEST_PROBABILITIES) -> int:
    """Average repetition count over ``probabilities``, rounded up."""
    return math.ceil(round(float(np.mean([swap_iterations(p, epsilon) for p in probabilities])), 9))


def aeqsvm_complexity(m: int, n: int, kappa: float, epsilon: float) -> float:
    _check_eps(epsilon)
    return kappa**3 * epsilon**-3 * (math.log2(m * n) + 1.0)


def lsqsvm_complexity(m: int, n: int, kappa: float, epsilon: float) -> float:
    _check_eps(epsilon)
    return (kappa**3 * epsilon**-3 * math.log2(m * n) + math.log2(n)) / (12.0 * epsilon**2)


def expectation_constant() -> float:
    """``integral_0^1 P^2 (1 - P) dP`` by adaptive quadrature (analytically 1/12)."""
    value, _ = integrate.quad(lambda p: p * p * (1.0 - p), 0.0, 1.0, epsabs=1e-14, epsrel=1e-14)
    return value


# --- swap test -------------------------------------------------------------------


def swap_test_state(rho1: Statevector, rho2: Statevector) -> Statevector:
    """Run the swap test on ``|0>|rho1>|rho2>``; the ancilla is the top qubit."""
    if rho1.amplitudes.size != rho2.amplitudes.size:
        raise ValueError("swap test needs equal-size registers")
    w = rho1.num_qubits
    state = Statevector(np.kron([1.0, 0.0], np.kron(rho1.amplitudes, rho2.amplitudes)))
    anc = 2 * w
    state = apply_hadamard(state, anc)
    # controlled swap of the two w-qubit registers on ancilla = 1
    t = state.amplitudes.reshape(2, 2**w, 2**w).copy()
    t[1] = t[1].T
    state = apply_hadamard(state.with_amplitudes(t.reshape(-1)), anc)
    return state


def swap_test_probability(rho1: Statevector, rho2: Statevector) -> float:
    """Probability of reading ancilla ``|1>``: ``(1 - |<rho1|rho2>|^2) / 2``."""
    state = swap_test_state(rho1, rho2)
    return float(measurement_distribution(state, (2 * rho1.num_qubits, 1))[1])


@dataclass
class SwapTestReport:
    p: float
    epsilon: float
    trials: int
    target_fraction: float
    predicted_iterations: int
    coverage_at_prediction: float
    empirical_iterations: int | None
    curve: list[dict] = field(default_factory=list)

    def as_record(self) -> dict:
        return {
            "p": self.p,
            "epsilon": self.epsilon,
            "trials": self.trials,
            "target_fraction": self.target_fraction,
            "predicted_iterations": self.predicted_iterations,
            "coverage_at_prediction": self.coverage_at_prediction,
            "empirical_iterations": self.empirical_iterations,
            "curve": self.curve,
        }


def coverage(p: float, epsilon: float, samples: int, trials: int, rng: np.random.Generator) -> float:
    """Fraction of ``trials`` runs of ``samples`` Bernoulli(p) shots with ``|p_hat - p| <= eps``."""
    p_hat = rng.binomial(samples, p, size=trials) / samples
    return float(np.mean(np.abs(p_hat - p) <= epsilon + 1e-12))


def swap_test_baseline(
    p: float,
    epsilon: float,
    trials: int = 10_000,
    seed: int = 0,
    target_fraction: float = 0.6827,
    eps_grid=None,
) -> SwapTestReport:
    """Monte-Carlo swap-test statistics beside the ``P(1-P)/eps^2`` prediction.

    ``empirical_iterations`` is the smallest sample count on a geometric grid
    up to four times the prediction whose coverage reaches
    ``target_fraction``. ``curve`` holds predicted iterations over
    ``eps_grid`` for each of the standard probabilities.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    predicted = swap_iterations(p, epsilon)
    cov_pred = coverage(p, epsilon, predicted, trials, rng)
    grid = np.unique(np.round(np.geomspace(1, 4 * predicted, 120)).astype(int))
    empirical = None
    for n in grid:
        if coverage(p, epsilon, int(n), trials, rng) >= target_fraction:
            empirical = int(n)
            break
    return SwapTestReport(p, epsilon, trials, target_fraction, predicted, cov_pred, empirical, iteration_curve(eps_grid))


def iteration_curve(eps_grid=None, probabilities=SWAP_TEST_PROBABILITIES) -> list[dict]:
    """Predicted repetitions versus error, one row per ``(P, eps)``."""
    if eps_grid is None:
        eps_grid = [round(0.01 * i, 2) for i in range(1, 31)]
    return [{"p": p, "epsilon": e, "iterations": swap_iterations(p, e)} for p in probabilities for e in eps_grid]


# --- comparison tables --------------------------------------------------------------

BENCHMARK_DATASETS = (
    ("Tic tac toe", 958, 9),
    ("Haberman", 306, 3),
    ("Ionosphere", 351, 34),
    ("Heart statlog", 270, 13),
    ("Liver disorders", 345, 6),
    ("Bupa", 345, 6),
)
BENCHMARK_ACCURACIES = (0.70, 0.80, 0.90, 0.93, 0.95, 0.97, 0.99)
TABLE_NAMES = ("aeqsvm_qubits", "lsqsvm_qubits", "aeqsvm_complexity", "lsqsvm_complexity")


@dataclass
class ComparisonTable:
    """Formula values per (dataset, accuracy); accuracy is read as ``1 - eps``."""

    datasets: list[tuple[str, int, int, float]]
    accuracies: list[float]
    cells: list[dict]

    def grid(self, table: str) -> list[list[float]]:
        """Rows are datasets, columns accuracies, for one of ``TABLE_NAMES``."""
        by_key = {(c["dataset"], c["accuracy"]): c[table] for c in self.cells}
        return [[by_key[(d[0], acc)] for acc in self.accuracies] for d in self.datasets]

    def long_rows(self) -> list[dict]:
        rows = []
        for c in self.cells:
            for table in TABLE_NAMES:
                rows.append(
                    {
                        "table": table,
                        "dataset": c["dataset"],
                        "m": c["m"],
                        "n": c["n"],
                        "kappa": c["kappa"],
                        "accuracy": c["accuracy"],
                        "epsilon": c["epsilon"],
                        "value": c[table],
                        "formula": FORMULAS[table] + (f" with T = {c['t_iterations']}" if table == "lsqsvm_qubits" else ""),
                    }
                )
        return rows

    def to_json(self) -> dict:
        return {
            "datasets": [list(d) for d in self.datasets],
            "accuracies": list(self.accuracies),
            "tables": {t: self.grid(t) for t in TABLE_NAMES},
            "cells": self.long_rows(),
            "notes": [
                "accuracy a is read as eps = 1 - a",
                "LS-QSVM repetitions T are the mean swap-test count over P in (0.1, 0.3, 0.5)",
                "the AE-QSVM qubit count depends on eps through the precision and counting registers",
                "values are formula evaluations reported as-is",
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        rows = self.long_rows()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
        return buf.getvalue()


def emit_comparison_table(datasets, accuracies) -> ComparisonTable:
    """``datasets`` is a sequence of ``(name, m, n, kappa)``."""
    datasets = [(str(name), int(m), int(n), float(kappa)) for name, m, n, kappa in datasets]
    accuracies = [float(a) for a in accuracies]
    if not datasets or not accuracies:
        raise ValueError("need at least one dataset and one accuracy")
    cells = []
    for name, m, n, kappa in datasets:
        for acc in accuracies:
            eps = round(1.0 - acc, 12)
            t_iter = mean_swap_iterations(eps)
            cells.append(
                {
                    "dataset": name,
                    "m": m,
                    "n": n,
                    "kappa": kappa,
                    "accuracy": acc,
                    "epsilon": eps,
                    "t_iterations": t_iter,
                    "aeqsvm_qubits": aeqsvm_qubits(m, eps),
                    "lsqsvm_qubits": lsqsvm_qubits(m, eps, t_iter),
                    "aeqsvm_complexity": aeqsvm_complexity(m, n, kappa, eps),
                    "lsqsvm_complexity": lsqsvm_complexity(m, n, kappa, eps),
                }
            )
    return ComparisonTable(datasets, accuracies, cells)
