"""Invariant suites run by ``aeqsvm verify`` and the acceptance tests.

Each check returns a :class:`CheckResult` carrying the worst residual seen, the
tolerance it was held to, and whether it passed. Everything is driven by an
explicit seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qtrain
from .gqae import (
    GroverOperator,
    apply_q,
    apply_q_power,
    counting_distribution,
    eigenpair_check,
    estimated_amplitude,
    estimation_error_bound,
    split_good_bad,
)
from .problems import FLAG, problem_with_amplitude, random_problem
from .qclassify import boundary_resolution, classify_quantum, closed_form_inner, good_mass_after_a1
from .qsim import LinearOperator, Statevector, random_unitary
from .reference import textbook_qae_distribution
from .svm import SvmModel, TrainingSet, build_kernel, build_system, classify_classical, solve_exact

SCOPES = ("gqae", "train", "classify", "all")
F1 = np.array([[5.0, -1.0, 3.0], [-1.0, 5.0, -3.0], [3.0, -3.0, 3.0]])


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_residual: float
    tolerance: float
    cases: int
    details: dict = field(default_factory=dict)

    def as_record(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "cases": self.cases,
            **({"details": self.details} if self.details else {}),
        }


def _result(name: str, residuals, tol: float, **details) -> CheckResult:
    residuals = [float(r) for r in residuals]
    worst = max(residuals) if residuals else 0.0
    ok = bool(residuals) and all(np.isfinite(r) and r <= tol for r in residuals)
    return CheckResult(name, ok, worst, tol, len(residuals), details)


def _corrupt(op: GroverOperator, corrupt: bool) -> GroverOperator:
    return GroverOperator(op.a_op, op.initial_state, op.predicate, sign=1.0) if corrupt else op


# --- amplitude estimation ------------------------------------------------------------


def random_problems(count: int, rng: np.random.Generator, max_work_qubits: int = 4, a_range=None):
    ops = []
    while len(ops) < count:
        w = int(rng.integers(1, max_work_qubits + 1))
        op = random_problem(w, rng)
        if a_range is not None and not a_range[0] < op.good_mass < a_range[1]:
            continue
        ops.append(op)
    return ops


def check_q_action(ops, corrupt_q_sign: bool = False) -> CheckResult:
    """``Q|Psi1> = (1-2a)|Psi1> - 2a|Psi0>`` and ``Q|Psi0> = 2(1-a)|Psi1> + (1-2a)|Psi0>``."""
    res = []
    for op in ops:
        op = _corrupt(op, corrupt_q_sign)
        good, bad, a = split_good_bad(op.psi, op.predicate)
        g, b = good.amplitudes, bad.amplitudes
        res.append(np.linalg.norm(apply_q(op, good).amplitudes - ((1 - 2 * a) * g - 2 * a * b)))
        res.append(np.linalg.norm(apply_q(op, bad).amplitudes - (2 * (1 - a) * g + (1 - 2 * a) * b)))
    return _result("q_action_identities", res, 1e-10)


def check_eigenpairs(ops, corrupt_q_sign: bool = False) -> CheckResult:
    res = []
    for op in ops:
        rep = eigenpair_check(_corrupt(op, corrupt_q_sign))
        if rep.status == "ok":
            res.append(rep.max_residual)
    return _result("q_eigenpairs_and_decomposition", res, 1e-10)


def check_amplification(ops, max_j: int = 8) -> CheckResult:
    res = []
    for op in ops:
        theta = np.arcsin(np.sqrt(op.good_mass))
        for j in range(max_j + 1):
            mass = split_good_bad(apply_q_power(op, op.psi, j), op.predicate)[2]
            res.append(abs(mass - np.sin((2 * j + 1) * theta) ** 2))
    return _result("amplification_closed_form", res, 1e-9)


def check_error_bound(rng: np.random.Generator, count: int = 50, h: int = 7, work_qubits: int = 3) -> CheckResult:
    """Mass within the estimation error bound must reach ``8/pi^2``."""
    floor = 8.0 / np.pi**2
    shortfalls, masses = [], []
    for _ in range(count):
        a = float(rng.uniform(0.0, 1.0))
        op = problem_with_amplitude(work_qubits, a, rng)
        dist = counting_distribution(op, h)
        a_hat = np.array([estimated_amplitude(y, h) for y in range(2**h)])
        mass = float(dist[np.abs(a_hat - a) <= estimation_error_bound(a, h) + 1e-12].sum())
        masses.append(mass)
        shortfalls.append(max(floor - mass, 0.0))
    return _result("error_bound_mass", shortfalls, 0.0, min_mass=min(masses), floor=floor, h=h)


def check_textbook_reduction(rng: np.random.Generator, count: int = 20, h: int = 4, max_work_qubits: int = 4) -> CheckResult:
    res = []
    for _ in range(count):
        w = int(rng.integers(1, max_work_qubits + 1))
        u = random_unitary(2**w, rng)
        zero = Statevector(np.eye(2**w)[0])
        op = GroverOperator(LinearOperator.dense(u), zero, FLAG)
        res.append(np.max(np.abs(counting_distribution(op, h) - textbook_qae_distribution(u, h))))
    return _result("textbook_qae_reduction", res, 1e-10)


def gqae_suite(seed: int, corrupt_q_sign: bool = False) -> list[CheckResult]:
    rng = np.random.default_rng([seed, 1])
    ops = random_problems(100, rng)
    mid = random_problems(100, rng, a_range=(0.05, 0.95))
    return [
        check_q_action(ops, corrupt_q_sign),
        check_eigenpairs(mid, corrupt_q_sign),
        check_amplification(ops[:20]),
        check_error_bound(rng),
        check_textbook_reduction(rng),
    ]


# --- training ------------------------------------------------------------------------


def check_singular_spectrum() -> list[CheckResult]:
    dec = qtrain.eigendecompose(F1)
    spectrum = np.sort(dec.eigenvalues)
    spec_res = np.max(np.abs(spectrum - [0.0, 4.0, 9.0]))
    target = np.array([1.0, 1.0, 0.0])
    params = qtrain.PrecisionParams(k=52, kappa_cap=1e8)
    amps, model = qtrain.pseudoinverse_solve(dec, target, params)
    ref = qtrain.moore_penrose_reference(F1) @ target
    pinv_res = np.max(np.abs(model.solution - ref))
    return [
        _result("singular_3x3_spectrum", [spec_res], 1e-9, eigenvalues=spectrum.tolist()),
        _result("singular_3x3_pseudoinverse", [pinv_res], 1e-9),
    ]


def random_training_set(rng: np.random.Generator, m: int, n: int, separable: bool = True) -> TrainingSet:
    """Labels from a random hyperplane; both classes always present."""
    while True:
        x = rng.uniform(-1.0, 1.0, size=(m, n))
        if not separable:
            y = rng.choice([-1.0, 1.0], size=m)
        else:
            w = rng.standard_normal(n)
            c = rng.uniform(-0.3, 0.3)
            score = x @ w + c
            if np.min(np.abs(score)) < 0.05:
                continue
            y = np.sign(score)
        if len(set(y)) == 2:
            return TrainingSet(x, y)


def check_solver_parity(rng: np.random.Generator, count: int = 50) -> CheckResult:
    res = []
    params = qtrain.PrecisionParams(k=52, kappa_cap=1e12)
    for _ in range(count):
        ts = random_training_set(rng, int(rng.integers(2, 9)), int(rng.integers(1, 5)), separable=False)
        sys = build_system(build_kernel(ts), ts.labels, float(rng.uniform(0.5, 5.0)))
        exact = solve_exact(sys, ts.labels).solution
        amps, _ = qtrain.pseudoinverse_solve(qtrain.eigendecompose(sys.f_matrix), ts.target(), params)
        res.append(np.max(np.abs(amps - exact / np.linalg.norm(exact))))
    return _result("pseudoinverse_matches_exact_solve", res, 1e-8)


def train_suite(seed: int) -> list[CheckResult]:
    rng = np.random.default_rng([seed, 2])
    return [*check_singular_spectrum(), check_solver_parity(rng)]


# --- classification -----------------------------------------------------------------


def _random_model(rng: np.random.Generator, m: int) -> SvmModel:
    b, alpha = float(rng.standard_normal()), rng.standard_normal(m)
    return SvmModel(b, alpha, b * b + float(alpha @ alpha))


def check_inner_identity(rng: np.random.Generator, count: int = 50) -> list[CheckResult]:
    mass_res, closed_res = [], []
    for _ in range(count):
        m, n = int(rng.integers(1, 8)), int(rng.integers(1, 5))
        x = rng.uniform(-1.0, 1.0, size=(m, n))
        model = _random_model(rng, m)
        query = rng.uniform(-1.0, 1.0, size=n)
        a, ip = good_mass_after_a1(model, x, query)
        mass_res.append(abs(a - 0.5 * (1.0 - ip)))
        closed_res.append(abs(ip - closed_form_inner(model, x, query)))
    return [
        _result("good_mass_equals_half_one_minus_inner", mass_res, 1e-12),
        _result("inner_product_closed_form", closed_res, 1e-12),
    ]


def parity_runs(rng: np.random.Generator, datasets: int = 20, queries: int = 6, h: int = 10, gamma: float = 1.0):
    """Quantum (modal) versus classical labels on random separable data.

    Returns ``(retained, agreements, skipped)`` where queries with
    ``|exact_inner| < 2**(2-h)`` are skipped.
    """
    retained = agree = skipped = 0
    for _ in range(datasets):
        m = int(rng.integers(2, 8))
        n = int(rng.choice([2, 4]))
        ts = random_training_set(rng, m, n)
        result = qtrain.train(ts, gamma)
        exact_model = solve_exact(result.system, ts.labels)
        pts = np.vstack([ts.vectors, rng.uniform(-1.0, 1.0, size=(queries, n))])
        for q in pts:
            if np.linalg.norm(q) == 0.0:
                continue
            out = classify_quantum(result.model, ts, q, h, mode="modal")
            if abs(out.exact_inner) < boundary_resolution(h):
                skipped += 1
                continue
            retained += 1
            agree += int(out.label == classify_classical(exact_model, ts, q).label)
    return retained, agree, skipped


def check_parity(rng: np.random.Generator, datasets: int = 20, h: int = 10) -> CheckResult:
    retained, agree, skipped = parity_runs(rng, datasets, h=h)
    mismatch = 1.0 - agree / retained if retained else 1.0
    return _result("quantum_classical_label_parity", [mismatch], 0.0, retained=retained, agreed=agree, skipped=skipped)


def classify_suite(seed: int) -> list[CheckResult]:
    rng = np.random.default_rng([seed, 3])
    return [*check_inner_identity(rng), check_parity(rng)]


def run(scope: str = "all", seed: int = 0, corrupt_q_sign: bool = False) -> list[CheckResult]:
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}")
    out = []
    if scope in ("gqae", "all"):
        out += gqae_suite(seed, corrupt_q_sign)
    if scope in ("train", "all"):
        out += train_suite(seed)
    if scope in ("classify", "all"):
        out += classify_suite(seed)
    return out
