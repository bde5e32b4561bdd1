"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import time

import numpy as np
import pytest

from aeqsvm import qtrain, verify
from aeqsvm.cli import main
from aeqsvm.gqae import (
    GroverOperator,
    apply_q,
    apply_q_power,
    counting_distribution,
    eigenpair_check,
    estimated_amplitude,
    estimation_error_bound,
    split_good_bad,
)
from aeqsvm.problems import FLAG, problem_with_amplitude
from aeqsvm.qclassify import closed_form_inner, good_mass_after_a1
from aeqsvm.qsim import LinearOperator, Statevector, random_unitary
from aeqsvm.reference import textbook_qae_distribution
from aeqsvm.resources import (
    aeqsvm_complexity,
    aeqsvm_qubits,
    emit_comparison_table,
    expectation_constant,
    lsqsvm_complexity,
    lsqsvm_qubits,
    swap_iterations,
)

from conftest import acceptance_criterion

F1 = np.array([[5.0, -1.0, 3.0], [-1.0, 5.0, -3.0], [3.0, -3.0, 3.0]])


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def test_criterion_01_singular_spectrum():
    with acceptance_criterion(1, "F1 spectrum {0,4,9} and pseudoinverse parity"):
        def body():
            dec = qtrain.eigendecompose(F1)
            target = np.array([1.0, 1.0, 0.0])
            _, model = qtrain.pseudoinverse_solve(dec, target, qtrain.PrecisionParams())
            return dec, model.solution

        (dec, x), elapsed = timed(body)
        assert np.max(np.abs(np.sort(dec.eigenvalues) - [0.0, 4.0, 9.0])) <= 1e-9
        # independent pseudoinverses: LAPACK eigh with the zero eigenvalue dropped, and SVD
        w, v = np.linalg.eigh(F1)
        keep = np.abs(w) > 1e-10 * np.abs(w).max()
        by_eig = v[:, keep] @ np.diag(1 / w[keep]) @ v[:, keep].T @ [1.0, 1.0, 0.0]
        by_svd = np.linalg.pinv(F1) @ [1.0, 1.0, 0.0]
        assert np.max(np.abs(x - by_eig)) <= 1e-9
        assert np.max(np.abs(x - by_svd)) <= 1e-9
        assert elapsed < 1.0


def test_criterion_02_q_action():
    with acceptance_criterion(2, "Q action identities on 100 random problems"):
        def body():
            ops = verify.random_problems(100, np.random.default_rng(202), max_work_qubits=4)
            worst = 0.0
            for op in ops:
                good, bad, a = split_good_bad(op.psi, op.predicate)
                g, b = good.amplitudes, bad.amplitudes
                worst = max(worst, np.linalg.norm(apply_q(op, good).amplitudes - ((1 - 2 * a) * g - 2 * a * b)))
                worst = max(worst, np.linalg.norm(apply_q(op, bad).amplitudes - (2 * (1 - a) * g + (1 - 2 * a) * b)))
            return ops, worst

        (ops, worst), elapsed = timed(body)
        assert len(ops) == 100 and max(op.num_qubits for op in ops) <= 4
        assert worst <= 1e-10
        assert elapsed < 30


def test_criterion_03_eigenpairs():
    with acceptance_criterion(3, "eigenpairs and decomposition, 0.05 < a < 0.95"):
        def body():
            ops = verify.random_problems(100, np.random.default_rng(303), a_range=(0.05, 0.95))
            return ops, [eigenpair_check(op) for op in ops]

        (ops, reps), elapsed = timed(body)
        assert all(0.05 < op.good_mass < 0.95 for op in ops)
        assert all(r.status == "ok" for r in reps)
        assert max(r.max_residual for r in reps) <= 1e-10
        assert elapsed < 30


def test_criterion_04_amplification():
    with acceptance_criterion(4, "good mass after j steps equals sin^2((2j+1) theta)"):
        ops = verify.random_problems(20, np.random.default_rng(404))
        worst = 0.0
        for op in ops:
            theta = np.arcsin(np.sqrt(op.good_mass))
            for j in range(9):
                mass = split_good_bad(apply_q_power(op, op.psi, j), op.predicate)[2]
                worst = max(worst, abs(mass - np.sin((2 * j + 1) * theta) ** 2))
        assert worst <= 1e-9


def test_criterion_05_error_bound():
    with acceptance_criterion(5, "h=7 distribution mass within the error bound >= 8/pi^2"):
        def body():
            rng = np.random.default_rng(505)
            h = 7
            grid = np.array([estimated_amplitude(y, h) for y in range(2**h)])
            masses = []
            for _ in range(50):
                a = float(rng.uniform(0, 1))
                op = problem_with_amplitude(3, a, rng)
                assert op.good_mass == pytest.approx(a, abs=1e-12)
                dist = counting_distribution(op, h)
                masses.append(dist[np.abs(grid - a) <= estimation_error_bound(a, h)].sum())
            return masses

        masses, elapsed = timed(body)
        assert min(masses) >= 8 / np.pi**2, f"min mass {min(masses):.6f}"
        assert elapsed < 120


def test_criterion_06_inner_identity():
    with acceptance_criterion(6, "good mass after A1 equals (1 - <mu|x>)/2"):
        rng = np.random.default_rng(606)
        worst_mass = worst_closed = 0.0
        for _ in range(50):
            m, n = int(rng.integers(1, 8)), int(rng.integers(1, 5))
            x = rng.uniform(-1, 1, size=(m, n))
            model = verify._random_model(rng, m)
            q = rng.uniform(-1, 1, size=n)
            a, ip = good_mass_after_a1(model, x, q)
            worst_mass = max(worst_mass, abs(a - 0.5 * (1 - ip)))
            worst_closed = max(worst_closed, abs(ip - closed_form_inner(model, x, q)))
        assert worst_mass <= 1e-12
        assert worst_closed <= 1e-12


def test_criterion_07_parity():
    with acceptance_criterion(7, "quantum label equals classical label on retained queries"):
        (retained, agree, skipped), elapsed = timed(
            lambda: verify.parity_runs(np.random.default_rng(707), datasets=20, h=10, gamma=1.0)
        )
        print(f"    retained={retained} agreed={agree} skipped={skipped}")
        assert retained > 0
        assert agree == retained
        assert elapsed < 300


def test_criterion_08_resources():
    with acceptance_criterion(8, "resource formula spot checks, 1/12 constant, swap-count laws"):
        assert aeqsvm_qubits(10, 0.3) == 17
        assert lsqsvm_qubits(10, 0.3, 10) == 120
        assert aeqsvm_complexity(2, 2, 2, 0.5) == pytest.approx(192, abs=1e-12)
        assert lsqsvm_complexity(2, 2, 2, 0.5) == pytest.approx(43, abs=1e-12)
        assert abs(expectation_constant() - 1 / 12) <= 1e-10
        assert swap_iterations(0.5, 0.1) == 25
        for p in (0.1, 0.2, 0.3, 0.4, 0.5):
            for eps in (0.1, 0.05, 0.02, 0.01):
                assert swap_iterations(p, eps) == swap_iterations(1 - p, eps)
                assert swap_iterations(p, eps / 2) == 4 * swap_iterations(p, eps)
        table = emit_comparison_table([("d", 100, 10, 1.0)], [0.7, 0.99])
        assert len(table.grid("aeqsvm_qubits")) == 1


def test_criterion_09_textbook_reduction():
    with acceptance_criterion(9, "all-zeros initial state reproduces textbook QAE"):
        rng = np.random.default_rng(909)
        worst = 0.0
        for _ in range(20):
            w = int(rng.integers(1, 5))
            u = random_unitary(2**w, rng)
            op = GroverOperator(LinearOperator.dense(u), Statevector(np.eye(2**w)[0]), FLAG)
            h = int(rng.integers(2, 6))
            worst = max(worst, np.max(np.abs(counting_distribution(op, h) - textbook_qae_distribution(u, h))))
        assert worst <= 1e-10


def test_criterion_10_determinism(tmp_path):
    with acceptance_criterion(10, "verify and classify reports are byte-identical across runs"):
        data = tmp_path / "toy.csv"
        data.write_text("label,x1,x2\n1,1.0,0.2\n1,0.8,-0.1\n-1,-1.0,0.1\n-1,-0.7,-0.3\n")
        model = tmp_path / "model.json"
        assert main(["train", "--data", str(data), "--out", str(model)]) == 0
        outputs = []
        for run in range(2):
            v = tmp_path / f"verify{run}.json"
            c = tmp_path / f"classify{run}.json"
            assert main(["verify", "--scope", "all", "--seed", "3", "--out", str(v)]) == 0
            assert main(
                ["classify", "--model", str(model), "--query", str(data), "--mode", "sample", "--seed", "3", "--out", str(c)]
            ) == 0
            outputs.append((v.read_bytes(), c.read_bytes()))
        assert outputs[0] == outputs[1]
