import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aeqsvm.errors import ZeroOperatorError
from aeqsvm.qtrain import (
    PrecisionParams,
    SpectralDecomposition,
    condition_number,
    eigendecompose,
    jacobi_eigh,
    moore_penrose_reference,
    pseudoinverse_solve,
    quantize_eigenvalues,
    retained_mask,
    train,
)
from aeqsvm.svm import TrainingSet, build_kernel, build_system, solve_exact

F1 = np.array([[5.0, -1.0, 3.0], [-1.0, 5.0, -3.0], [3.0, -3.0, 3.0]])


def random_symmetric(seed, n):
    a = np.random.default_rng(seed).standard_normal((n, n))
    return a + a.T


def test_f1_spectrum():
    d = eigendecompose(F1)
    assert np.allclose(d.eigenvalues, [9, 4, 0], atol=1e-9)
    # eigenvectors by hand: (-1, 1, -1)/sqrt3, (1, 1, 0)/sqrt2, (1, -1, -2)/sqrt6
    expected = [np.array([-1, 1, -1]) / np.sqrt(3), np.array([1, 1, 0]) / np.sqrt(2), np.array([1, -1, -2]) / np.sqrt(6)]
    for i, e in enumerate(expected):
        assert abs(abs(d.eigenvectors[:, i] @ e) - 1) < 1e-10


def test_trivial_spectra():
    assert np.allclose(eigendecompose(np.eye(4)).eigenvalues, 1)
    d = eigendecompose(np.diag([2.0, 5.0]))
    assert np.allclose(d.eigenvalues, [5, 2])
    assert np.allclose(np.abs(d.eigenvectors), [[0, 1], [1, 0]])


def test_rejects_non_symmetric():
    with pytest.raises(ValueError, match="symmetric"):
        eigendecompose([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        eigendecompose(np.ones((2, 3)))


@given(st.integers(0, 2**32 - 1), st.integers(1, 12))
@settings(max_examples=40)
def test_decomposition_invariants(seed, n):
    f = random_symmetric(seed, n)
    d = eigendecompose(f)
    v = d.eigenvectors
    assert np.allclose(v.T @ v, np.eye(n), atol=1e-10)
    assert np.linalg.norm(d.reconstruct() - f) <= 1e-8 * np.linalg.norm(f)
    for i in range(n):
        assert np.linalg.norm(f @ v[:, i] - d.eigenvalues[i] * v[:, i]) <= 1e-9 * np.linalg.norm(f)
    assert np.all(np.diff(np.abs(d.eigenvalues)) <= 1e-12)


@pytest.mark.parametrize("n", [2, 5, 17, 40])
def test_jacobi_matches_lapack(n):
    f = random_symmetric(n, n)
    w, _ = jacobi_eigh(f)
    assert np.allclose(np.sort(w), np.linalg.eigvalsh(f), atol=1e-10)


def test_large_matrix_uses_lapack_and_agrees():
    f = random_symmetric(1, 70)
    d = eigendecompose(f)
    assert np.linalg.norm(d.reconstruct() - f) <= 1e-8 * np.linalg.norm(f)


def test_quantize_examples():
    d = SpectralDecomposition(np.array([1.0, 0.3, 0.0]), np.eye(3), 1.0)
    q = quantize_eigenvalues(d, PrecisionParams(k=2))
    assert np.allclose(q.eigenvalues, [1.0, 0.25, 0.0])
    assert np.array_equal(q.eigenvectors, d.eigenvectors)
    full = quantize_eigenvalues(eigendecompose(F1), PrecisionParams(k=52))
    assert np.allclose(full.eigenvalues, [9, 4, 0], atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(1, 30))
@settings(max_examples=40)
def test_quantization_error_bound(seed, k):
    d = eigendecompose(random_symmetric(seed, 6))
    q = quantize_eigenvalues(d, PrecisionParams(k=k))
    assert np.all(np.abs(q.normalized - d.normalized) <= 2.0 ** (-k - 1) + 1e-15)


def test_params_validation():
    for kw in ({"k": 0}, {"k": 53}, {"kappa_cap": 0.5}, {"epsilon": 1.0}):
        with pytest.raises(ValueError):
            PrecisionParams(**kw)


def test_f1_pseudoinverse():
    amps, model = pseudoinverse_solve(eigendecompose(F1), [1, 1, 0], PrecisionParams())
    # (1,1,0) lies on the lambda = 4 eigenvector, so x = (1,1,0)/4
    assert np.allclose(model.solution, [0.25, 0.25, 0.0], atol=1e-9)
    assert np.allclose(model.solution, moore_penrose_reference(F1) @ [1, 1, 0], atol=1e-9)
    assert np.allclose(amps, [1 / np.sqrt(2), 1 / np.sqrt(2), 0], atol=1e-9)


def test_target_in_null_space_is_zero_operator():
    with pytest.raises(ZeroOperatorError, match="numerically zero operator"):
        pseudoinverse_solve(eigendecompose(F1), [1, -1, -2], PrecisionParams())


def test_target_length_mismatch():
    with pytest.raises(ValueError):
        pseudoinverse_solve(eigendecompose(F1), [1, 1], PrecisionParams())


@pytest.mark.parametrize("seed", range(10))
def test_parity_with_exact_solve(seed):
    r = np.random.default_rng(seed)
    x = r.standard_normal((8, 3))
    ts = TrainingSet(x, np.where(np.arange(8) % 2, 1.0, -1.0))
    sys = build_system(build_kernel(ts), ts.labels, 1.5)
    exact = solve_exact(sys, ts.labels).solution
    amps, model = pseudoinverse_solve(eigendecompose(sys.f_matrix), ts.target(), PrecisionParams())
    assert np.allclose(amps, exact / np.linalg.norm(exact), atol=1e-8)
    assert np.allclose(model.solution, exact, atol=1e-8)


@pytest.mark.parametrize(
    "diag, expected", [([1.0, 1.0], 1.0), ([9.0, 4.0, 0.0], 2.25), ([10.0, 1.0], 10.0)]
)
def test_condition_number(diag, expected):
    assert condition_number(eigendecompose(np.diag(diag)), 1e-10) == pytest.approx(expected)


def test_condition_number_zero_matrix():
    with pytest.raises(ValueError):
        condition_number(eigendecompose(np.zeros((2, 2))))


@given(st.integers(0, 2**32 - 1), st.floats(1, 1e6), st.floats(1, 1e6))
@settings(max_examples=40)
def test_kappa_monotonicity(seed, c1, c2):
    w = eigendecompose(random_symmetric(seed, 8)).eigenvalues
    lo, hi = sorted((c1, c2))
    assert retained_mask(w, lo).sum() <= retained_mask(w, hi).sum()


def test_small_kappa_cap_drops_eigenvalues():
    d = SpectralDecomposition(np.array([10.0, 1.0]), np.eye(2), 10.0)
    amps, model = pseudoinverse_solve(d, [1.0, 1.0], PrecisionParams(kappa_cap=5))
    assert np.allclose(model.solution, [0.1, 0.0])


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_retained_subspace_residual(seed):
    r = np.random.default_rng(seed)
    x = r.standard_normal((6, 2))
    x[1] = x[0]  # duplicate point
    ts = TrainingSet(x, [1, 1, -1, 1, -1, -1])
    res = train(ts, gamma=1.0, params=PrecisionParams(kappa_cap=1e3))
    assert res.projected_residual <= 1e-8
    assert abs(np.linalg.norm(res.amplitudes) - 1) < 1e-12
