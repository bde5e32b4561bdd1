import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aeqsvm.errors import QubitBudgetError
from aeqsvm.gqae import estimation_error_bound, split_good_bad
from aeqsvm.qclassify import (
    apply_a1,
    boundary_resolution,
    build_circuit,
    build_mu_tilde,
    build_phi0,
    build_x_tilde,
    classify_quantum,
    closed_form_inner,
    good_mass_after_a1,
    register_widths,
)
from aeqsvm.qsim import inner_product, measurement_distribution
from aeqsvm.svm import SvmModel, TrainingSet, build_kernel, build_system, classify_classical, solve_exact


def model_of(b, alpha):
    alpha = np.asarray(alpha, dtype=float)
    return SvmModel(float(b), alpha, float(b * b + alpha @ alpha))


def random_case(seed, m=4, n=3):
    r = np.random.default_rng(seed)
    x = r.standard_normal((m, n))
    return model_of(r.standard_normal(), r.standard_normal(m)), x, r.standard_normal(n)


@pytest.mark.parametrize("m, n, expected", [(1, 1, (1, 1)), (3, 2, (2, 1)), (4, 3, (3, 2)), (7, 8, (3, 3)), (8, 9, (4, 4))])
def test_register_widths(m, n, expected):
    assert register_widths(m, n) == expected


def test_mu_tilde_examples():
    x = np.array([[0.0, 1.0]])
    mu, n_mu = build_mu_tilde(model_of(1.0, [0.0]), x)
    assert np.allclose(mu.amplitudes, np.eye(4)[0])
    assert n_mu == 1.0
    mu, _ = build_mu_tilde(model_of(0.0, [1.0]), x)
    assert np.allclose(mu.amplitudes, np.eye(4)[3])  # index 1, feature |1>
    with pytest.raises(ValueError):
        build_mu_tilde(model_of(0.0, [0.0]), x)
    with pytest.raises(ValueError):
        build_mu_tilde(model_of(0.0, [1.0, 1.0]), x)


def test_x_tilde_examples():
    xt, n_z = build_x_tilde([1.0, 0.0], 1)
    assert n_z == 2.0
    assert np.allclose(xt.amplitudes, [1 / np.sqrt(2), 0, 1 / np.sqrt(2), 0])
    with pytest.raises(ValueError):
        build_x_tilde([0.0, 0.0], 2)


@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 5))
@settings(max_examples=40)
def test_oracle_states_unit_norm_and_closed_form(seed, m, n):
    model, x, q = random_case(seed, m, n)
    mu, _ = build_mu_tilde(model, x)
    xt, _ = build_x_tilde(q, m)
    assert abs(mu.norm - 1) < 1e-10 and abs(xt.norm - 1) < 1e-10
    ip = inner_product(mu, xt)
    assert abs(ip.imag) < 1e-12
    assert ip.real == pytest.approx(closed_form_inner(model, x, q), abs=1e-12)


def test_zero_training_vector_branch_vanishes():
    x = np.array([[0.0, 0.0], [1.0, 0.0]])
    mu, n_mu = build_mu_tilde(model_of(0.5, [3.0, 1.0]), x)
    assert n_mu == pytest.approx(1.25)
    assert abs(mu.norm - 1) < 1e-12


def test_phi0_construction():
    model, x, q = random_case(1)
    mu, _ = build_mu_tilde(model, x)
    xt, _ = build_x_tilde(q, 4)
    circ = build_phi0(mu, xt)
    amps = circ.phi0.amplitudes.reshape(2, -1, 2)
    assert abs(circ.phi0.norm - 1) < 1e-12
    assert np.allclose(amps[0, :, 0], mu.amplitudes / np.sqrt(2))
    assert np.allclose(amps[1, :, 0], -xt.amplitudes / np.sqrt(2))
    assert np.allclose(amps[:, :, 1], 0)
    assert np.allclose(measurement_distribution(circ.phi0, "ancilla"), [0.5, 0.5])
    same = build_phi0(mu, mu).phi0.amplitudes.reshape(2, -1, 2)
    assert np.allclose(same[0], -same[1])
    with pytest.raises(ValueError):
        build_phi0(mu, build_x_tilde([1.0], 4)[0])


def test_a1_branches_and_unitarity():
    model, x, q = random_case(2)
    circ, states = build_circuit(model, x, q)
    out = apply_a1(circ).amplitudes.reshape(2, -1, 2)
    mu, xt = states.mu_tilde.amplitudes, states.x_tilde.amplitudes
    assert np.allclose(out[0, :, 1], 0.5 * (mu - xt), atol=1e-12)
    assert np.allclose(out[1, :, 1], 0, atol=1e-12)
    assert np.allclose(out[1, :, 0], 0.5 * (mu + xt), atol=1e-12)
    back = circ.a1_op.apply_inverse(apply_a1(circ))
    assert np.allclose(back.amplitudes, circ.phi0.amplitudes, atol=1e-12)


def test_good_mass_special_cases():
    model, x, _ = random_case(3)
    mu, _ = build_mu_tilde(model, x)
    r = np.random.default_rng(0)
    v = r.standard_normal(mu.amplitudes.size)
    v -= (mu.amplitudes.real @ v) * mu.amplitudes.real
    ortho = mu.with_amplitudes(v / np.linalg.norm(v))
    neg = mu.with_amplitudes(-mu.amplitudes)
    for other, a in [(mu, 0.0), (ortho, 0.5), (neg, 1.0)]:
        circ = build_phi0(mu, other)
        assert split_good_bad(apply_a1(circ), circ.predicate)[2] == pytest.approx(a, abs=1e-12)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40)
def test_good_mass_identity(seed):
    model, x, q = random_case(seed)
    a, ip = good_mass_after_a1(model, x, q)
    assert a == pytest.approx(0.5 * (1 - ip), abs=1e-12)


def test_end_to_end_parity_two_points():
    ts = TrainingSet([[-1.0], [1.0]], [-1, 1])
    model = solve_exact(build_system(build_kernel(ts), ts.labels, 1.0), ts.labels)
    for point, label in zip(ts.vectors, ts.labels):
        res = classify_quantum(model, ts, point, 10)
        assert res.label == label == classify_classical(model, ts, point).label
        assert not res.boundary


def test_boundary_flag_on_zero_margin():
    x = np.array([[1.0, 0.0], [0.0, 1.0]])
    res = classify_quantum(model_of(0.0, [1.0, -1.0]), x, [1.0, 1.0], 8)
    assert res.exact_inner == pytest.approx(0.0, abs=1e-15)
    assert res.boundary
    assert res.y == 2**8 // 4 and res.inner_estimate == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_estimate_within_propagated_bound(seed):
    model, x, q = random_case(seed)
    h = 8
    res = classify_quantum(model, x, q, h)
    a = 0.5 * (1 - res.exact_inner)
    assert abs(res.inner_estimate - res.exact_inner) <= 2 * estimation_error_bound(a, h)
    assert -1 <= res.inner_estimate <= 1


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=15, deadline=None)
def test_sign_antisymmetry(seed):
    model, x, q = random_case(seed)
    pos = classify_quantum(model, x, q, 7)
    neg = classify_quantum(model.negated(), x, q, 7)
    assert neg.exact_inner == -pos.exact_inner
    if not pos.boundary:
        assert neg.label == -pos.label


def test_label_follows_sign_of_inner():
    model, x, q = random_case(5)
    res = classify_quantum(model, x, q, 9)
    if not res.boundary:
        assert res.label == (1 if res.a_hat < 0.5 else -1)
        assert res.label == classify_classical(model, TrainingSet(x, np.ones(4)), q).label


def test_modes():
    model, x, q = random_case(6)
    full = classify_quantum(model, x, q, 6, mode="full-distribution")
    assert full.distribution.shape == (64,) and full.distribution.sum() == pytest.approx(1)
    s1 = classify_quantum(model, x, q, 6, mode="sample", seed=3)
    s2 = classify_quantum(model, x, q, 6, mode="sample", seed=3)
    assert s1.y == s2.y
    assert classify_quantum(model, x, q, 6, exact=False).exact_inner is None


def test_boundary_resolution():
    assert boundary_resolution(10) == 2.0**-8


def test_qubit_budget():
    r = np.random.default_rng(0)
    x = r.standard_normal((100, 64))
    with pytest.raises(QubitBudgetError):
        classify_quantum(model_of(0.1, r.standard_normal(100)), x, r.standard_normal(64), 12)
