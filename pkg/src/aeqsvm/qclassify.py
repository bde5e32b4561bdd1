"""Classification by amplitude estimation of an inner product.

Register layout of the classifier state (little-endian, low qubit first)::

    qubit 0                      flag        (good state <=> flag = 1)
    qubits 1 .. nf               feature     (ceil(log2 n) qubits, >= 1)
    qubits nf+1 .. nf+ni         index       (ceil(log2(m+1)) qubits, >= 1)
    qubit nf+ni+1                ancilla

The training oracle ``|mu>`` and query state ``|x>`` live on (index, feature).
With ``|phi0> = (|0>|mu> - |1>|x>)|0> / sqrt(2)``, a Hadamard on the ancilla
followed by an X on the flag controlled by ancilla = 0 leaves good-state mass
``(1 - <mu|x>) / 2``, which amplitude estimation recovers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QubitBudgetError
from .gqae import AEOutcome, GoodStatePredicate, GroverOperator, estimate_amplitude, split_good_bad
from .qsim import MAX_QUBITS, LinearOperator, RegisterMap, Statevector, inner_product
from .svm import SvmModel

FLAG = GoodStatePredicate(flag_qubit=0, good_value=1)
_IMAG_ATOL = 1e-12


def _ceil_log2(x: int) -> int:
    return max(1, int(x - 1).bit_length())


def register_widths(m: int, n: int) -> tuple[int, int]:
    """``(index_qubits, feature_qubits)`` for ``m`` training points of ``n`` features."""
    return _ceil_log2(m + 1), _ceil_log2(n)


def _vectors(ts) -> np.ndarray:
    x = np.asarray(getattr(ts, "vectors", ts), dtype=float)
    if x.ndim != 2:
        raise ValueError("training vectors must be 2-D")
    return x


def _embed(vec: np.ndarray, nf: int) -> tuple[float, np.ndarray]:
    """Split ``vec`` into its length and a zero-padded unit direction."""
    out = np.zeros(2**nf)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        out[0] = 1.0
    else:
        out[: vec.size] = vec / norm
    return norm, out


@dataclass(frozen=True, eq=False)
class OracleStates:
    mu_tilde: Statevector
    x_tilde: Statevector
    n_mu: float
    n_z: float


def build_mu_tilde(model: SvmModel, ts) -> tuple[Statevector, float]:
    """Training-data oracle ``(b|0>|0> + sum_k alpha_k |x_k| |k>|x_k>) / sqrt(N_mu)``.

    ``ts`` is a :class:`~aeqsvm.svm.TrainingSet` or an ``m x n`` array.
    """
    x = _vectors(ts)
    m, n = x.shape
    if model.alpha.size != m:
        raise ValueError(f"model has {model.alpha.size} multipliers for {m} training vectors")
    ni, nf = register_widths(m, n)
    amps = np.zeros((2**ni, 2**nf))
    amps[0, 0] = model.b
    for k in range(m):
        length, direction = _embed(x[k], nf)
        amps[k + 1] = model.alpha[k] * length * direction
    n_mu = float(model.b**2 + np.sum(model.alpha**2 * np.sum(x * x, axis=1)))
    if n_mu == 0.0:
        raise ValueError("training oracle has zero normalization")
    regs = RegisterMap({"feature": (0, nf), "index": (nf, ni)})
    return Statevector(amps.reshape(-1) / np.sqrt(n_mu), regs), n_mu


def build_x_tilde(query, m: int) -> tuple[Statevector, float]:
    """Query state ``(|0>|0> + sum_k |x| |k>|x>) / sqrt(m|x|^2 + 1)``."""
    q = np.asarray(query, dtype=float).reshape(-1)
    length, direction = _embed(q, _ceil_log2(q.size))
    if length == 0.0:
        raise ValueError("query vector must be nonzero")
    ni, nf = register_widths(m, q.size)
    amps = np.zeros((2**ni, 2**nf))
    amps[0, 0] = 1.0
    amps[1 : m + 1] = length * direction
    n_z = m * length**2 + 1.0
    regs = RegisterMap({"feature": (0, nf), "index": (nf, ni)})
    return Statevector(amps.reshape(-1) / np.sqrt(n_z), regs), n_z


def build_oracle_states(model: SvmModel, ts, query) -> OracleStates:
    mu, n_mu = build_mu_tilde(model, ts)
    x, n_z = build_x_tilde(query, _vectors(ts).shape[0])
    if x.num_qubits != mu.num_qubits:
        raise ValueError("query and training vectors have different feature counts")
    return OracleStates(mu, x, n_mu, n_z)


def closed_form_inner(model: SvmModel, ts, query) -> float:
    """``(b + sum_k alpha_k |x_k||x| <x_k^|x^>) / sqrt(N_mu N_z)`` evaluated directly."""
    x = _vectors(ts)
    q = np.asarray(query, dtype=float).reshape(-1)
    m = x.shape[0]
    lengths = np.linalg.norm(x, axis=1)
    qlen = np.linalg.norm(q)
    cos = np.divide(x @ q, lengths * qlen, out=np.zeros(m), where=lengths > 0)
    n_mu = model.b**2 + np.sum(model.alpha**2 * lengths**2)
    n_z = m * qlen**2 + 1.0
    return float((model.b + np.sum(model.alpha * lengths * qlen * cos)) / np.sqrt(n_mu * n_z))


@dataclass(frozen=True, eq=False)
class ClassifierCircuit:
    phi0: Statevector
    a1_op: LinearOperator
    predicate: GoodStatePredicate

    def grover(self) -> GroverOperator:
        return GroverOperator(self.a1_op, self.phi0, self.predicate)


def build_phi0(mu: Statevector, x: Statevector) -> ClassifierCircuit:
    """``(|0>|mu> - |1>|x>)|0> / sqrt(2)`` plus the ancilla/flag operator."""
    if mu.amplitudes.size != x.amplitudes.size or mu.registers != x.registers:
        raise ValueError("training oracle and query state have different register shapes")
    inner_q = mu.num_qubits
    amps = np.zeros((2, 2**inner_q, 2), dtype=np.complex128)
    amps[0, :, 0] = mu.amplitudes / np.sqrt(2.0)
    amps[1, :, 0] = -x.amplitudes / np.sqrt(2.0)
    ancilla = inner_q + 1
    regs = mu.registers.shifted(1).merged(RegisterMap({"flag": (0, 1), "ancilla": (ancilla, 1)}))
    phi0 = Statevector(amps.reshape(-1), regs)
    a1 = LinearOperator.compose(
        LinearOperator.hadamard(ancilla),
        LinearOperator.controlled_x(ancilla, FLAG.flag_qubit, control_value=0),
    )
    return ClassifierCircuit(phi0, a1, FLAG)


def apply_a1(circ: ClassifierCircuit) -> Statevector:
    return circ.a1_op.apply(circ.phi0)


def build_circuit(model: SvmModel, ts, query) -> tuple[ClassifierCircuit, OracleStates]:
    states = build_oracle_states(model, ts, query)
    return build_phi0(states.mu_tilde, states.x_tilde), states


@dataclass(frozen=True, eq=False)
class ClassificationResult:
    a_hat: float
    inner_estimate: float
    label: int
    boundary: bool
    h: int
    y: int
    exact_inner: float | None = None
    distribution: np.ndarray | None = None

    def as_record(self) -> dict:
        rec = {
            "a_hat": self.a_hat,
            "inner_estimate": self.inner_estimate,
            "label": self.label,
            "boundary": self.boundary,
            "h": self.h,
            "y": self.y,
        }
        if self.exact_inner is not None:
            rec["exact_inner"] = self.exact_inner
        return rec


def boundary_resolution(h: int) -> float:
    return 2.0 ** (-h + 2)


def classify_quantum(
    model: SvmModel,
    ts,
    query,
    h: int,
    mode: str = "modal",
    seed: int | None = None,
    exact: bool = True,
) -> ClassificationResult:
    """Label ``query`` from an amplitude estimate of ``(1 - <mu|x>) / 2``.

    The label is ``sign(1 - 2 a_hat)`` (``+1`` on an exact zero); results within
    ``2**(2 - h)`` of zero carry ``boundary=True``.
    """
    circ, states = build_circuit(model, ts, query)
    total = circ.phi0.num_qubits + h
    if total > MAX_QUBITS:
        raise QubitBudgetError(f"classification needs {total} qubits, budget is {MAX_QUBITS}")
    outcome: AEOutcome = estimate_amplitude(circ.grover(), h, mode=mode, seed=seed)
    inner_est = 1.0 - 2.0 * outcome.a_hat
    exact_inner = None
    if exact:
        ip = inner_product(states.mu_tilde, states.x_tilde)
        if abs(ip.imag) > _IMAG_ATOL:
            raise ValueError(f"inner product has imaginary part {ip.imag:.3e}")
        exact_inner = ip.real
    return ClassificationResult(
        a_hat=outcome.a_hat,
        inner_estimate=inner_est,
        label=1 if inner_est >= 0 else -1,
        boundary=abs(inner_est) < boundary_resolution(h),
        h=h,
        y=outcome.y,
        exact_inner=exact_inner,
        distribution=outcome.distribution,
    )


def good_mass_after_a1(model: SvmModel, ts, query) -> tuple[float, float]:
    """``(good-state mass after A1, <mu|x>)`` computed by direct simulation."""
    circ, states = build_circuit(model, ts, query)
    a = split_good_bad(apply_a1(circ), circ.predicate)[2]
    return a, inner_product(states.mu_tilde, states.x_tilde).real
