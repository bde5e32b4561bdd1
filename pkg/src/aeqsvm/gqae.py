"""Amplitude estimation for an arbitrary initial state.

Given a unitary ``A`` and an initial state ``|Phi>``, write
``A|Phi> = |Psi1> + |Psi0>`` where ``|Psi1>`` collects the basis states whose
flag qubit is "good". The Grover-like operator

    Q = -A S_Phi A^-1 S_chi,   S_Phi = I - 2|Phi><Phi|,

with ``S_chi`` the sign flip on good basis states, rotates
``span{Psi1, Psi0}`` by ``2*theta`` where ``sin(theta)**2 = a = <Psi1|Psi1>``.
Phase estimation of ``Q`` on ``A|Phi>`` then yields ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import QubitBudgetError
from .qsim import (
    MAX_QUBITS,
    LinearOperator,
    RegisterMap,
    Statevector,
    _bit_mask,
    _flip_sign,
    apply_controlled_power,
    apply_hadamard,
    basis_state,
    inverse_qft,
    measurement_distribution,
    sample_outcome,
    tensor,
)

MAX_COUNTING_QUBITS = 12
MODES = ("sample", "modal", "full-distribution")
_TIE_ATOL = 1e-12


@dataclass(frozen=True)
class GoodStatePredicate:
    flag_qubit: int
    good_value: int = 1

    def mask(self, num_qubits: int) -> np.ndarray:
        if not 0 <= self.flag_qubit < num_qubits:
            raise IndexError(f"flag qubit {self.flag_qubit} out of range for {num_qubits} qubits")
        return _bit_mask(num_qubits, self.flag_qubit, self.good_value)


def split_good_bad(state: Statevector, predicate: GoodStatePredicate) -> tuple[Statevector, Statevector, float]:
    """Split ``state`` into unnormalized good and bad components.

    Returns ``(good, bad, a)`` with ``good + bad == state`` and
    ``a = <good|good>``.
    """
    mask = predicate.mask(state.num_qubits)
    amps = state.amplitudes
    good = np.where(mask, amps, 0.0)
    bad = np.where(mask, 0.0, amps)
    a = float(np.vdot(good, good).real)
    return state.with_amplitudes(good), state.with_amplitudes(bad), min(max(a, 0.0), 1.0)


@dataclass(frozen=True, eq=False)
class GroverOperator:
    """``Q = sign * A S_Phi A^-1 S_chi`` for a problem ``(A, |Phi>, predicate)``.

    ``sign`` is -1 for the amplification operator; other values exist only so
    negative-control checks can corrupt the operator on purpose.
    """

    a_op: LinearOperator
    initial_state: Statevector
    predicate: GoodStatePredicate
    sign: float = -1.0

    def __post_init__(self):
        n = self.initial_state.num_qubits
        if self.a_op.support and max(self.a_op.support) >= n:
            raise ValueError("state-preparation operator acts outside the initial state's qubits")
        self.predicate.mask(n)

    @property
    def num_qubits(self) -> int:
        return self.initial_state.num_qubits

    @cached_property
    def psi(self) -> Statevector:
        """``A|Phi>``."""
        return self.a_op.apply(self.initial_state)

    @cached_property
    def good_mass(self) -> float:
        return split_good_bad(self.psi, self.predicate)[2]

    def _reflect_initial(self, amps: np.ndarray) -> np.ndarray:
        # I - 2|Phi><Phi| on the low (work) qubits, identity on anything above.
        phi = self.initial_state.amplitudes
        t = amps.reshape(-1, phi.size)
        return (t - 2.0 * np.outer(t @ phi.conj(), phi)).reshape(-1)

    def _forward(self, amps: np.ndarray, n: int) -> np.ndarray:
        p = self.predicate
        v = _flip_sign(amps, n, p.flag_qubit, p.good_value)
        v = self.a_op.apply_inverse_array(v, n)
        v = self._reflect_initial(v)
        v = self.a_op.apply_array(v, n)
        return self.sign * v

    def _inverse(self, amps: np.ndarray, n: int) -> np.ndarray:
        p = self.predicate
        v = self.a_op.apply_inverse_array(amps, n)
        v = self._reflect_initial(v)
        v = self.a_op.apply_array(v, n)
        v = _flip_sign(v, n, p.flag_qubit, p.good_value)
        return v / self.sign

    def as_operator(self) -> LinearOperator:
        """``Q`` as a :class:`LinearOperator` on the low ``num_qubits`` qubits."""
        return LinearOperator(self._forward, self._inverse, range(self.num_qubits), "Q")


def _check_dims(op: GroverOperator, state: Statevector):
    if state.num_qubits != op.num_qubits:
        raise ValueError(f"state has {state.num_qubits} qubits, operator expects {op.num_qubits}")


def apply_q(op: GroverOperator, state: Statevector) -> Statevector:
    _check_dims(op, state)
    return state.with_amplitudes(op._forward(state.amplitudes, op.num_qubits))


def apply_q_power(op: GroverOperator, state: Statevector, j: int) -> Statevector:
    if j < 0:
        raise ValueError("j must be nonnegative")
    _check_dims(op, state)
    v = state.amplitudes
    for _ in range(j):
        v = op._forward(v, op.num_qubits)
    return state.with_amplitudes(v)


@dataclass(frozen=True)
class EigenpairReport:
    status: str  # "ok" or "degenerate"
    a: float
    theta: float
    eigenphase: float | None = None
    residual_plus: float | None = None
    residual_minus: float | None = None
    decomposition_residual: float | None = None

    @property
    def max_residual(self) -> float | None:
        if self.status != "ok":
            return None
        return max(self.residual_plus, self.residual_minus, self.decomposition_residual)


def eigenpair_check(op: GroverOperator, degenerate_tol: float = 1e-12) -> EigenpairReport:
    """Check ``Q|Psi+-> = exp(+-2i theta)|Psi+->`` and the decomposition of ``A|Phi>``.

    ``|Psi+-> = (|Psi1>/sqrt(a) +- i|Psi0>/sqrt(1-a)) / sqrt(2)`` and
    ``A|Phi> = (-i/sqrt(2)) (e^{i theta}|Psi+> - e^{-i theta}|Psi->)``.
    """
    good, bad, a = split_good_bad(op.psi, op.predicate)
    theta = float(np.arcsin(np.sqrt(a)))
    if a < degenerate_tol or a > 1.0 - degenerate_tol:
        return EigenpairReport("degenerate", a, theta)
    g = good.amplitudes / np.sqrt(a)
    b = bad.amplitudes / np.sqrt(1.0 - a)
    plus = (g + 1j * b) / np.sqrt(2.0)
    minus = (g - 1j * b) / np.sqrt(2.0)
    n = op.num_qubits
    res_p = np.linalg.norm(op._forward(plus, n) - np.exp(2j * theta) * plus)
    res_m = np.linalg.norm(op._forward(minus, n) - np.exp(-2j * theta) * minus)
    recon = (-1j / np.sqrt(2.0)) * (np.exp(1j * theta) * plus - np.exp(-1j * theta) * minus)
    res_d = np.linalg.norm(recon - op.psi.amplitudes)
    return EigenpairReport("ok", a, theta, 2.0 * theta, float(res_p), float(res_m), float(res_d))


@dataclass(frozen=True, eq=False)
class AEOutcome:
    y: int
    h: int
    a_hat: float
    distribution: np.ndarray | None = None

    @property
    def resolution(self) -> int:
        return 2**self.h

    @property
    def theta_hat(self) -> float:
        return np.pi * self.y / 2**self.h


def estimated_amplitude(y: int, h: int) -> float:
    return float(np.sin(np.pi * y / 2**h) ** 2)


def estimation_error_bound(a: float, h: int) -> float:
    """``2 pi sqrt(a(1-a)) / 2**h + pi**2 / 4**h``."""
    big_h = 2.0**h
    return 2.0 * np.pi * np.sqrt(a * (1.0 - a)) / big_h + np.pi**2 / big_h**2


def modal_outcome(distribution: np.ndarray) -> int:
    """Most probable outcome, smallest index among numerical ties."""
    top = distribution.max()
    return int(np.flatnonzero(distribution >= top - _TIE_ATOL)[0])


def _composite_fast(op: GroverOperator, h: int) -> Statevector:
    # Controls are diagonal in the counting basis, so after the controlled
    # powers the counting value y carries Q^y A|Phi>. Build those rows directly.
    big_h = 2**h
    w = op.num_qubits
    rows = np.empty((big_h, 2**w), dtype=np.complex128)
    v = op.psi.amplitudes
    for y in range(big_h):
        rows[y] = v
        v = op._forward(v, w)
    rows /= np.sqrt(big_h)
    regs = op.initial_state.registers.merged(RegisterMap({"counting": (w, h)}))
    return Statevector(rows.reshape(-1), regs)


def _composite_circuit(op: GroverOperator, h: int) -> Statevector:
    w = op.num_qubits
    counting = basis_state(h, registers={"counting": (0, h)})
    state = tensor(counting, op.initial_state)
    for j in range(h):
        state = apply_hadamard(state, w + j)
    state = op.a_op.apply(state)
    q = op.as_operator()
    for j in range(h):
        state = apply_controlled_power(state, w + j, q, 2**j)
    return state


def counting_distribution(op: GroverOperator, h: int, method: str = "fast") -> np.ndarray:
    """Exact distribution of the measured counting register."""
    if not 1 <= h <= MAX_COUNTING_QUBITS:
        raise ValueError(f"h must be in [1, {MAX_COUNTING_QUBITS}], got {h}")
    if op.num_qubits + h > MAX_QUBITS:
        raise QubitBudgetError(f"{op.num_qubits} work + {h} counting qubits exceeds {MAX_QUBITS}")
    if method == "fast":
        state = _composite_fast(op, h)
    elif method == "circuit":
        state = _composite_circuit(op, h)
    else:
        raise ValueError(f"unknown method {method!r}")
    state = inverse_qft(state, "counting")
    return measurement_distribution(state, "counting")


def estimate_amplitude(
    op: GroverOperator,
    h: int,
    mode: str = "modal",
    seed: int | None = None,
    method: str = "fast",
) -> AEOutcome:
    """Run phase estimation of ``Q`` with an ``h``-qubit counting register.

    ``mode`` is ``"sample"`` (one seeded draw), ``"modal"`` (most probable
    outcome) or ``"full-distribution"`` (modal outcome plus the exact
    distribution). ``method="circuit"`` simulates the controlled powers gate
    by gate on the composite register; it is slower and exists to cross-check
    the default.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    dist = counting_distribution(op, h, method)
    if mode == "sample":
        if seed is None:
            raise ValueError("sample mode needs a seed")
        y = sample_outcome(dist, seed)
    else:
        y = modal_outcome(dist)
    return AEOutcome(y, h, estimated_amplitude(y, h), dist if mode == "full-distribution" else None)
