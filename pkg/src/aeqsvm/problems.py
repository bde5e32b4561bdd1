"""Random amplitude-estimation problems for tests, verification and scripts.

Every problem uses qubit 0 as the flag qubit and an initial state of the form
``|Phi1>|0>``.
"""

from __future__ import annotations

import numpy as np

from .gqae import GoodStatePredicate, GroverOperator
from .qsim import LinearOperator, Statevector, random_unitary

FLAG = GoodStatePredicate(flag_qubit=0, good_value=1)


def random_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_initial_state(work_qubits: int, rng: np.random.Generator) -> Statevector:
    phi1 = random_vector(2 ** (work_qubits - 1), rng) if work_qubits > 1 else np.ones(1, complex)
    return Statevector(np.kron(phi1, [1.0, 0.0]))


def unitary_with_first_column(col: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    m = random_unitary(col.size, rng)
    m[:, 0] = col
    q, r = np.linalg.qr(m)
    q[:, 0] *= r[0, 0] / abs(r[0, 0])
    return q


def random_problem(work_qubits: int, rng: np.random.Generator, phi: Statevector | None = None) -> GroverOperator:
    """Haar-random ``A`` and random ``|Phi1>|0>`` on ``work_qubits`` qubits."""
    phi = phi if phi is not None else random_initial_state(work_qubits, rng)
    a = LinearOperator.dense(random_unitary(2**work_qubits, rng), name="A")
    return GroverOperator(a, phi, FLAG)


def problem_with_amplitude(
    work_qubits: int, a: float, rng: np.random.Generator, phi: Statevector | None = None
) -> GroverOperator:
    """Random problem whose good-state mass ``<Psi1|Psi1>`` equals ``a``.

    ``A = W D V^dagger`` with ``V e0 = |Phi>``, ``W e0 = |Psi>`` and ``D`` a
    random unitary fixing ``e0``, so ``A|Phi> = |Psi>`` exactly.
    """
    if work_qubits < 2:
        raise ValueError("need a flag qubit plus at least one more qubit")
    phi = phi if phi is not None else random_initial_state(work_qubits, rng)
    rest = 2 ** (work_qubits - 1)
    target = np.sqrt(a) * np.kron(random_vector(rest, rng), [0.0, 1.0]) + np.sqrt(1.0 - a) * np.kron(
        random_vector(rest, rng), [1.0, 0.0]
    )
    dim = 2**work_qubits
    d = np.eye(dim, dtype=np.complex128)
    d[1:, 1:] = random_unitary(dim - 1, rng)
    v = unitary_with_first_column(phi.amplitudes, rng)
    w = unitary_with_first_column(target, rng)
    return GroverOperator(LinearOperator.dense(w @ d @ v.conj().T, name="A"), phi, FLAG)
