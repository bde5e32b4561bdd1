"""Textbook amplitude estimation assembled from dense matrices.

This path reuses nothing from the statevector kernels: every step of the
circuit (Hadamards, ``A``, controlled Grover powers, inverse Fourier
transform) is an explicit ``2**(h+w)`` square matrix. It starts from
``|0...0>`` and uses ``Q1 = -A S0 A^dagger S_chi``, so it serves as the
independent oracle for the all-zeros special case of the generalized
estimator. Only practical for ``h + w`` up to about 10.
"""

import numpy as np


def grover_matrix(a: np.ndarray, flag_qubit: int = 0, good_value: int = 1) -> np.ndarray:
    dim = a.shape[0]
    good = ((np.arange(dim) >> flag_qubit) & 1) == good_value
    s_chi = np.diag(np.where(good, -1.0, 1.0))
    s_0 = np.eye(dim)
    s_0[0, 0] = -1.0
    return -a @ s_0 @ a.conj().T @ s_chi


def dft_matrix(big_h: int) -> np.ndarray:
    j, k = np.meshgrid(np.arange(big_h), np.arange(big_h), indexing="ij")
    return np.exp(2j * np.pi * j * k / big_h) / np.sqrt(big_h)


def textbook_qae_distribution(a: np.ndarray, h: int, flag_qubit: int = 0) -> np.ndarray:
    """Exact counting-register distribution of textbook QAE for unitary ``a``."""
    a = np.asarray(a, dtype=np.complex128)
    dim = a.shape[0]
    big_h = 2**h
    q1 = grover_matrix(a, flag_qubit)
    eye_w = np.eye(dim)

    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    h_all = np.ones((1, 1))
    for _ in range(h):
        h_all = np.kron(h_all, hadamard)

    state = np.zeros(big_h * dim, dtype=np.complex128)
    state[0] = 1.0
    state = np.kron(h_all, eye_w) @ state
    state = np.kron(np.eye(big_h), a) @ state
    for j in range(h):
        bit = (np.arange(big_h) >> j) & 1
        power = np.linalg.matrix_power(q1, 2**j)
        controlled = np.kron(np.diag(1.0 - bit), eye_w) + np.kron(np.diag(bit.astype(float)), power)
        state = controlled @ state
    state = np.kron(dft_matrix(big_h).conj().T, eye_w) @ state
    return (np.abs(state.reshape(big_h, dim)) ** 2).sum(axis=1)
