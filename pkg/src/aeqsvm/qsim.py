"""Dense statevector simulation kernels.

Qubit ordering is little-endian: qubit ``q`` is bit ``q`` of the basis index,
so ``|q_{n-1} ... q_1 q_0>`` lives at index ``sum(q_i * 2**i)``. A register is
a contiguous run of qubits ``[start, start + width)`` whose integer value is
``(index >> start) & (2**width - 1)``.

All public functions return new :class:`Statevector` objects; amplitude
arrays held by a state are read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import QubitBudgetError

MAX_QUBITS = 24
_SQRT_HALF = 1.0 / np.sqrt(2.0)

Kernel = Callable[[np.ndarray, int], np.ndarray]


class RegisterMap(Mapping):
    """Named, pairwise disjoint, contiguous qubit ranges."""

    def __init__(self, ranges: Mapping[str, tuple[int, int]] | None = None):
        self._ranges: dict[str, tuple[int, int]] = {}
        for name, (start, width) in (ranges or {}).items():
            start, width = int(start), int(width)
            if start < 0 or width < 1:
                raise ValueError(f"register {name!r}: bad range start={start} width={width}")
            self._ranges[name] = (start, width)
        spans = sorted((s, s + w, n) for n, (s, w) in self._ranges.items())
        for (_, end, left), (start, _, right) in zip(spans, spans[1:]):
            if start < end:
                raise ValueError(f"registers {left!r} and {right!r} overlap")

    def __getitem__(self, name: str) -> tuple[int, int]:
        try:
            return self._ranges[name]
        except KeyError:
            raise KeyError(f"unknown register {name!r}") from None

    def __iter__(self):
        return iter(self._ranges)

    def __len__(self):
        return len(self._ranges)

    def __repr__(self):
        return f"RegisterMap({self._ranges!r})"

    def __eq__(self, other):
        return isinstance(other, RegisterMap) and self._ranges == other._ranges

    @property
    def span(self) -> int:
        """One past the highest qubit covered by any register."""
        return max((s + w for s, w in self._ranges.values()), default=0)

    def qubits(self, name: str) -> range:
        start, width = self[name]
        return range(start, start + width)

    def shifted(self, offset: int) -> "RegisterMap":
        return RegisterMap({n: (s + offset, w) for n, (s, w) in self._ranges.items()})

    def merged(self, other: "RegisterMap") -> "RegisterMap":
        both = dict(self._ranges)
        for name, rng in other._ranges.items():
            if name in both:
                raise ValueError(f"duplicate register {name!r}")
            both[name] = rng
        return RegisterMap(both)


def _check_dimension(length: int) -> int:
    if length < 1 or length & (length - 1):
        raise ValueError(f"bad dimension: length {length} is not a power of two")
    n = length.bit_length() - 1
    if n > MAX_QUBITS:
        raise QubitBudgetError(f"{n} qubits requested; at most {MAX_QUBITS} are supported")
    return n


@dataclass(frozen=True, eq=False)
class Statevector:
    """Complex amplitudes of a register of qubits.

    Construction does not renormalize: unnormalized vectors (for example the
    good and bad components of a split state) are legal values. Use
    :func:`prepare_state` for a normalized state.
    """

    amplitudes: np.ndarray
    registers: RegisterMap = field(default_factory=RegisterMap)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        n = _check_dimension(amps.size)
        if self.registers.span > n:
            raise ValueError(f"register map needs {self.registers.span} qubits, state has {n}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def with_amplitudes(self, amps: np.ndarray) -> "Statevector":
        return Statevector(amps, self.registers)

    def with_registers(self, registers: RegisterMap | Mapping[str, tuple[int, int]]) -> "Statevector":
        if not isinstance(registers, RegisterMap):
            registers = RegisterMap(registers)
        return Statevector(self.amplitudes, registers)


def prepare_state(amps: Iterable[complex], registers: Mapping[str, tuple[int, int]] | None = None) -> Statevector:
    """Return the normalized state proportional to ``amps``."""
    vec = np.asarray(list(amps) if not isinstance(amps, np.ndarray) else amps, dtype=np.complex128).reshape(-1)
    _check_dimension(vec.size)
    norm = np.linalg.norm(vec)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("unnormalizable: vector has zero (or non-finite) norm")
    regs = registers if isinstance(registers, RegisterMap) else RegisterMap(registers)
    return Statevector(vec / norm, regs)


def basis_state(num_qubits: int, index: int = 0, registers=None) -> Statevector:
    vec = np.zeros(2**num_qubits, dtype=np.complex128)
    vec[index] = 1.0
    regs = registers if isinstance(registers, RegisterMap) else RegisterMap(registers)
    return Statevector(vec, regs)


def tensor(high: Statevector, low: Statevector) -> Statevector:
    """``|high>|low>``; ``low`` occupies the least significant qubits."""
    regs = low.registers.merged(high.registers.shifted(low.num_qubits))
    return Statevector(np.kron(high.amplitudes, low.amplitudes), regs)


# --- raw kernels ---------------------------------------------------------------
# These act on flat complex arrays of 2**n amplitudes and never mutate input.


def _check_qubit(q: int, n: int) -> int:
    if not 0 <= q < n:
        raise IndexError(f"qubit {q} out of range for {n}-qubit state")
    return q


def _hadamard(a: np.ndarray, n: int, q: int) -> np.ndarray:
    t = a.reshape(2 ** (n - q - 1), 2, 2**q)
    out = np.empty_like(t)
    out[:, 0, :] = (t[:, 0, :] + t[:, 1, :]) * _SQRT_HALF
    out[:, 1, :] = (t[:, 0, :] - t[:, 1, :]) * _SQRT_HALF
    return out.reshape(-1)


def _x(a: np.ndarray, n: int, q: int) -> np.ndarray:
    return a.reshape(2 ** (n - q - 1), 2, 2**q)[:, ::-1, :].reshape(-1).copy()


def _controlled_x(a: np.ndarray, n: int, control: int, control_value: int, target: int) -> np.ndarray:
    out = a.reshape((2,) * n).copy()
    ax_c, ax_t = n - 1 - control, n - 1 - target
    sel = [slice(None)] * n
    sel[ax_c] = control_value
    sel = tuple(sel)
    sub_axis = ax_t if ax_t < ax_c else ax_t - 1
    out[sel] = np.flip(out[sel], axis=sub_axis).copy()
    return out.reshape(-1)


def _register_matrix(a: np.ndarray, n: int, matrix: np.ndarray, start: int) -> np.ndarray:
    w = matrix.shape[0].bit_length() - 1
    t = a.reshape(2 ** (n - start - w), 2**w, 2**start)
    return (matrix @ t).reshape(-1)


def _flip_sign(a: np.ndarray, n: int, q: int, value: int) -> np.ndarray:
    out = a.reshape(2 ** (n - q - 1), 2, 2**q).copy()
    out[:, value, :] *= -1.0
    return out.reshape(-1)


def _reflect(a: np.ndarray, axis: np.ndarray) -> np.ndarray:
    return a - 2.0 * np.vdot(axis, a) * axis


def _dft(a: np.ndarray, n: int, start: int, width: int, inverse: bool) -> np.ndarray:
    t = a.reshape(2 ** (n - start - width), 2**width, 2**start)
    # inverse QFT |k> -> H^-1/2 sum_y exp(-2 pi i y k / H)|y> is numpy's forward FFT.
    f = np.fft.fft if inverse else np.fft.ifft
    return f(t, axis=1, norm="ortho").reshape(-1)


def _bit_mask(n: int, q: int, value: int) -> np.ndarray:
    return ((np.arange(2**n) >> q) & 1) == value


# --- operators -----------------------------------------------------------------


class LinearOperator:
    """A unitary action on a statevector with a known inverse.

    ``forward`` and ``inverse`` are kernels ``(amplitudes, num_qubits) ->
    amplitudes``. ``support`` is the set of qubits the operator may touch;
    it is used to reject controls that overlap the target.
    """

    def __init__(self, forward: Kernel, inverse: Kernel, support: Iterable[int], name: str = "op"):
        self._forward = forward
        self._inverse = inverse
        self.support = frozenset(int(q) for q in support)
        self.name = name

    def __repr__(self):
        return f"LinearOperator({self.name!r}, support={sorted(self.support)})"

    @classmethod
    def dense(cls, matrix: np.ndarray, start: int = 0, name: str = "dense", atol: float = 1e-10) -> "LinearOperator":
        """Unitary ``matrix`` acting on qubits ``[start, start + log2(dim))``."""
        mat = np.array(matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("operator matrix must be square")
        w = _check_dimension(mat.shape[0])
        if not np.allclose(mat.conj().T @ mat, np.eye(mat.shape[0]), atol=atol):
            raise ValueError("operator matrix is not unitary")
        inv = mat.conj().T.copy()
        mat.flags.writeable = False
        return cls(
            lambda a, n: _register_matrix(a, n, mat, start),
            lambda a, n: _register_matrix(a, n, inv, start),
            range(start, start + w),
            name,
        )

    @classmethod
    def hadamard(cls, qubit: int) -> "LinearOperator":
        k = lambda a, n: _hadamard(a, n, qubit)  # noqa: E731
        return cls(k, k, [qubit], f"H[{qubit}]")

    @classmethod
    def controlled_x(cls, control: int, target: int, control_value: int = 1) -> "LinearOperator":
        if control == target:
            raise ValueError("control and target must differ")
        k = lambda a, n: _controlled_x(a, n, control, control_value, target)  # noqa: E731
        return cls(k, k, [control, target], f"CX[{control}={control_value}->{target}]")

    @classmethod
    def compose(cls, *ops: "LinearOperator") -> "LinearOperator":
        """Apply ``ops`` in the order given (the first argument acts first)."""
        ops = tuple(ops)

        def fwd(a, n):
            for op in ops:
                a = op._forward(a, n)
            return a

        def inv(a, n):
            for op in reversed(ops):
                a = op._inverse(a, n)
            return a

        support = frozenset().union(*(op.support for op in ops))
        return cls(fwd, inv, support, " . ".join(op.name for op in reversed(ops)))

    def inverse(self) -> "LinearOperator":
        return LinearOperator(self._inverse, self._forward, self.support, f"{self.name}^-1")

    def _check(self, n: int):
        if self.support and max(self.support) >= n:
            raise IndexError(f"{self.name} acts on qubit {max(self.support)} but state has {n} qubits")

    def apply_array(self, amps: np.ndarray, num_qubits: int) -> np.ndarray:
        self._check(num_qubits)
        return self._forward(amps, num_qubits)

    def apply_inverse_array(self, amps: np.ndarray, num_qubits: int) -> np.ndarray:
        self._check(num_qubits)
        return self._inverse(amps, num_qubits)

    def apply(self, state: Statevector) -> Statevector:
        return state.with_amplitudes(self.apply_array(state.amplitudes, state.num_qubits))

    def apply_inverse(self, state: Statevector) -> Statevector:
        return state.with_amplitudes(self.apply_inverse_array(state.amplitudes, state.num_qubits))

    def matrix(self, num_qubits: int) -> np.ndarray:
        """Dense matrix of the operator on ``num_qubits`` qubits (test helper)."""
        eye = np.eye(2**num_qubits, dtype=np.complex128)
        return np.column_stack([self.apply_array(col, num_qubits) for col in eye])


# --- public gate functions -----------------------------------------------------


def apply_hadamard(state: Statevector, qubit: int) -> Statevector:
    n = state.num_qubits
    return state.with_amplitudes(_hadamard(state.amplitudes, n, _check_qubit(qubit, n)))


def apply_x(state: Statevector, qubit: int) -> Statevector:
    n = state.num_qubits
    return state.with_amplitudes(_x(state.amplitudes, n, _check_qubit(qubit, n)))


def apply_controlled_x(state: Statevector, control: int, control_value: int, target: int) -> Statevector:
    """Flip ``target`` on basis states whose ``control`` bit equals ``control_value``."""
    n = state.num_qubits
    _check_qubit(control, n)
    _check_qubit(target, n)
    if control == target:
        raise ValueError("control and target must differ")
    if control_value not in (0, 1):
        raise ValueError("control_value must be 0 or 1")
    return state.with_amplitudes(_controlled_x(state.amplitudes, n, control, control_value, target))


def apply_operator(state: Statevector, op: LinearOperator, inverse: bool = False) -> Statevector:
    return op.apply_inverse(state) if inverse else op.apply(state)


def apply_controlled_power(state: Statevector, control: int, op: LinearOperator, power: int) -> Statevector:
    """Apply ``op**power`` on the control=1 sub-block, identity elsewhere.

    ``op`` must not touch ``control``; it then maps the control=1 subspace to
    itself, so the result is ``op**power`` applied to the whole vector and
    blended back on the control mask.
    """
    n = state.num_qubits
    _check_qubit(control, n)
    if control in op.support:
        raise ValueError(f"control qubit {control} overlaps the support of {op.name}")
    if power < 0:
        raise ValueError("power must be nonnegative")
    if power == 0:
        return state
    a = state.amplitudes
    b = a
    for _ in range(power):
        b = op.apply_array(b, n)
    mask = _bit_mask(n, control, 1)
    return state.with_amplitudes(np.where(mask, b, a))


def _register(state: Statevector, register) -> tuple[int, int]:
    if isinstance(register, str):
        return state.registers[register]
    start, width = register
    if start < 0 or width < 1 or start + width > state.num_qubits:
        raise ValueError(f"register range {register} outside {state.num_qubits}-qubit state")
    return int(start), int(width)


def qft(state: Statevector, register) -> Statevector:
    start, width = _register(state, register)
    return state.with_amplitudes(_dft(state.amplitudes, state.num_qubits, start, width, inverse=False))


def inverse_qft(state: Statevector, register) -> Statevector:
    """Exact inverse DFT of size ``2**width`` on the register's index space."""
    start, width = _register(state, register)
    return state.with_amplitudes(_dft(state.amplitudes, state.num_qubits, start, width, inverse=True))


def reflect_about_state(state: Statevector, axis: Statevector) -> Statevector:
    """``(I - 2|axis><axis|) state`` without forming the projector."""
    if axis.amplitudes.size != state.amplitudes.size:
        raise ValueError("dimension mismatch between state and reflection axis")
    return state.with_amplitudes(_reflect(state.amplitudes, axis.amplitudes))


def flip_sign_on_flag(state: Statevector, flag: int, good_value: int = 1) -> Statevector:
    n = state.num_qubits
    return state.with_amplitudes(_flip_sign(state.amplitudes, n, _check_qubit(flag, n), good_value))


def measurement_distribution(state: Statevector, register=None) -> np.ndarray:
    """Exact marginal distribution of a register (the full state if ``None``)."""
    probs = np.abs(state.amplitudes) ** 2
    if register is None:
        return probs
    start, width = _register(state, register)
    n = state.num_qubits
    return probs.reshape(2 ** (n - start - width), 2**width, 2**start).sum(axis=(0, 2))


def sample_outcome(distribution: np.ndarray, seed: int) -> int:
    """Draw one index from ``distribution`` using a seeded generator."""
    p = np.asarray(distribution, dtype=float)
    if p.ndim != 1 or p.size == 0 or not np.all(np.isfinite(p)):
        raise ValueError("malformed distribution")
    if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("malformed distribution: entries must be nonnegative and sum to 1")
    cdf = np.cumsum(np.clip(p, 0.0, None))
    cdf /= cdf[-1]
    u = np.random.default_rng(seed).random()
    return int(min(np.searchsorted(cdf, u, side="right"), p.size - 1))


def inner_product(a: Statevector, b: Statevector) -> complex:
    if a.amplitudes.size != b.amplitudes.size:
        raise ValueError("dimension mismatch")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
