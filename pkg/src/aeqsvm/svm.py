"""Classical least-squares SVM with a linear kernel.

Training solves the bordered system

    [ 0   1^T         ] [ b     ]   [ 0 ]
    [ 1   K + I/gamma ] [ alpha ] = [ y ]

and a query ``x`` is labelled by ``sign(sum_k alpha_k x_k.x + b)``. This is the
ground truth the quantum pipeline is compared against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularSystemError

_SINGULAR_RCOND = 1e-13
_BOUNDARY_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class TrainingSet:
    vectors: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        x = np.array(self.vectors, dtype=float)
        y = np.array(self.labels, dtype=float).reshape(-1)
        if x.ndim != 2:
            raise ValueError("training vectors must be a 2-D array (m rows of n features)")
        m, n = x.shape
        if m < 2 or n < 1:
            raise ValueError(f"need at least 2 training points with 1 feature, got shape {x.shape}")
        if y.size != m:
            raise ValueError(f"{m} vectors but {y.size} labels")
        if not np.all(np.isfinite(x)):
            raise ValueError("training vectors contain non-finite entries")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise ValueError("labels must be exactly -1 or +1")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "vectors", x)
        object.__setattr__(self, "labels", y)

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    def target(self) -> np.ndarray:
        """Right-hand side ``(0; y)``."""
        return np.concatenate([[0.0], self.labels])


@dataclass(frozen=True, eq=False)
class SvmSystem:
    f_matrix: np.ndarray
    gamma: float

    @property
    def dim(self) -> int:
        return self.f_matrix.shape[0]


@dataclass(frozen=True, eq=False)
class SvmModel:
    b: float
    alpha: np.ndarray
    c_norm: float

    @classmethod
    def from_solution(cls, x: np.ndarray) -> "SvmModel":
        x = np.asarray(x, dtype=float)
        return cls(float(x[0]), x[1:].copy(), float(x @ x))

    @property
    def solution(self) -> np.ndarray:
        return np.concatenate([[self.b], self.alpha])

    def negated(self) -> "SvmModel":
        return SvmModel(-self.b, -self.alpha, self.c_norm)


@dataclass(frozen=True)
class ClassicalLabel:
    label: int
    margin: float
    boundary: bool = False


def build_kernel(ts: TrainingSet) -> np.ndarray:
    x = ts.vectors
    k = x @ x.T
    return 0.5 * (k + k.T)


def build_system(kernel: np.ndarray, labels, gamma: float) -> SvmSystem:
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    k = np.asarray(kernel, dtype=float)
    m = k.shape[0]
    if k.shape != (m, m) or np.size(labels) != m:
        raise ValueError("kernel must be m x m with m labels")
    f = np.zeros((m + 1, m + 1))
    f[0, 1:] = 1.0
    f[1:, 0] = 1.0
    f[1:, 1:] = k + np.eye(m) / gamma
    f.flags.writeable = False
    return SvmSystem(f, float(gamma))


def solve_exact(system: SvmSystem, labels) -> SvmModel:
    """Dense LU solve of ``F (b; alpha) = (0; y)``.

    Raises :class:`SingularSystemError` when ``F`` is numerically singular;
    such systems go through :func:`aeqsvm.qtrain.pseudoinverse_solve`.
    """
    f = system.f_matrix
    rhs = np.concatenate([[0.0], np.asarray(labels, dtype=float)])
    if 1.0 / np.linalg.cond(f) < _SINGULAR_RCOND:
        raise SingularSystemError("F is numerically singular; use qtrain.pseudoinverse_solve")
    return SvmModel.from_solution(np.linalg.solve(f, rhs))


def solver_residual(system: SvmSystem, model: SvmModel, labels) -> float:
    """``||F (b; alpha) - (0; y)|| / ||(0; y)||``."""
    rhs = np.concatenate([[0.0], np.asarray(labels, dtype=float)])
    return float(np.linalg.norm(system.f_matrix @ model.solution - rhs) / np.linalg.norm(rhs))


def decision_margin(model: SvmModel, ts: TrainingSet, query) -> float:
    x = np.asarray(query, dtype=float).reshape(-1)
    if x.size != ts.n:
        raise ValueError(f"query has {x.size} features, training set has {ts.n}")
    return float(model.alpha @ (ts.vectors @ x) + model.b)


def classify_classical(model: SvmModel, ts: TrainingSet, query) -> ClassicalLabel:
    margin = decision_margin(model, ts, query)
    if abs(margin) <= _BOUNDARY_ATOL:
        return ClassicalLabel(1, margin, boundary=True)
    return ClassicalLabel(1 if margin > 0 else -1, margin)
