"""Matrix-level emulation of SVD-based quantum training.

The quantum routine estimates each eigenvalue of ``F`` to ``k`` bits, inverts
it by a conditional rotation and amplifies the success branch, leaving

    |b, alpha> ∝ sum_i beta_i / lambda_bar_i |nu_i>,   beta_i = <nu_i|0, y>.

Here that is reproduced exactly: a symmetric eigendecomposition, rounding of
the normalized eigenvalues to multiples of ``2**-k``, and inversion restricted
to the window ``|lambda| / max|lambda| >= 1/kappa_cap`` (a Moore-Penrose
pseudoinverse when ``F`` is singular).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroOperatorError
from .svm import SvmModel, SvmSystem, TrainingSet, build_kernel, build_system

JACOBI_MAX_DIM = 64


@dataclass(frozen=True)
class PrecisionParams:
    k: int = 52
    kappa_cap: float = 1e8
    epsilon: float = 0.01

    def __post_init__(self):
        if not 1 <= self.k <= 52:
            raise ValueError(f"k must be in [1, 52], got {self.k}")
        if not self.kappa_cap >= 1:
            raise ValueError(f"kappa_cap must be >= 1, got {self.kappa_cap}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # sorted by descending |lambda|
    eigenvectors: np.ndarray  # columns
    input_scale: float

    @property
    def normalized(self) -> np.ndarray:
        return self.eigenvalues / self.input_scale

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def jacobi_eigh(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for a real symmetric matrix.

    Sweeps over every ``(p, q)`` pair, zeroing ``a[p, q]`` with a plane
    rotation, until the off-diagonal Frobenius norm drops below
    ``tol * ||a||_F``. Returns ``(eigenvalues, eigenvectors)`` unsorted.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-17 * scale:
                    a[p, q] = a[q, p] = 0.0
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-18 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * ap - s * aq, s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * ap - s * aq, s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
    else:
        raise np.linalg.LinAlgError("Jacobi iteration did not converge")
    return np.diag(a).copy(), v


def eigendecompose(f: np.ndarray, method: str = "auto") -> SpectralDecomposition:
    """Spectral decomposition of a symmetric matrix.

    ``method`` is ``"jacobi"``, ``"lapack"`` (``numpy.linalg.eigh``) or
    ``"auto"``, which uses Jacobi up to ``JACOBI_MAX_DIM`` rows.
    """
    f = np.asarray(f, dtype=float)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise ValueError("matrix must be square")
    if np.max(np.abs(f - f.T), initial=0.0) > 1e-10 * max(1.0, np.max(np.abs(f), initial=0.0)):
        raise ValueError("matrix is not symmetric")
    f = 0.5 * (f + f.T)
    if method == "auto":
        method = "jacobi" if f.shape[0] <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        w, v = jacobi_eigh(f)
    elif method == "lapack":
        w, v = np.linalg.eigh(f)
    else:
        raise ValueError(f"unknown method {method!r}")
    order = np.argsort(-np.abs(w), kind="stable")
    w, v = w[order], v[:, order]
    scale = float(np.max(np.abs(w), initial=0.0))
    return SpectralDecomposition(w, v, scale)


def quantize_eigenvalues(decomp: SpectralDecomposition, params: PrecisionParams) -> SpectralDecomposition:
    """Round each ``lambda / input_scale`` to the nearest multiple of ``2**-k``."""
    if not decomp.input_scale > 0:
        raise ValueError("cannot quantize the spectrum of a zero matrix")
    step = 2.0**params.k
    q = np.round(decomp.normalized * step) / step * decomp.input_scale
    return SpectralDecomposition(q, decomp.eigenvectors, decomp.input_scale)


def retained_mask(eigenvalues: np.ndarray, kappa_cap: float) -> np.ndarray:
    mag = np.abs(eigenvalues)
    top = mag.max(initial=0.0)
    return (mag > 0.0) & (mag * kappa_cap >= top)


def pseudoinverse_solve(
    decomp: SpectralDecomposition, target, params: PrecisionParams
) -> tuple[np.ndarray, SvmModel]:
    """Filtered spectral inverse of ``target``.

    Eigenvalues are quantized with ``params.k`` bits; only those inside the
    ``1/kappa_cap`` window are inverted. Returns the unit-norm amplitude
    vector ``|b, alpha>`` and the unnormalized model ``(b, alpha, C)``.
    """
    t = np.asarray(target, dtype=float).reshape(-1)
    if t.size != decomp.eigenvalues.size:
        raise ValueError(f"target has length {t.size}, decomposition has dimension {decomp.eigenvalues.size}")
    quant = quantize_eigenvalues(decomp, params)
    keep = retained_mask(quant.eigenvalues, params.kappa_cap)
    if not keep.any():
        raise ZeroOperatorError("numerically zero operator: no eigenvalue inside the kappa window")
    v = quant.eigenvectors[:, keep]
    beta = v.T @ t
    x = v @ (beta / quant.eigenvalues[keep])
    norm = np.linalg.norm(x)
    if norm <= 1e-14 * max(np.linalg.norm(t), 1e-300) / decomp.input_scale:
        raise ZeroOperatorError("numerically zero operator: target has no weight on retained eigenvectors")
    return x / norm, SvmModel.from_solution(x)


def condition_number(decomp: SpectralDecomposition, threshold: float = 1e-10) -> float:
    """``max|lambda| / min{|lambda| : |lambda| > threshold * max|lambda|}``."""
    mag = np.abs(decomp.eigenvalues)
    top = mag.max(initial=0.0)
    if top == 0.0:
        raise ValueError("condition number of a zero matrix is undefined")
    return float(top / mag[mag > threshold * top].min())


def moore_penrose_reference(f: np.ndarray, rcond: float = 1e-10) -> np.ndarray:
    """SVD-based pseudoinverse (independent of :func:`eigendecompose`)."""
    return np.linalg.pinv(np.asarray(f, dtype=float), rcond=rcond)


@dataclass(frozen=True, eq=False)
class TrainingResult:
    system: SvmSystem
    decomposition: SpectralDecomposition
    quantized: SpectralDecomposition
    retained: np.ndarray
    amplitudes: np.ndarray
    model: SvmModel
    kappa: float
    residual: float
    projected_residual: float
    params: PrecisionParams


def train(ts: TrainingSet, gamma: float = 1.0, params: PrecisionParams | None = None) -> TrainingResult:
    """Kernel, bordered system, eigendecomposition and filtered inverse in one call."""
    params = params or PrecisionParams()
    system = build_system(build_kernel(ts), ts.labels, gamma)
    decomp = eigendecompose(system.f_matrix)
    if decomp.input_scale == 0.0:
        raise ZeroOperatorError("numerically zero operator")
    quant = quantize_eigenvalues(decomp, params)
    keep = retained_mask(quant.eigenvalues, params.kappa_cap)
    amps, model = pseudoinverse_solve(decomp, ts.target(), params)
    t = ts.target()
    f = system.f_matrix
    resid = float(np.linalg.norm(f @ model.solution - t) / np.linalg.norm(t))
    v = decomp.eigenvectors[:, keep]
    proj = v @ v.T
    proj_resid = float(np.linalg.norm(proj @ (f @ model.solution) - proj @ t) / np.linalg.norm(t))
    kappa = condition_number(decomp, 1.0 / params.kappa_cap)
    return TrainingResult(system, decomp, quant, keep, amps, model, kappa, resid, proj_resid, params)
