"""Exception types shared across the package."""

import numpy as np


class QubitBudgetError(ValueError):
    """Raised when a simulation would exceed the supported qubit count."""


class SingularSystemError(np.linalg.LinAlgError):
    """The LS-SVM matrix is singular; use the pseudoinverse path instead."""


class ZeroOperatorError(ArithmeticError):
    """Every eigenvalue was filtered out (or the projection vanished)."""
