"""Perron-Frobenius data for nonnegative curve matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DimensionError
from .twist_algebra import CurveMatrix

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**6


@dataclass
class PerronData:
    root: float
    vector: np.ndarray
    residual: float
    iterations: int

    def as_dict(self) -> dict:
        return {
            "root": self.root,
            "vector": [float(x) for x in self.vector],
            "residual": self.residual,
            "iterations": self.iterations,
        }


def _as_float(M) -> np.ndarray:
    if isinstance(M, CurveMatrix):
        return M.to_numpy(dtype=float)
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    return A


def _residual(A, v):
    w = A @ v
    root = float(w.sum())  # v >= 0 with |v|_1 = 1, so this is |Av|_1
    return root, float(np.abs(w - root * v).sum())


def perron(
    M,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    start=None,
) -> PerronData:
    """Perron root and L1-normalized Perron vector by power iteration.

    Starts from the uniform vector and renormalizes in L1 every step.  Curve
    matrices of long necklaces have |lambda_2 / lambda_1| within 1e-4 of one,
    so iterates are advanced by repeated squaring: after the k-th update the
    vector equals the plain power iterate M^(2^k - 1) u, normalized, and
    ``iterations`` counts those plain matrix-vector steps.

    ``tol`` bounds the absolute L1 residual; in double precision that cannot go
    much below 1e-16 * root, so very large roots need a looser tolerance.
    """
    A = _as_float(M)
    if (A < 0).any():
        raise ValueError("perron needs a nonnegative matrix")
    if not A.any():
        raise ValueError("perron is undefined for the zero matrix")
    dim = A.shape[0]
    v = np.full(dim, 1.0 / dim) if start is None else np.asarray(start, dtype=float)
    v = v / v.sum()

    power = A / A.max()
    step = 1
    iterations = 0
    root, res = _residual(A, v)
    while res > tol:
        if iterations + step > max_iter:
            raise ConvergenceError(
                f"power iteration did not reach residual {tol:g} within {max_iter} steps "
                f"(last residual {res:.3e})",
                residual=res,
                iterations=iterations,
            )
        v = power @ v
        total = v.sum()
        if total == 0 or not np.isfinite(total):
            raise ConvergenceError("power iterate collapsed", residual=res, iterations=iterations)
        v = v / total
        iterations += step
        root, res = _residual(A, v)
        if res > tol and 2 * step + iterations <= max_iter:
            power = power @ power
            power /= power.max()
            step *= 2
    return PerronData(root=root, vector=v, residual=res, iterations=iterations)


def column_sum_bounds(M) -> tuple:
    """(min column sum, max column sum); exact ints for a CurveMatrix."""
    if isinstance(M, CurveMatrix):
        sums = M.column_sums()
    else:
        sums = list(_as_float(M).sum(axis=0))
    return min(sums), max(sums)


def spectrum_2x2(M) -> tuple:
    if isinstance(M, CurveMatrix):
        if M.dim != 2:
            raise DimensionError(f"spectrum_2x2 needs a 2x2 matrix, got {M.dim}x{M.dim}")
        (a, b), (c, d) = M.to_dense()
    else:
        A = np.asarray(M)
        if A.shape != (2, 2):
            raise DimensionError(f"spectrum_2x2 needs a 2x2 matrix, got shape {A.shape}")
        (a, b), (c, d) = A.tolist()
    trace = a + d
    det = a * d - b * c
    disc = trace * trace - 4 * det
    if disc < 0:
        raise ValueError("complex eigenvalues")
    s = math.sqrt(disc)
    plus = (trace + s) / 2
    # the smaller root via det/plus avoids cancellation when det is tiny relative to trace
    minus = det / plus if plus != 0 else (trace - s) / 2
    return plus, minus
