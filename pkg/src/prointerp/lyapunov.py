"""Lyapunov maps, Lyapunov regularity, and the sampled Lyapunov order test.

The central object is the map L_Y(X) = X Y + Y^T X acting on n x n real
matrices.  Y is called Lyapunov regular when no two eigenvalues of Y sum to
zero (lambda_i + conj(lambda_j) != 0), which is exactly invertibility of
L_Y.  For a regular A the quotient map L_{A,B} = L_B o L_A^{-1} carries the
Lyapunov order: A <= B in the Lyapunov order iff L_{A,B} maps the positive
semidefinite cone into itself.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NotLyapunovRegularError
from .matrix_kit import DEFAULT_TOL, Tolerances, as_matrix, kron, psd_scale, unvec, vec

__all__ = [
    "LinearMatrixMap",
    "lyap_map",
    "is_lyapunov_regular",
    "lab_map",
    "solve_lyapunov",
    "sample_lyapunov_solution",
    "OrderTestResult",
    "lyap_order_sample_test",
]


@dataclass(frozen=True)
class LinearMatrixMap:
    """A linear map on n x n real matrices, stored as its n^2 x n^2
    matricization with respect to column-stacking vec."""

    n: int
    matricization: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matricization)
        if m.shape != (self.n * self.n, self.n * self.n):
            raise ValueError(
                f"matricization has shape {m.shape}, expected {(self.n**2, self.n**2)}"
            )
        object.__setattr__(self, "matricization", m)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = as_matrix(x)
        if x.shape != (self.n, self.n):
            raise ValueError(f"operand has shape {x.shape}, expected {(self.n, self.n)}")
        return unvec(self.matricization @ vec(x), self.n, self.n)

    @classmethod
    def from_function(cls, n: int, fn: Callable[[np.ndarray], np.ndarray]):
        """Matricize ``fn`` by evaluating it on the matrix units E_ij."""
        mat = np.zeros((n * n, n * n))
        for j in range(n):
            for i in range(n):
                e = np.zeros((n, n))
                e[i, j] = 1.0
                mat[:, j * n + i] = vec(as_matrix(fn(e)))
        return cls(n, mat)


def lyap_map(y) -> LinearMatrixMap:
    """The Lyapunov map L_Y(X) = X Y + Y^T X as a :class:`LinearMatrixMap`."""
    y = as_matrix(y)
    if y.shape[0] != y.shape[1]:
        raise ValueError("lyap_map needs a square matrix")
    n = y.shape[0]
    eye = np.eye(n)
    return LinearMatrixMap(n, kron(y.T, eye) + kron(eye, y.T))


def is_lyapunov_regular(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether no two eigenvalues of ``a`` sum to zero, at tolerance.

    The test is min_{i,j} |lambda_i + conj(lambda_j)| > regular_rel * max |lambda|,
    so the zero matrix and any matrix with purely imaginary eigenvalue pairs
    are rejected.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("is_lyapunov_regular needs a square matrix")
    if a.shape[0] == 0:
        raise ValueError("empty matrix has no Lyapunov regularity notion")
    lam = np.linalg.eigvals(a)
    sums = np.abs(lam[:, None] + np.conj(lam[None, :]))
    return bool(sums.min() > tol.regular_rel * np.abs(lam).max())


def lab_map(a, b, tol: Tolerances = DEFAULT_TOL) -> LinearMatrixMap:
    """The quotient map L_{A,B} = L_B o L_A^{-1} for Lyapunov regular ``a``.

    Raises NotLyapunovRegularError when ``a`` fails the regularity test.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError("lab_map needs two square matrices of the same size")
    if not is_lyapunov_regular(a, tol):
        raise NotLyapunovRegularError("base point is not Lyapunov regular")
    la = lyap_map(a).matricization
    lb = lyap_map(b).matricization
    # L_B L_A^{-1} without forming the inverse: solve L_A^T Z = L_B^T.
    mat = np.linalg.solve(la.T, lb.T).T
    return LinearMatrixMap(a.shape[0], mat)


def solve_lyapunov(a, q, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve H A + A^T H = Q for symmetric ``q`` and Lyapunov regular ``a``."""
    a, q = as_matrix(a), as_matrix(q)
    if not is_lyapunov_regular(a, tol):
        raise NotLyapunovRegularError("base point is not Lyapunov regular")
    h = unvec(np.linalg.solve(lyap_map(a).matricization, vec(q)), *a.shape)
    # Q symmetric forces a symmetric solution; clean up rounding.
    return 0.5 * (h + h.T)


def sample_lyapunov_solution(a, seed, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Draw G ~ N(0,1), set Q = G G^T, and return the H with H A + A^T H = Q.

    Every H in the solution cone arises this way up to closure, so sampling H
    like this explores the constraint set of the Lyapunov order.
    """
    a = as_matrix(a)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal(a.shape)
    return solve_lyapunov(a, g @ g.T, tol)


@dataclass(frozen=True)
class OrderTestResult:
    """Outcome of the randomized one-sided Lyapunov order test."""

    violated: bool
    witness: Optional[np.ndarray]
    trial_index: Optional[int]
    trials: int


def _order_trial(a, b, seed, index, tol):
    h = sample_lyapunov_solution(a, [seed, index], tol)
    k = h @ b + b.T @ h
    k = 0.5 * (k + k.T)
    w = np.linalg.eigvalsh(k)
    if w[0] < -tol.psd_rel * psd_scale(k):
        return h
    return None


def lyap_order_sample_test(
    a,
    b,
    trials: int = 1000,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    threads: int = 1,
) -> OrderTestResult:
    """Search for H with H A + A^T H >= 0 but H B + B^T H not >= 0.

    A witness H disproves A <= B in the Lyapunov order; finding none is
    one-sided evidence only.  Trial ``t`` uses an RNG stream derived from
    ``(seed, t)``, so the verdict depends only on ``(seed, trials)`` and in
    particular not on ``threads``: the reported witness is always the one
    with the smallest trial index.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError("order test needs two square matrices of the same size")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not is_lyapunov_regular(a, tol):
        raise NotLyapunovRegularError("base point is not Lyapunov regular")

    if threads <= 1:
        for t in range(trials):
            h = _order_trial(a, b, seed, t, tol)
            if h is not None:
                return OrderTestResult(True, h, t, trials)
        return OrderTestResult(False, None, None, trials)

    chunk = max(1, 8 * threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for start in range(0, trials, chunk):
            indices = range(start, min(start + chunk, trials))
            results = list(
                pool.map(lambda t: _order_trial(a, b, seed, t, tol), indices)
            )
            for t, h in zip(indices, results):
                if h is not None:
                    return OrderTestResult(True, h, t, trials)
    return OrderTestResult(False, None, None, trials)
