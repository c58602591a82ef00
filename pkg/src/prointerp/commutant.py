"""Commutants, bicommutants, and membership in matrix subspaces.

The commutant of A is computed as the nullspace of the matricized
commutation operator X -> A X - X A; the bicommutant {A}'' stacks one such
operator per commutant basis element and takes the joint nullspace.  For a
single real matrix the bicommutant is the unital algebra generated by A,
and its dimension is the degree of the minimal polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .matrix_kit import DEFAULT_TOL, Tolerances, as_matrix, kron, rank_nullspace_pinv, unvec, vec

__all__ = [
    "SubspaceBasis",
    "commutant_basis",
    "bicommutant_basis",
    "m_max",
    "MembershipResult",
    "membership",
]


@dataclass(frozen=True)
class SubspaceBasis:
    """A linearly independent list of n x n matrices spanning a subspace."""

    n: int
    basis: tuple

    def __post_init__(self):
        mats = tuple(as_matrix(b) for b in self.basis)
        for b in mats:
            if b.shape != (self.n, self.n):
                raise ValueError(f"basis element has shape {b.shape}, expected square of size {self.n}")
        object.__setattr__(self, "basis", mats)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def stacked_vecs(self) -> np.ndarray:
        """The n^2 x dim matrix whose columns are vec of the basis elements."""
        if not self.basis:
            return np.zeros((self.n * self.n, 0))
        return np.column_stack([vec(b) for b in self.basis])


def _commutation_operator(k: np.ndarray) -> np.ndarray:
    """Matricization of X -> K X - X K."""
    n = k.shape[0]
    eye = np.eye(n)
    return kron(eye, k) - kron(k.T, eye)


def _nullspace_basis(op: np.ndarray, n: int, tol: Tolerances) -> SubspaceBasis:
    _, null, _ = rank_nullspace_pinv(op, tol)
    mats = tuple(unvec(null[:, j], n, n) for j in range(null.shape[1]))
    return SubspaceBasis(n, mats)


def commutant_basis(a, tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis (in the vec inner product) of {X : A X = X A}."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError("commutant_basis needs a nonempty square matrix")
    return _nullspace_basis(_commutation_operator(a), a.shape[0], tol)


def bicommutant_basis(a, tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of {A}'' = {X : X K = K X for all K commuting with A}."""
    a = as_matrix(a)
    comm = commutant_basis(a, tol)
    ops = [_commutation_operator(k) for k in comm.basis]
    stacked = np.vstack(ops) if ops else np.zeros((0, a.shape[0] ** 2))
    return _nullspace_basis(stacked, a.shape[0], tol)


def m_max(a, tol: Tolerances = DEFAULT_TOL) -> int:
    """Dimension of the bicommutant of ``a`` (degree of its minimal polynomial)."""
    return bicommutant_basis(a, tol).dim


@dataclass(frozen=True)
class MembershipResult:
    """Least-squares membership verdict for a matrix against a subspace."""

    is_member: bool
    coords: Optional[np.ndarray]
    residual: float


def membership(b, space: SubspaceBasis, tol: Tolerances = DEFAULT_TOL) -> MembershipResult:
    """Decide whether ``b`` lies in ``space`` up to the residual gate.

    The coordinates are the least-squares coefficients of vec(b) against the
    stacked basis vectors; membership requires the residual to stay below
    residual_abs * (1 + ||b||_F).
    """
    b = as_matrix(b)
    if b.shape != (space.n, space.n):
        raise ValueError(f"matrix has shape {b.shape}, expected {(space.n, space.n)}")
    target = vec(b)
    if space.dim == 0:
        residual = float(np.linalg.norm(target))
        ok = residual <= tol.residual_abs * (1.0 + np.linalg.norm(b))
        return MembershipResult(ok, np.zeros(0) if ok else None, residual)
    v = space.stacked_vecs()
    coords, *_ = np.linalg.lstsq(v, target, rcond=None)
    residual = float(np.linalg.norm(v @ coords - target))
    if residual <= tol.residual_abs * (1.0 + np.linalg.norm(b)):
        return MembershipResult(True, coords, residual)
    return MembershipResult(False, None, residual)
