"""Choi matrices, block spans, and minimal Hill representations.

A *-linear map L on n x n matrices can be written as
L(V) = sum_{k,l} H_kl C_k V C_l^T with H symmetric; this is a Hill
representation, and it is minimal exactly when the number of coefficient
matrices equals the rank of the Choi matrix of L.  The coefficients can be
chosen as any basis of the span of the n x n blocks of the matricization of
L, read off a fixed n x n grid of n x n blocks.  Complete positivity of L
is positive semidefiniteness of the Choi matrix, equivalently of H for a
minimal representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .commutant import SubspaceBasis
from .errors import NotStarLinearError, RankMismatchError
from .lyapunov import LinearMatrixMap
from .matrix_kit import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    kron,
    psd_scale,
    symmetry_defect,
    unvec,
    vec,
)

__all__ = [
    "ChoiMatrix",
    "HillRepresentation",
    "choi",
    "block_span",
    "minimal_hill",
    "apply_hill",
    "coefficient_stack",
    "is_completely_positive",
    "PositivityTestResult",
    "positivity_sample_test",
    "C1Result",
    "c1_diagnostic",
]


@dataclass(frozen=True)
class ChoiMatrix:
    """The n^2 x n^2 Choi matrix of a linear map, block (i,j) = L(E_ij)."""

    n: int
    matrix: np.ndarray

    def is_symmetric(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return symmetry_defect(self.matrix) <= tol.residual_abs * (
            1.0 + np.linalg.norm(self.matrix)
        )


@dataclass(frozen=True)
class HillRepresentation:
    """Coefficients (C_1..C_m, H) of L(V) = sum_kl H_kl C_k V C_l^T."""

    n: int
    m: int
    coefficients: tuple
    hill_matrix: np.ndarray


def choi(lmap: LinearMatrixMap) -> ChoiMatrix:
    """Assemble the Choi matrix of ``lmap`` block by block."""
    n = lmap.n
    out = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            # vec(E_ij) is the unit vector at column-stacked index j*n + i.
            block = unvec(lmap.matricization[:, j * n + i], n, n)
            out[i * n : (i + 1) * n, j * n : (j + 1) * n] = block
    return ChoiMatrix(n, out)


def _blocks(mat: np.ndarray, n: int):
    for i in range(n):
        for j in range(n):
            yield mat[i * n : (i + 1) * n, j * n : (j + 1) * n]


def block_span(lmap: LinearMatrixMap, tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of the span of the n x n blocks of the matricization.

    The basis elements are unvecs of the leading left singular vectors of the
    matrix whose columns are the vectorized blocks, so they are orthonormal in
    the vec inner product and their number equals the SVD rank.
    """
    n = lmap.n
    cols = np.column_stack([vec(b) for b in _blocks(lmap.matricization, n)])
    u, s, _ = np.linalg.svd(cols)
    cutoff = tol.rank_rel * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return SubspaceBasis(n, tuple(unvec(u[:, k], n, n) for k in range(rank)))


def apply_hill(rep: HillRepresentation, v: np.ndarray) -> np.ndarray:
    """Evaluate sum_kl H_kl C_k V C_l^T."""
    v = as_matrix(v)
    out = np.zeros((rep.n, rep.n))
    h = rep.hill_matrix
    for k, ck in enumerate(rep.coefficients):
        for l, cl in enumerate(rep.coefficients):
            out += h[k, l] * (ck @ v @ cl.T)
    return out


def coefficient_stack(coefficients) -> np.ndarray:
    """Stack C_1^T, ..., C_m^T vertically into the mn x n matrix used by the
    pencil construction, so that stack^T (H kron V) stack = sum_kl H_kl C_k V C_l^T."""
    mats = [as_matrix(c) for c in coefficients]
    if not mats:
        n = 0
        return np.zeros((0, n))
    return np.vstack([c.T for c in mats])


def minimal_hill(lmap: LinearMatrixMap, tol: Tolerances = DEFAULT_TOL) -> HillRepresentation:
    """Compute a minimal Hill representation of a *-linear map.

    The coefficient matrices are an orthonormal basis of the block span of
    the matricization; the Hill matrix is recovered by compressing the Choi
    matrix with pseudoinverses of the stacked coefficient vectors.  The
    result is checked two ways before being returned: the Choi rank must
    equal the number of coefficients, and the representation must reproduce
    the map on random inputs.

    Raises
    ------
    NotStarLinearError
        if the Choi matrix is not symmetric, i.e. the map is not *-linear.
    RankMismatchError
        if the block-span dimension disagrees with the Choi rank, if the
        recovered Hill matrix is singular, or if reconstruction fails.
    """
    n = lmap.n
    cmat = choi(lmap)
    if not cmat.is_symmetric(tol):
        raise NotStarLinearError(
            f"Choi matrix is not symmetric (defect {symmetry_defect(cmat.matrix):.3e}); "
            "the map is not *-linear"
        )
    span = block_span(lmap, tol)
    m = span.dim

    sv = np.linalg.svd(cmat.matrix, compute_uv=False)
    cutoff = tol.rank_rel * (sv[0] if sv.size else 0.0)
    choi_rank = int(np.sum(sv > cutoff))
    if choi_rank != m:
        raise RankMismatchError(
            f"block span dimension {m} != Choi rank {choi_rank}; "
            "blocking convention or input map is inconsistent"
        )

    stacked = span.stacked_vecs()  # n^2 x m, orthonormal columns
    pinv = np.linalg.pinv(stacked)
    hill_t = pinv @ cmat.matrix @ pinv.T
    hill = 0.5 * (hill_t.T + hill_t)  # symmetric since the Choi matrix is

    if m:
        hsv = np.linalg.svd(hill, compute_uv=False)
        if np.sum(hsv > tol.rank_rel * hsv[0]) != m:
            raise RankMismatchError("recovered Hill matrix is singular; representation is not minimal")

    rep = HillRepresentation(n, m, span.basis, hill)
    rng = np.random.default_rng(7)
    for _ in range(20):
        v = rng.standard_normal((n, n))
        lhs = lmap.apply(v)
        rhs = apply_hill(rep, v)
        if np.linalg.norm(lhs - rhs) > tol.residual_abs * (1.0 + np.linalg.norm(lhs)):
            raise RankMismatchError(
                "Hill representation does not reproduce the map on random inputs"
            )
    return rep


def is_completely_positive(lmap: LinearMatrixMap, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether the Choi matrix of the (*-linear) map is PSD at tolerance."""
    cmat = choi(lmap)
    if not cmat.is_symmetric(tol):
        raise NotStarLinearError("Choi matrix is not symmetric; the map is not *-linear")
    sym = 0.5 * (cmat.matrix + cmat.matrix.T)
    w = np.linalg.eigvalsh(sym)
    return bool(w[0] >= -tol.psd_rel * psd_scale(sym))


@dataclass(frozen=True)
class PositivityTestResult:
    """Outcome of the rank-one positivity sampling test."""

    violated: bool
    z: Optional[np.ndarray]
    x: Optional[np.ndarray]
    value: Optional[float]
    trials: int


def _sign_patterns(n: int):
    for bits in range(2 ** (n - 1)):
        v = np.ones(n)
        for k in range(n - 1):
            if bits >> k & 1:
                v[k + 1] = -1.0
        yield v


def positivity_sample_test(
    lmap: LinearMatrixMap,
    trials: int = 1000,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> PositivityTestResult:
    """Search for z, x with x^T L(z z^T) x < 0.

    Positivity of L is equivalent to (z kron x)^T Choi(L) (z kron x) >= 0
    for all z, x, so each probe evaluates that quadratic form.  Structured
    probes come first (all coordinate pairs, then all sign-pattern pairs),
    followed by random unit vectors; trial ``t`` draws from an RNG stream
    derived from ``(seed, t)``.  Finding no violation is one-sided evidence:
    positive maps that are not completely positive will pass this test.
    """
    n = lmap.n
    cm = choi(lmap).matrix
    threshold = -tol.psd_rel * (1.0 + np.linalg.norm(cm))

    probes = []
    eye = np.eye(n)
    for i in range(n):
        for j in range(n):
            probes.append((eye[i], eye[j]))
    for zs in _sign_patterns(n):
        for xs in _sign_patterns(n):
            probes.append((zs, xs))

    def check(z, x):
        w = np.kron(z, x)
        return float(w @ cm @ w)

    count = 0
    for z, x in probes:
        if count >= trials:
            break
        count += 1
        q = check(z, x)
        if q < threshold:
            return PositivityTestResult(True, z, x, q, count)
    t = count
    while t < trials:
        rng = np.random.default_rng([seed, t])
        z = rng.standard_normal(n)
        x = rng.standard_normal(n)
        z /= np.linalg.norm(z)
        x /= np.linalg.norm(x)
        t += 1
        q = check(z, x)
        if q < threshold:
            return PositivityTestResult(True, z, x, q, t)
    return PositivityTestResult(False, None, None, None, trials)


@dataclass(frozen=True)
class C1Result:
    """Witness search outcome for joint injectivity of a matrix family."""

    found: bool
    witness: Optional[np.ndarray]
    trials: int


def c1_diagnostic(
    space: SubspaceBasis,
    trials: int = 1000,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> C1Result:
    """Look for a vector v making {X v : X in basis} linearly independent.

    Such a witness certifies that the stacked evaluation map of the subspace
    has full row rank, the hypothesis under which positivity and complete
    positivity coincide for maps whose block span is this subspace.  No
    witness can exist when dim exceeds n, and failure to find one is
    inconclusive otherwise.  Probes are the coordinate vectors, then the
    all-ones vector, then random unit vectors seeded per trial.
    """
    n, k = space.n, space.dim
    if k > n:
        return C1Result(False, None, 0)
    if k == 0:
        return C1Result(True, np.eye(n)[0] if n else np.zeros(0), 1)

    def full_rank(v):
        m = np.column_stack([x @ v for x in space.basis])
        s = np.linalg.svd(m, compute_uv=False)
        return s.size and s[-1] > tol.rank_rel * s[0]

    probes = [np.eye(n)[i] for i in range(n)]
    probes.append(np.ones(n))
    count = 0
    for v in probes:
        if count >= trials:
            break
        count += 1
        if full_rank(v):
            return C1Result(True, v, count)
    t = count
    while t < trials:
        rng = np.random.default_rng([seed, t])
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        t += 1
        if full_rank(v):
            return C1Result(True, v, t)
    return C1Result(False, None, trials)
