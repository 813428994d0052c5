"""Dense complex-matrix primitives with explicit rank tolerances.

Every rank decision made by this package flows through the helpers in this
module so that a single thresholding convention is used everywhere:
a singular value counts toward the rank when it exceeds

    tol * max(m, n) * sigma_max.

The default relative tolerance is ``DEFAULT_TOL = 1e-12`` and every public
operation accepts an override.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-12


def as_complex_matrix(M) -> np.ndarray:
    """Coerce ``M`` to a 2-D complex ndarray, rejecting non-finite entries."""
    A = np.array(M, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={A.ndim}")
    if A.size and not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    return A


@dataclass(eq=False)
class RankDecision:
    """Outcome of a numerical rank determination.

    ``rank`` is the number of singular values strictly greater than
    ``tolerance_used`` (the absolute threshold actually applied).
    """

    rank: int
    tolerance_used: float
    singular_values: np.ndarray = field(repr=False)


def rank_revealing(M, tol: float = DEFAULT_TOL):
    """Rank-revealing SVD of a nonempty complex matrix.

    Returns ``(left_unitary, singular_values, right_unitary, decision)``
    with ``M = left_unitary @ diag(s) @ right_unitary.conj().T`` and the
    rank decided by the ``tol * max(m, n) * sigma_max`` threshold.
    """
    A = as_complex_matrix(M)
    if A.size == 0:
        raise ValueError("empty matrix")
    U, s, Vh = np.linalg.svd(A)
    thr = tol * max(A.shape) * (float(s[0]) if s.size else 0.0)
    rank = int(np.count_nonzero(s > thr))
    return U, s, Vh.conj().T, RankDecision(rank, thr, s)


def matrix_rank(M, tol: float = DEFAULT_TOL, floor: float = 0.0) -> int:
    """Numerical rank with the package-wide threshold; 0 for empty input.

    ``floor`` is an absolute lower bound on the threshold for sub-blocks of
    a larger problem whose scale must prevail.
    """
    A = as_complex_matrix(M)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    thr = max(tol * max(A.shape) * float(s[0]), floor)
    return int(np.count_nonzero(s > thr))


def nullity(M, tol: float = DEFAULT_TOL) -> int:
    """Dimension of the right null space at the package threshold."""
    A = as_complex_matrix(M)
    return A.shape[1] - matrix_rank(A, tol)


def rank_with_gap(M, tol: float = DEFAULT_TOL, floor: float = 0.0):
    """Rank plus a flag marking an ambiguous decision.

    ``floor`` is an absolute lower bound on the threshold, used when the
    matrix is a sub-block of a larger problem whose scale must prevail.
    The decision is flagged when the singular values straddling the
    threshold are within a factor 10 of each other, i.e. the rank would
    flip under a modest change of ``tol``.
    """
    A = as_complex_matrix(M)
    if A.size == 0:
        return 0, False
    s = np.linalg.svd(A, compute_uv=False)
    thr = max(tol * max(A.shape) * float(s[0]), floor)
    rank = int(np.count_nonzero(s > thr))
    ambiguous = False
    if 0 < rank < s.size:
        above, below = float(s[rank - 1]), float(s[rank])
        if below > 0 and above / below < 10.0:
            ambiguous = True
    return rank, ambiguous


def row_compress(M, tol: float = DEFAULT_TOL):
    """Unitary U with ``U @ M`` having its first r rows of full row rank.

    The remaining rows have norm below the rank threshold; ``r`` is the
    numerical rank of ``M``.
    """
    A = as_complex_matrix(M)
    if A.size == 0:
        raise ValueError("empty matrix")
    U, _, _, dec = rank_revealing(A, tol)
    return U.conj().T, dec.rank


def col_compress(M, tol: float = DEFAULT_TOL, side: str = "right-zeros"):
    """Unitary V compressing the columns of ``M``.

    With ``side='right-zeros'``: ``M @ V = [M' | 0]`` where ``M'`` has full
    column rank r; with ``side='left-zeros'`` the zero block comes first.
    """
    A = as_complex_matrix(M)
    if A.size == 0:
        raise ValueError("empty matrix")
    if side not in ("right-zeros", "left-zeros"):
        raise ValueError(f"unknown side {side!r}")
    _, _, V, dec = rank_revealing(A, tol)
    if side == "left-zeros":
        V = V[:, ::-1]
    return V, dec.rank


def eig_pair(L0, L1, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalues of the regular pencil ``lambda*L1 - L0``.

    Delegates to the QZ-based solver; pairs with ``|beta| <= tol*(|alpha| +
    |beta|)`` are classified as infinite and reported as ``inf + 0j``.
    Regularity is the caller's responsibility.
    """
    import scipy.linalg

    A0 = as_complex_matrix(L0)
    A1 = as_complex_matrix(L1)
    n = A0.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    alpha, beta = scipy.linalg.eig(A0, A1, right=False, homogeneous_eigvals=True)
    out = np.empty(n, dtype=complex)
    for i, (a, b) in enumerate(zip(alpha, beta)):
        if abs(b) <= tol * (abs(a) + abs(b)):
            out[i] = complex(np.inf, 0.0)
        else:
            out[i] = a / b
    return out


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish random unitary from the QR factor of a complex Gaussian."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))
