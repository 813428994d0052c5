"""Constructors for worked example systems.

The polynomial chain realization embeds a degree-g matrix polynomial
``P(lambda) = P_0 + P_1 lambda + ... + P_g lambda^g`` into a linear system
quadruple whose A block is a bidiagonal chain of identity/(-lambda I)
blocks; its transfer function is exactly ``P``.  The rational variants glue
a (deliberately non-minimal, when requested) state-space part in front of
the chain.
"""
from __future__ import annotations

import numpy as np

from .pencil import Pencil, SystemQuadruple, constant_pencil, zero_pencil


def polynomial_chain_system(coeffs) -> SystemQuadruple:
    """Linear system quadruple realizing a matrix polynomial.

    ``coeffs`` lists the m x n coefficient matrices P_0 ... P_g.  For
    g >= 2 the state dimension is (g-1)*m; for g <= 1 the polynomial sits
    entirely in the D block.
    """
    coeffs = [np.atleast_2d(np.asarray(c, dtype=complex)) for c in coeffs]
    g = len(coeffs) - 1
    m, n = coeffs[0].shape
    if any(c.shape != (m, n) for c in coeffs):
        raise ValueError("coefficient matrices must share one shape")
    if g <= 1:
        D1 = coeffs[1] if g == 1 else np.zeros((m, n), dtype=complex)
        return SystemQuadruple(
            zero_pencil(0, 0),
            zero_pencil(0, n),
            zero_pencil(m, 0),
            Pencil(-coeffs[0], D1),
        )
    k = g - 1  # chain blocks
    d = k * m
    A0 = np.zeros((d, d), dtype=complex)
    A1 = np.zeros((d, d), dtype=complex)
    for i in range(k):
        A0[i * m : (i + 1) * m, i * m : (i + 1) * m] = -np.eye(m)
        if i + 1 < k:
            A1[i * m : (i + 1) * m, (i + 1) * m : (i + 2) * m] = -np.eye(m)
    B0 = np.zeros((d, n), dtype=complex)
    B1 = np.zeros((d, n), dtype=complex)
    for i in range(1, k):
        B0[(i - 1) * m : i * m, :] = coeffs[i]
    B0[(k - 1) * m :, :] = coeffs[g - 1]
    B1[(k - 1) * m :, :] = -coeffs[g]
    C0 = np.zeros((m, d), dtype=complex)
    C1 = np.zeros((m, d), dtype=complex)
    C1[:, :m] = -np.eye(m)
    return SystemQuadruple(
        Pencil(A0, A1),
        Pencil(B0, B1),
        Pencil(C0, C1),
        Pencil(-coeffs[0], np.zeros((m, n), dtype=complex)),
    )


def diagonal_poly_coeffs(*scalar_polys) -> list:
    """Matrix coefficients of diag(p_1(lambda), ..., p_k(lambda)).

    Each ``p_i`` is an ascending coefficient sequence; shorter polynomials
    are zero padded to the longest degree.
    """
    k = len(scalar_polys)
    g = max(len(p) - 1 for p in scalar_polys)
    out = []
    for t in range(g + 1):
        M = np.zeros((k, k), dtype=complex)
        for i, p in enumerate(scalar_polys):
            if t < len(p):
                M[i, i] = p[t]
        out.append(M)
    return out


def example_polynomial_system(e5, e1) -> SystemQuadruple:
    """10x10 system pencil of diag(e5, e1) with deg e5 = 5, deg e1 = 1.

    The last coefficient matrix diag(e5_5, 0) is singular, so the quadruple
    is minimal but not strongly minimal: four extraneous eigenvalues at
    infinity are deflatable.
    """
    if len(e5) != 6 or len(e1) != 2:
        raise ValueError("expected degree 5 and degree 1 coefficient lists")
    return polynomial_chain_system(diagonal_poly_coeffs(e5, e1))


def example_rational_system(e5, e1) -> SystemQuadruple:
    """12x12 system pencil of diag(e5, e1) + [[0, 0], [1/lambda, 0]].

    The strictly proper part uses a deliberately non-minimal state-space
    triple with two eigenvalues at 0 of which one is uncontrollable.
    """
    q_poly = example_polynomial_system(e5, e1)
    At = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    Bt = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    Ct = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    d_p = q_poly.d
    A0 = np.block(
        [
            [At, np.zeros((2, d_p))],
            [np.zeros((d_p, 2)), q_poly.A.L0],
        ]
    )
    A1 = np.block(
        [
            [np.eye(2), np.zeros((2, d_p))],
            [np.zeros((d_p, 2)), q_poly.A.L1],
        ]
    )
    B0 = np.vstack([-Bt, q_poly.B.L0])
    B1 = np.vstack([np.zeros((2, 2)), q_poly.B.L1])
    C0 = np.hstack([-Ct, q_poly.C.L0])
    C1 = np.hstack([np.zeros((2, 2)), q_poly.C.L1])
    return SystemQuadruple(
        Pencil(A0, A1),
        Pencil(B0, B1),
        Pencil(C0, C1),
        q_poly.D,
    )


def lambda_and_inverse_system() -> SystemQuadruple:
    """Strongly minimal quadruple realizing diag(lambda, 1/lambda)."""
    return SystemQuadruple(
        Pencil(np.zeros((1, 1)), np.eye(1)),
        constant_pencil(np.array([[0.0, 1.0]])),
        constant_pencil(np.array([[0.0], [1.0]])),
        Pencil(np.zeros((2, 2)), np.diag([1.0, 0.0])),
    )


def random_state_space(seed: int, d: int = 4, m: int = 2, n: int = 2,
                       with_feedthrough: bool = True) -> SystemQuadruple:
    """Random classical state-space quadruple (strongly minimal a.s.)."""
    from .pencil import state_space_quadruple

    rng = np.random.default_rng(seed)
    F = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    G = rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))
    H = rng.standard_normal((m, d)) + 1j * rng.standard_normal((m, d))
    D = (
        rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        if with_feedthrough
        else None
    )
    return state_space_quadruple(F, G, H, D)
