#!/usr/bin/env python3
"""Reduce a non-minimal polynomial system matrix to strongly minimal form.

A diagonal matrix polynomial diag(e5, e1) with deg e5 = 5, deg e1 = 1 is
embedded in a 10x10 linear system pencil through an identity/(-lambda I)
chain.  Because the top-degree coefficient diag(e5_5, 0) is singular, the
pencil carries 4 extraneous eigenvalues at infinity: it is minimal in the
classical sense but not strongly minimal.  The reduction deflates exactly
those eigenvalues with unitary transformations and leaves a 6x6 pencil
whose generalized eigenvalues are the six roots of e5*e1.
"""
import numpy as np

from strongmin import (
    generalized_eigenvalues,
    is_strongly_minimal,
    reduce_controllable,
    strongly_minimal_reduce,
    system_pencil,
    transfer_eval,
)
from strongmin.gallery import example_polynomial_system

rng = np.random.default_rng(7)
e5 = list(rng.standard_normal(6))
e5[5] += np.sign(e5[5]) + 0.5
e1 = list(rng.standard_normal(2))
e1[1] += np.sign(e1[1]) + 0.5

q = example_polynomial_system(e5, e1)
S = system_pencil(q)
print(f"system pencil: {S.rows}x{S.cols}, state dimension d = {q.d}")

report = is_strongly_minimal(q)
print(f"strongly minimal?           {report.strongly_minimal}")
print(f"  E-controllable:           {report.e_controllable}")
print(f"  E-observable:             {report.e_observable}")
print(f"  offending eigenvalues:    "
      f"{[v for v, side in report.offending_eigenvalues]}")

q_c, rec = reduce_controllable(q)
print(f"\ncontrollable reduction deflates {rec.d_deflated} state(s); "
      f"deflated eigenvalues: {rec.deflated_eigenvalues}")

q_min, Wl, Wr, records = strongly_minimal_reduce(q)
S_min = system_pencil(q_min)
print(f"reduced system pencil: {S_min.rows}x{S_min.cols}")
print(f"strongly minimal now?       "
      f"{is_strongly_minimal(q_min).strongly_minimal}")

# The transfer function only changed by constant invertible factors.
z = 1.3 + 0.4j
R = transfer_eval(q, z)
R_min = transfer_eval(q_min, z)
print(f"\ntransfer invariance at z = {z}: "
      f"|R_min - Wl R Wr| = {np.linalg.norm(R_min - Wl @ R @ Wr):.2e}")

vals = np.sort_complex(generalized_eigenvalues(S_min))
roots = np.sort_complex(
    np.concatenate([np.roots(e5[::-1]), np.roots(e1[::-1])])
)
print("\neigenvalues of the minimal pencil vs roots of e5*e1:")
for v, r in zip(vals, roots):
    print(f"  {v:24.12f}   {r:24.12f}   |diff| = {abs(v - r):.2e}")
