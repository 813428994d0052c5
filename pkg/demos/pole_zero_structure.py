#!/usr/bin/env python3
"""Complete McMillan structure of rational transfer functions.

Two worked cases:

* diag(lambda, 1/lambda): a zero and a pole at 0, a pole and a zero at
  infinity, McMillan degree 2, and the degree-sum identity 2 = 2 + 0 + 0;
* a rank-deficient 2x3 rational matrix whose right null space contributes
  a minimal index to the degree sum.

Both are checked against the exact-arithmetic oracle.
"""
from strongmin import degree_sum_check, rational_structure
from strongmin.exact import (
    ExactQuadruple,
    ExactRationalMatrix,
    Poly,
    RatFun,
    full_structure_exact,
    transfer_exact,
)
from strongmin.gallery import lambda_and_inverse_system


def show(name, s):
    print(f"{name}")
    print(f"  normal rank        {s.normal_rank}")
    for pt in s.sorted_points():
        print(f"  at {pt:g}: indices {s.finite_points[pt]}")
    if s.infinity_indices:
        print(f"  at infinity: indices {s.infinity_indices}")
    if s.right_minimal or s.left_minimal:
        print(f"  minimal indices: right {s.right_minimal}, "
              f"left {s.left_minimal}")
    print(f"  polar degree {s.polar_degree}, zero degree {s.zero_degree},"
          f" McMillan degree {s.mcmillan_degree}")
    print(f"  degree-sum identity holds: {degree_sum_check(s)}\n")


# -- diag(lambda, 1/lambda) -------------------------------------------------
q = lambda_and_inverse_system()
show("diag(lambda, 1/lambda), numerical pipeline:", rational_structure(q))

X = Poly.x()
R = ExactRationalMatrix.diagonal([RatFun(X), RatFun(1, X)])
show("diag(lambda, 1/lambda), exact oracle:", full_structure_exact(R))

# -- a singular rational matrix ----------------------------------------------
# R = [[1, lambda, 0], [0, 0, 1/(lambda-1)]]: normal rank 2, one right
# minimal index, a pole at 1 and a pole at infinity.
qe = ExactQuadruple(
    A0=[[1, 0], [0, 0]], A1=[[1, 0], [0, 1]],
    B0=[[0, 0, -1], [0, -1, 0]], B1=[[0, 0, 0], [0, 0, 0]],
    C0=[[0, 0], [-1, 0]], C1=[[0, -1], [0, 0]],
    D0=[[-1, 0, 0], [0, 0, 0]], D1=[[0, 1, 0], [0, 0, 0]],
)
R2 = transfer_exact(qe)
print("exact transfer entries:")
for row in R2.entries:
    print("  ", [str(e.num.c) + "/" + str(e.den.c) if not e.is_zero() else "0"
                 for e in row])
show("singular rational matrix, exact oracle:", full_structure_exact(R2))
show("singular rational matrix, numerical pipeline:",
     rational_structure(qe.to_numeric()))
