"""Exact rational matrices and their Smith-McMillan structure.

Ground truth for the numerical pipeline on desk-scale instances.  Local
structural indices are computed from determinantal divisors: the sum of the
k smallest indices at a point equals the minimal valuation over all k x k
minors, so successive differences recover the indices.  Minimal indices
come from the dimension ladder of polynomial null vectors of bounded
degree, and everything is checked against the degree-sum identity before a
structure is returned.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .poly import Poly, exact_roots
from .ratfun import RatFun
from .scalars import GQ


class ExactStructureError(RuntimeError):
    """Exact structure extraction hit an unrepresentable critical point."""


class ExactSingularError(RuntimeError):
    """A block required to be regular is singular as a polynomial matrix."""


class ExactRationalMatrix:
    """Dense matrix of exact rational functions."""

    __slots__ = ("rows", "cols", "entries", "_rank")

    def __init__(self, entries):
        self.entries = [[RatFun.coerce(e) for e in row] for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged rows")
        self._rank = None

    # -- constructors -------------------------------------------------
    @staticmethod
    def zeros(rows: int, cols: int) -> "ExactRationalMatrix":
        return ExactRationalMatrix(
            [[RatFun(Poly()) for _ in range(cols)] for _ in range(rows)]
        )

    @staticmethod
    def identity(n: int) -> "ExactRationalMatrix":
        M = ExactRationalMatrix.zeros(n, n)
        for i in range(n):
            M.entries[i][i] = RatFun.coerce(1)
        return M

    @staticmethod
    def diagonal(values, rows=None, cols=None) -> "ExactRationalMatrix":
        values = [RatFun.coerce(v) for v in values]
        r = rows if rows is not None else len(values)
        c = cols if cols is not None else len(values)
        M = ExactRationalMatrix.zeros(r, c)
        for i, v in enumerate(values):
            M.entries[i][i] = v
        return M

    @staticmethod
    def from_pencil_grids(L0, L1) -> "ExactRationalMatrix":
        """Entries ``lambda*L1 - L0`` from two Gaussian-rational grids."""
        rows = len(L0)
        cols = len(L0[0]) if rows else 0
        ent = []
        for i in range(rows):
            ent.append(
                [
                    RatFun(Poly([-GQ.coerce(L0[i][j]), GQ.coerce(L1[i][j])]))
                    for j in range(cols)
                ]
            )
        return ExactRationalMatrix(ent) if rows else ExactRationalMatrix.zeros(0, cols)

    # -- algebra ------------------------------------------------------
    def transpose(self) -> "ExactRationalMatrix":
        return ExactRationalMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def __add__(self, other):
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return ExactRationalMatrix(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other):
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return ExactRationalMatrix(
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __matmul__(self, other):
        assert self.cols == other.rows
        out = ExactRationalMatrix.zeros(self.rows, other.cols)
        for i in range(self.rows):
            for k in range(self.cols):
                a = self.entries[i][k]
                if a.is_zero():
                    continue
                for j in range(other.cols):
                    b = other.entries[k][j]
                    if not b.is_zero():
                        out.entries[i][j] = out.entries[i][j] + a * b
        return out

    def scale(self, f) -> "ExactRationalMatrix":
        f = RatFun.coerce(f)
        return ExactRationalMatrix(
            [[e * f for e in row] for row in self.entries]
        )

    def eval_complex(self, z: complex) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=complex)
        for i in range(self.rows):
            for j in range(self.cols):
                out[i, j] = self.entries[i][j].eval_complex(z)
        return out

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    # -- rank and solving ---------------------------------------------
    def normal_rank(self) -> int:
        if self._rank is None:
            work = [row[:] for row in self.entries]
            self._rank = _ratfun_rank(work)
        return self._rank


def _pivot_cost(f: RatFun) -> int:
    return f.num.degree + f.den.degree


def _ratfun_rank(work) -> int:
    rows = len(work)
    cols = len(work[0]) if rows else 0
    rank = 0
    row = 0
    for col in range(cols):
        piv = None
        for i in range(row, rows):
            if not work[i][col].is_zero():
                if piv is None or _pivot_cost(work[i][col]) < _pivot_cost(
                    work[piv][col]
                ):
                    piv = i
        if piv is None:
            continue
        work[row], work[piv] = work[piv], work[row]
        inv = RatFun.coerce(1) / work[row][col]
        work[row] = [e * inv for e in work[row]]
        for i in range(row + 1, rows):
            f = work[i][col]
            if not f.is_zero():
                work[i] = [
                    a - f * b for a, b in zip(work[i], work[row])
                ]
        rank += 1
        row += 1
        if row == rows:
            break
    return rank


def solve_exact(A: ExactRationalMatrix, B: ExactRationalMatrix) -> ExactRationalMatrix:
    """Exact solution of A X = B by Gauss-Jordan over the function field."""
    n = A.rows
    if A.cols != n or B.rows != n:
        raise ValueError("dimension mismatch")
    work = [A.entries[i][:] + B.entries[i][:] for i in range(n)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if not work[i][col].is_zero():
                if piv is None or _pivot_cost(work[i][col]) < _pivot_cost(
                    work[piv][col]
                ):
                    piv = i
        if piv is None:
            raise ExactSingularError("A singular as polynomial matrix")
        work[col], work[piv] = work[piv], work[col]
        inv = RatFun.coerce(1) / work[col][col]
        work[col] = [e * inv for e in work[col]]
        for i in range(n):
            if i != col and not work[i][col].is_zero():
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[col])]
    return ExactRationalMatrix([row[n:] for row in work])


def poly_det(M) -> Poly:
    """Fraction-free (Bareiss) determinant of a square grid of polynomials."""
    k = len(M)
    if k == 0:
        return Poly([1])
    M = [row[:] for row in M]
    sign = 1
    prev = Poly([1])
    for r in range(k - 1):
        if M[r][r].is_zero():
            piv = next((i for i in range(r + 1, k) if not M[i][r].is_zero()), None)
            if piv is None:
                # Entire pivot column vanishes below row r: singular.
                return Poly()
            M[r], M[piv] = M[piv], M[r]
            sign = -sign
        for i in range(r + 1, k):
            for j in range(r + 1, k):
                M[i][j] = (M[r][r] * M[i][j] - M[i][r] * M[r][j]).exact_div(prev)
            M[i][r] = Poly()
        prev = M[r][r]
    det = M[k - 1][k - 1]
    return det if sign == 1 else -det


class _MinorTable:
    """Row-cleared polynomial form of a rational matrix with cached minors."""

    def __init__(self, R: ExactRationalMatrix):
        self.R = R
        self.rank = R.normal_rank()
        self.rowdens = []
        self.N = []
        for row in R.entries:
            den = Poly([1])
            for e in row:
                den = den.lcm(e.den) if not e.is_zero() else den
            if den.is_zero():
                den = Poly([1])
            self.rowdens.append(den)
            self.N.append(
                [
                    e.num * den.exact_div(e.den) if not e.is_zero() else Poly()
                    for e in row
                ]
            )
        self._minors = {}

    def minors(self, k: int):
        """All nonzero k x k minors of the cleared matrix, with row sets."""
        if k not in self._minors:
            out = []
            for I in combinations(range(self.R.rows), k):
                for J in combinations(range(self.R.cols), k):
                    det = poly_det([[self.N[i][j] for j in J] for i in I])
                    if not det.is_zero():
                        out.append((I, det))
            self._minors[k] = out
        return self._minors[k]

    def local_indices(self, point) -> tuple:
        """Full list of structural indices d_1 <= ... <= d_rank at a point."""
        point = GQ.coerce(point)
        if self.rank == 0:
            return ()
        rowvals = [den.valuation_at(point) for den in self.rowdens]
        nus = [0]
        for k in range(1, self.rank + 1):
            best = None
            for I, det in self.minors(k):
                v = det.valuation_at(point) - sum(rowvals[i] for i in I)
                if best is None or v < best:
                    best = v
            if best is None:
                raise ExactStructureError(
                    f"no nonzero {k}x{k} minor although normal rank is {self.rank}"
                )
            nus.append(best)
        return tuple(nus[k] - nus[k - 1] for k in range(1, self.rank + 1))

    def top_minor_gcd(self) -> Poly:
        """Monic gcd of all rank x rank minors of the cleared matrix."""
        g = Poly()
        for _, det in self.minors(self.rank):
            g = det.monic() if g.is_zero() else g.gcd(det)
            if g.degree == 0:
                break
        return g


def local_structure_exact(R: ExactRationalMatrix, point) -> tuple:
    """Structural indices of R at a finite Gaussian-rational point.

    Returns the full nondecreasing tuple of normal-rank many indices;
    negative entries are pole orders, positive entries zero orders.
    """
    return _MinorTable(R).local_indices(point)


def infinity_structure_exact(R: ExactRationalMatrix) -> tuple:
    """Structural indices of R at infinity (exact substitution lambda=1/mu)."""
    Rinf = ExactRationalMatrix(
        [[e.subs_inverse() for e in row] for row in R.entries]
    )
    return _MinorTable(Rinf).local_indices(GQ(0))


def _gq_rank(rows) -> int:
    """Exact rank of a dense Gaussian-rational matrix (list of GQ lists)."""
    rows = [row[:] for row in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rank = 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        rank += 1
        r += 1
        if r == nrows:
            break
    return rank


def _right_minimal_indices(R: ExactRationalMatrix, count: int) -> tuple:
    """Right minimal indices from the polynomial-null-vector degree ladder."""
    if count == 0:
        return ()
    table = _MinorTable(R)
    N = table.N
    m, n = R.rows, R.cols
    D = max((p.degree for row in N for p in row if not p.is_zero()), default=0)
    found = []
    prev2 = prev1 = 0
    cap = n * (D + 1) + 2
    for delta in range(cap + 1):
        nrows = m * (D + delta + 1)
        ncols = n * (delta + 1)
        A = [[GQ(0)] * ncols for _ in range(nrows)]
        for i in range(m):
            for col in range(n):
                p = N[i][col]
                if p.is_zero():
                    continue
                for shift in range(delta + 1):
                    for t, coef in enumerate(p.c):
                        if coef:
                            A[(t + shift) * m + i][shift * n + col] = coef
        nullity = ncols - _gq_rank(A)
        at_most = nullity - prev1
        exactly = at_most - (prev1 - prev2)
        found.extend([delta] * exactly)
        prev2, prev1 = prev1, nullity
        if len(found) >= count:
            return tuple(sorted(found))
    raise ExactStructureError("minimal index ladder failed to complete")


def minimal_indices_exact(R: ExactRationalMatrix):
    """Exact right and left minimal index multisets of a rational matrix."""
    r = R.normal_rank()
    right = _right_minimal_indices(R, R.cols - r)
    left = _right_minimal_indices(R.transpose(), R.rows - r)
    return right, left


def full_structure_exact(R: ExactRationalMatrix, candidates=()):
    """Complete McMillan structure of an exact rational matrix.

    Finite critical points are discovered exactly: they are roots of the
    row denominators or of the gcd of the top-order minors, extracted by
    rational root search, exactly solvable quadratics, and the supplied
    candidate points.  Raises :class:`ExactStructureError` when a critical
    polynomial keeps an unresolved nonconstant factor.  The degree-sum
    identity is asserted on the result.
    """
    from ..mcmillan import McMillanStructure, degree_sum_check

    r = R.normal_rank()
    table = _MinorTable(R)
    crit = list(table.rowdens)
    if r > 0:
        crit.append(table.top_minor_gcd())
    points = set()
    for p in crit:
        if p.is_zero() or p.degree < 1:
            continue
        roots, leftover = exact_roots(p, candidates)
        if leftover:
            raise ExactStructureError(
                "finite critical points not exactly representable "
                f"(unresolved factor of degree {leftover})"
            )
        points.update(roots)

    finite = {}
    for pt in points:
        idx = tuple(i for i in table.local_indices(pt) if i != 0)
        if idx:
            finite[pt.to_complex()] = idx
    infinity = tuple(i for i in infinity_structure_exact(R) if i != 0)
    right, left = minimal_indices_exact(R)
    structure = McMillanStructure(
        normal_rank=r,
        finite_points=finite,
        infinity_indices=infinity,
        right_minimal=right,
        left_minimal=left,
    )
    if not degree_sum_check(structure):
        raise ExactStructureError(
            "degree-sum identity violated by the exact structure "
            f"(polar {structure.polar_degree}, zero {structure.zero_degree}, "
            f"eps {sum(right)}, eta {sum(left)})"
        )
    return structure


# ---------------------------------------------------------------------------
# Exact system quadruples
# ---------------------------------------------------------------------------


def _grid(data, rows, cols, name):
    g = [[GQ.coerce(x) for x in row] for row in data]
    if len(g) != rows or any(len(row) != cols for row in g):
        raise ValueError(f"{name} grid has wrong shape")
    return g


class ExactQuadruple:
    """System quadruple with exact Gaussian-rational coefficient grids."""

    def __init__(self, A0, A1, B0, B1, C0, C1, D0, D1):
        self.d = len(A0)
        self.m = len(D0)
        self.n = len(D0[0]) if self.m else (len(B0[0]) if self.d else 0)
        self.A0 = _grid(A0, self.d, self.d, "A0")
        self.A1 = _grid(A1, self.d, self.d, "A1")
        self.B0 = _grid(B0, self.d, self.n, "B0")
        self.B1 = _grid(B1, self.d, self.n, "B1")
        self.C0 = _grid(C0, self.m, self.d, "C0")
        self.C1 = _grid(C1, self.m, self.d, "C1")
        self.D0 = _grid(D0, self.m, self.n, "D0")
        self.D1 = _grid(D1, self.m, self.n, "D1")

    def A_matrix(self) -> ExactRationalMatrix:
        return ExactRationalMatrix.from_pencil_grids(self.A0, self.A1)

    def B_matrix(self) -> ExactRationalMatrix:
        m = ExactRationalMatrix.from_pencil_grids(self.B0, self.B1)
        return m if self.d else ExactRationalMatrix.zeros(0, self.n)

    def C_matrix(self) -> ExactRationalMatrix:
        m = ExactRationalMatrix.from_pencil_grids(self.C0, self.C1)
        return m if self.m else ExactRationalMatrix.zeros(self.m, self.d)

    def D_matrix(self) -> ExactRationalMatrix:
        return ExactRationalMatrix.from_pencil_grids(self.D0, self.D1)

    def to_numeric(self):
        """Round the exact data to a floating-point SystemQuadruple."""
        from ..pencil import Pencil, SystemQuadruple

        def arr(grid, rows, cols):
            out = np.zeros((rows, cols), dtype=complex)
            for i in range(rows):
                for j in range(cols):
                    out[i, j] = grid[i][j].to_complex()
            return out

        d, m, n = self.d, self.m, self.n
        return SystemQuadruple(
            Pencil(arr(self.A0, d, d), arr(self.A1, d, d)),
            Pencil(arr(self.B0, d, n), arr(self.B1, d, n)),
            Pencil(arr(self.C0, m, d), arr(self.C1, m, d)),
            Pencil(arr(self.D0, m, n), arr(self.D1, m, n)),
        )


def transfer_exact(q: ExactQuadruple) -> ExactRationalMatrix:
    """Exact transfer function D + C A^{-1} B of an exact quadruple."""
    D = q.D_matrix()
    if q.d == 0:
        return D
    A = q.A_matrix()
    Y = solve_exact(A, q.B_matrix())
    if q.m == 0:
        return D
    return D + (q.C_matrix() @ Y)
