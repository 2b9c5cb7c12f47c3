"""Matrices over the polynomial ring: minors and Fitting ideals, linear
coefficient extraction, reduction modulo variable subsets, rank over the
fraction field, and invertible row/column operations over Q.

Minor enumeration is the dominant combinatorial cost (thousands of
determinants for the larger fixtures), so determinants share a memo table
over (row-subset, column-subset) pairs and the generated minors are
deduplicated up to sign before any Groebner work sees them.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .ideal_ops import IdealHandle
from .polyring import DEGREVLEX, Polynomial, RingMismatch, VarSet


class BadSize(ValueError):
    """Requested minors of an impossible size."""


class NonLinearEntry(ValueError):
    def __init__(self, row: int, col: int, entry):
        super().__init__(f"entry ({row}, {col}) is not a linear form in the x-block: {entry}")
        self.row = row
        self.col = col


class SingularTransform(ValueError):
    """Row/column operation matrix is not invertible over Q."""


# ---------------------------------------------------- rational linear algebra

def rat_matrix(rows) -> tuple:
    return tuple(tuple(Fraction(c) for c in row) for row in rows)


def rat_identity(n: int) -> tuple:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def rat_mul(A, B) -> tuple:
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return tuple(
        tuple(sum((A[i][t] * B[t][j] for t in range(k)), Fraction(0)) for j in range(m))
        for i in range(n)
    )


def rat_inverse(A) -> tuple:
    """Gauss-Jordan inverse over Q; raises SingularTransform when singular."""
    n = len(A)
    aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularTransform(f"matrix has no pivot in column {col}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def rat_is_invertible(A) -> bool:
    try:
        rat_inverse(A)
        return True
    except SingularTransform:
        return False


# ------------------------------------------------------------------ matrices

class PolyMatrix:
    """Rectangular matrix of polynomials; rows index module generators,
    columns index syzygies."""

    __slots__ = ("ring", "entries", "rows", "cols")

    def __init__(self, ring: VarSet, entries):
        entries = tuple(tuple(row) for row in entries)
        if not entries or not entries[0]:
            raise ValueError("matrix must have at least one row and one column")
        cols = len(entries[0])
        for row in entries:
            if len(row) != cols:
                raise ValueError("matrix rows have unequal lengths")
            for p in row:
                if not isinstance(p, Polynomial) or p.ring != ring:
                    raise RingMismatch("matrix entry outside the declared ring")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "rows", len(entries))
        object.__setattr__(self, "cols", cols)

    def __setattr__(self, *args):
        raise AttributeError("PolyMatrix is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring == other.ring
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring, self.entries))

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries[i][j]

    def map_entries(self, f) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[f(p) for p in row] for row in self.entries])

    def mod_vars(self, names) -> "PolyMatrix":
        """Image of the matrix modulo the variable-generated ideal (set to zero)."""
        names = list(names)
        return self.map_entries(lambda p: p.substitute_zero(names))

    def rehome(self, target: VarSet) -> "PolyMatrix":
        return PolyMatrix(target, [[p.rehome(target) for p in row] for row in self.entries])

    def submatrix(self, rows, cols) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[self.entries[i][j] for j in cols] for i in rows])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            self.ring, [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def __str__(self):
        grid = [[str(p) for p in row] for row in self.entries]
        width = max(len(s) for row in grid for s in row)
        return "\n".join("[ " + "  ".join(s.rjust(width) for s in row) + " ]" for row in grid)


def matrix_from_strings(ring: VarSet, rows) -> PolyMatrix:
    from .polyring import parse_poly

    return PolyMatrix(ring, [[parse_poly(s, ring) for s in row] for row in rows])


# -------------------------------------------------------------------- minors

def _det_memo(M: PolyMatrix, rows, cols, memo) -> Polynomial:
    """Laplace expansion along the first chosen column, memoized on
    (row-subset, column-subset)."""
    key = (rows, cols)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if len(rows) == 1:
        val = M.entries[rows[0]][cols[0]]
    else:
        val = Polynomial.zero(M.ring)
        c0 = cols[0]
        rest = cols[1:]
        for k, r in enumerate(rows):
            e = M.entries[r][c0]
            if e.is_zero():
                continue
            sub = _det_memo(M, rows[:k] + rows[k + 1:], rest, memo)
            if sub.is_zero():
                continue
            term = e * sub
            val = val + term if k % 2 == 0 else val - term
    memo[key] = val
    return val


def det(M: PolyMatrix) -> Polynomial:
    if M.rows != M.cols:
        raise BadSize(f"determinant of a {M.rows}x{M.cols} matrix")
    return _det_memo(M, tuple(range(M.rows)), tuple(range(M.cols)), {})


def minor_list(M: PolyMatrix, t: int):
    """All t x t minors, deduplicated up to sign, in a deterministic order."""
    if t < 1 or t > min(M.rows, M.cols):
        raise BadSize(f"{t}x{t} minors of a {M.rows}x{M.cols} matrix")
    memo = {}
    seen = {}
    for rows in combinations(range(M.rows), t):
        for cols in combinations(range(M.cols), t):
            d = _det_memo(M, rows, cols, memo)
            if d.is_zero():
                continue
            if d.leading_coefficient(DEGREVLEX) < 0:
                d = -d
            seen.setdefault(d, None)
    out = sorted(seen, key=lambda p: p.sort_key(DEGREVLEX))
    return out


def minors(M: PolyMatrix, t: int) -> IdealHandle:
    """Ideal of t x t minors."""
    return IdealHandle(M.ring, minor_list(M, t))


def fitting_ideal(M: PolyMatrix, i: int) -> IdealHandle:
    """i-th Fitting ideal of the module presented by M (rows = generators).

    Conventions: the unit ideal when the minor size n - i drops to zero or
    below; the zero ideal when n - i exceeds the column count (the matrix is
    conceptually padded with zero columns), which callers should flag since it
    usually signals an indexing mistake.
    """
    if i < 0:
        raise BadSize(f"negative Fitting index {i}")
    t = M.rows - i
    if t <= 0:
        return IdealHandle(M.ring, [Polynomial.constant(M.ring, 1)])
    if t > min(M.rows, M.cols):
        return IdealHandle(M.ring, [])
    return minors(M, t)


def fitting_out_of_range(M: PolyMatrix, i: int) -> bool:
    """True when Fitt_i falls back to the padded-zero-column convention."""
    t = M.rows - i
    return t > min(M.rows, M.cols)


# ------------------------------------------------------------- linear coeffs

class LinearCoeffs:
    """Coefficient tensor of a linear matrix: entry (i, j) = sum_k c[i][j][k] x_k."""

    __slots__ = ("ring", "xblock", "tensor", "rows", "cols")

    def __init__(self, ring, xblock, tensor):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "xblock", tuple(xblock))
        object.__setattr__(self, "tensor", tensor)
        object.__setattr__(self, "rows", len(tensor))
        object.__setattr__(self, "cols", len(tensor[0]) if tensor else 0)

    def __setattr__(self, *args):
        raise AttributeError("LinearCoeffs is immutable")

    def coeff(self, i: int, j: int, k: int) -> Fraction:
        return self.tensor[i][j][k]

    def reassemble(self) -> PolyMatrix:
        xs = [Polynomial.variable(self.ring, n) for n in self.xblock]
        rows = []
        for i in range(self.rows):
            row = []
            for j in range(self.cols):
                p = Polynomial.zero(self.ring)
                for k, c in enumerate(self.tensor[i][j]):
                    if c:
                        p = p + c * xs[k]
                row.append(p)
            rows.append(row)
        return PolyMatrix(self.ring, rows)


def extract_linear_coeffs(M: PolyMatrix, xblock) -> LinearCoeffs:
    """Coefficient tensor of a matrix whose entries are linear forms in the
    given variables only; reports the offending entry otherwise."""
    xblock = tuple(xblock)
    positions = [M.ring.index(n) for n in xblock]
    unit = {pos: k for k, pos in enumerate(positions)}
    tensor = []
    for i in range(M.rows):
        row = []
        for j in range(M.cols):
            p = M.entries[i][j]
            vec = [Fraction(0)] * len(xblock)
            for m, c in p.terms.items():
                if sum(m) != 1:
                    raise NonLinearEntry(i, j, p)
                pos = next(t for t, e in enumerate(m) if e)
                if pos not in unit:
                    raise NonLinearEntry(i, j, p)
                vec[unit[pos]] = c
            row.append(tuple(vec))
        tensor.append(tuple(row))
    return LinearCoeffs(M.ring, xblock, tuple(tensor))


# ---------------------------------------------------------------------- rank

def rank_mod_vars(M: PolyMatrix, names) -> int:
    """Rank of M over the fraction field after substituting the given
    variables to zero, by Bareiss fraction-free elimination."""
    from .ideal_ops import _divide_exact

    A = [list(row) for row in M.mod_vars(names).entries]
    nrows, ncols = M.rows, M.cols
    rank = 0
    prev = Polynomial.constant(M.ring, 1)
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if A[r][col]), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                num = A[r][c] * A[rank][col] - A[r][col] * A[rank][c]
                A[r][c] = _divide_exact(num, prev)
            A[r][col] = Polynomial.zero(M.ring)
        prev = A[rank][col]
        rank += 1
    return rank


def field_row_col_ops(M: PolyMatrix, U, V) -> PolyMatrix:
    """U * M * V for invertible rational U (n x n) and V (m x m)."""
    U = rat_matrix(U)
    V = rat_matrix(V)
    if len(U) != M.rows or any(len(r) != M.rows for r in U):
        raise BadSize("row transform has the wrong shape")
    if len(V) != M.cols or any(len(r) != M.cols for r in V):
        raise BadSize("column transform has the wrong shape")
    if not rat_is_invertible(U) or not rat_is_invertible(V):
        raise SingularTransform("row/column transforms must be invertible over Q")
    zero = Polynomial.zero(M.ring)
    UM = [
        [
            sum((U[i][k] * M.entries[k][j] for k in range(M.rows) if U[i][k]), zero)
            for j in range(M.cols)
        ]
        for i in range(M.rows)
    ]
    UMV = [
        [
            sum((UM[i][k] * V[k][j] for k in range(M.cols) if V[k][j]), zero)
            for j in range(M.cols)
        ]
        for i in range(M.rows)
    ]
    return PolyMatrix(M.ring, UMV)
