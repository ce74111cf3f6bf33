"""Dense exact-rational vectors, matrices, and unimodular transforms.

Matrices are row-major lists of lists of Rat; vectors are lists of Rat.
Instances are desk scale, so everything is dense and copied freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Optional, Sequence

from .errors import DimensionError, NotPsdError, PreconditionError
from .rational import Rat, ZERO, ONE, is_integral, numer, denom, rround

Vector = list
Matrix = list


# ---------------------------------------------------------------------------
# construction and elementwise helpers

def vec(entries) -> Vector:
    return [Rat(e) for e in entries]


def mat(rows) -> Matrix:
    out = [[Rat(e) for e in row] for row in rows]
    if out and any(len(r) != len(out[0]) for r in out):
        raise DimensionError("ragged matrix")
    return out


def zeros(m: int, n: int) -> Matrix:
    return [[ZERO] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def shape(a: Matrix) -> tuple:
    return (len(a), len(a[0]) if a else 0)


def copy_mat(a: Matrix) -> Matrix:
    return [row[:] for row in a]


def transpose(a: Matrix) -> Matrix:
    m, n = shape(a)
    return [[a[i][j] for i in range(m)] for j in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    m, k = shape(a)
    k2, n = shape(b)
    if k != k2:
        raise DimensionError(f"mat_mul {m}x{k} by {k2}x{n}")
    bt = transpose(b)
    return [[_dot(arow, bcol) for bcol in bt] for arow in a]


def mat_vec(a: Matrix, x: Vector) -> Vector:
    m, n = shape(a)
    if n != len(x):
        raise DimensionError(f"mat_vec {m}x{n} by {len(x)}")
    return [_dot(row, x) for row in a]


def vec_add(x: Vector, y: Vector) -> Vector:
    if len(x) != len(y):
        raise DimensionError("vec_add lengths differ")
    return [a + b for a, b in zip(x, y)]


def vec_sub(x: Vector, y: Vector) -> Vector:
    if len(x) != len(y):
        raise DimensionError("vec_sub lengths differ")
    return [a - b for a, b in zip(x, y)]


def vec_scale(c, x: Vector) -> Vector:
    c = Rat(c)
    return [c * a for a in x]


def dot(x: Vector, y: Vector):
    if len(x) != len(y):
        raise DimensionError("dot lengths differ")
    return _dot(x, y)


def _dot(x, y):
    acc = ZERO
    for a, b in zip(x, y):
        acc += a * b
    return acc


def norm_sq(x: Vector):
    return _dot(x, x)


def is_zero_vec(x: Vector) -> bool:
    return all(a == 0 for a in x)


def is_zero_mat(a: Matrix) -> bool:
    return all(e == 0 for row in a for e in row)


def is_integer_mat(a: Matrix) -> bool:
    return all(is_integral(e) for row in a for e in row)


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return shape(a) == shape(b) and all(
        x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb)
    )


def quad_form(h_mat: Matrix, x: Vector):
    """x^T H x, exact."""
    return _dot(x, mat_vec(h_mat, x))


# ---------------------------------------------------------------------------
# elimination: rank, row basis, determinant, solving

def _scaled_integer_rows(a: Matrix):
    """Each row multiplied by the lcm of its denominators (rank preserved)."""
    out = []
    for row in a:
        ell = lcm(*[denom(e) for e in row]) if row else 1
        out.append([numer(e) * (ell // denom(e)) for e in row])
    return out


def rank_with_basis(a: Matrix) -> tuple:
    """Rank over Q and the indices of a set of linearly independent rows.

    Fraction-free (Bareiss) elimination on integer-scaled rows, so all
    intermediate values are integers.
    """
    m, n = shape(a)
    work = _scaled_integer_rows(a)
    rows = list(range(m))
    r = 0
    prev = 1
    col = 0
    while r < m and col < n:
        piv = None
        best = None
        for i in range(r, m):
            v = work[i][col]
            if v != 0 and (best is None or abs(v) < best):
                piv, best = i, abs(v)
        if piv is None:
            col += 1
            continue
        work[r], work[piv] = work[piv], work[r]
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, m):
            for j in range(col + 1, n):
                work[i][j] = (work[r][col] * work[i][j] - work[i][col] * work[r][j]) // prev
            work[i][col] = 0
        prev = work[r][col]
        r += 1
        col += 1
    return r, sorted(rows[:r])


def rank(a: Matrix) -> int:
    return rank_with_basis(a)[0]


def det(a: Matrix):
    """Exact determinant of a square matrix (Bareiss on scaled rows)."""
    m, n = shape(a)
    if m != n:
        raise DimensionError("det of a non-square matrix")
    if n == 0:
        return ONE
    work = []
    scaling = ONE
    for row in a:
        ell = lcm(*[denom(e) for e in row])
        scaling *= ell
        work.append([numer(e) * (ell // denom(e)) for e in row])
    sign = 1
    prev = 1
    for k in range(n):
        piv = None
        for i in range(k, n):
            if work[i][k] != 0:
                piv = i
                break
        if piv is None:
            return ZERO
        if piv != k:
            work[k], work[piv] = work[piv], work[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                work[i][j] = (work[k][k] * work[i][j] - work[i][k] * work[k][j]) // prev
            work[i][k] = 0
        prev = work[k][k]
    return Rat(sign * work[n - 1][n - 1]) / scaling


def gauss_solve(a: Matrix, b: Vector) -> Optional[Vector]:
    """One exact solution of A x = b, or None if inconsistent.

    Free variables are set to zero.
    """
    m, n = shape(a)
    if len(b) != m:
        raise DimensionError("gauss_solve shape mismatch")
    work = [row[:] + [b[i]] for i, row in enumerate(a)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = ONE / work[r][col]
        work[r] = [v * inv for v in work[r]]
        for i in range(m):
            if i != r and work[i][col] != 0:
                f = work[i][col]
                work[i] = [vi - f * vr for vi, vr in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if work[i][n] != 0:
            return None
    x = [ZERO] * n
    for i, col in enumerate(pivots):
        x[col] = work[i][n]
    return x


def null_space(a: Matrix) -> Matrix:
    """Columns spanning {x : A x = 0}, as an n x k matrix (k = n - rank)."""
    m, n = shape(a)
    work = copy_mat(a)
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = ONE / work[r][col]
        work[r] = [v * inv for v in work[r]]
        for i in range(m):
            if i != r and work[i][col] != 0:
                f = work[i][col]
                work[i] = [vi - f * vr for vi, vr in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    free = [j for j in range(n) if j not in pivots]
    cols = []
    for j in free:
        v = [ZERO] * n
        v[j] = ONE
        for i, col in enumerate(pivots):
            v[col] = -work[i][j]
        cols.append(v)
    return [[c[i] for c in cols] for i in range(n)]


def inverse(a: Matrix) -> Matrix:
    m, n = shape(a)
    if m != n:
        raise DimensionError("inverse of a non-square matrix")
    work = [row[:] + ident_row[:] for row, ident_row in zip(copy_mat(a), identity(n))]
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if work[i][col] != 0), None)
        if piv is None:
            raise PreconditionError("matrix is singular")
        work[r], work[piv] = work[piv], work[r]
        inv = ONE / work[r][col]
        work[r] = [v * inv for v in work[r]]
        for i in range(n):
            if i != r and work[i][col] != 0:
                f = work[i][col]
                work[i] = [vi - f * vr for vi, vr in zip(work[i], work[r])]
        r += 1
    return [row[n:] for row in work]


# ---------------------------------------------------------------------------
# unimodular transforms

@dataclass(frozen=True)
class UnimodularCert:
    """A unimodular matrix together with its exact inverse.

    Invariants: U and Uinv are integer, U Uinv = I, |det U| = 1.
    """

    u: Matrix
    uinv: Matrix

    def check(self) -> bool:
        n = len(self.u)
        return (
            is_integer_mat(self.u)
            and is_integer_mat(self.uinv)
            and mat_eq(mat_mul(self.u, self.uinv), identity(n))
            and abs(det(self.u)) == 1
        )


def permutation_cert(perm: Sequence[int]) -> UnimodularCert:
    """UnimodularCert for x -> x[perm]; row i of U is e_{perm[i]}."""
    n = len(perm)
    u = zeros(n, n)
    uinv = zeros(n, n)
    for i, j in enumerate(perm):
        u[i][j] = ONE
        uinv[j][i] = ONE
    return UnimodularCert(u, uinv)


def row_basis_permute(a: Matrix) -> tuple:
    """Permutation moving a row basis of A to the top.

    Returns (wperm, a1, a2): wperm is a permutation UnimodularCert with
    wperm.u @ A stacking a1 (r independent rows) over a2.
    """
    m, _ = shape(a)
    r, basis = rank_with_basis(a)
    rest = [i for i in range(m) if i not in basis]
    perm = list(basis) + rest
    a1 = [a[i][:] for i in basis]
    a2 = [a[i][:] for i in rest]
    return permutation_cert(perm), a1, a2


def column_reduce_unimodular(a1: Matrix) -> tuple:
    """Unimodular U with A1 U = [K1 | 0], K1 square invertible.

    A1 must have full row rank.  Integer elementary column operations only
    (nearest-quotient Euclidean reduction per row, smallest pivot first),
    so U stays unimodular; entries of A1 may be rational.
    """
    r, n = shape(a1)
    if r and rank(a1) != r:
        raise PreconditionError("column_reduce_unimodular needs full row rank")
    work = copy_mat(a1)
    u = identity(n)
    uinv = identity(n)

    def col_swap(c1, c2):
        if c1 == c2:
            return
        for row in work:
            row[c1], row[c2] = row[c2], row[c1]
        for row in u:
            row[c1], row[c2] = row[c2], row[c1]
        uinv[c1], uinv[c2] = uinv[c2], uinv[c1]

    def col_addmul(dst, src, k):
        # column dst += k * column src; inverse tracked as a row operation
        if k == 0:
            return
        for row in work:
            row[dst] += k * row[src]
        for row in u:
            row[dst] += k * row[src]
        uinv[src] = [x - k * y for x, y in zip(uinv[src], uinv[dst])]

    for i in range(r):
        while True:
            nz = [j for j in range(i, n) if work[i][j] != 0]
            if not nz:
                raise PreconditionError("row became zero; input not full row rank")
            if len(nz) == 1:
                col_swap(i, nz[0])
                break
            piv = min(nz, key=lambda j: (abs(work[i][j]), j))
            for j in nz:
                if j != piv:
                    # |ratio| >= 1 since piv has the smallest magnitude, so
                    # k != 0 and each pass strictly shrinks the row
                    k = rround(work[i][j] / work[i][piv])
                    col_addmul(j, piv, -k)
    k1 = [row[:r] for row in work]
    return UnimodularCert(u, uinv), k1


# ---------------------------------------------------------------------------
# PSD certification

def ldlt_psd_check(h: Matrix):
    """Exact LDL^T with symmetric pivoting for a symmetric matrix.

    Returns the list of nonnegative pivots if H is PSD; raises NotPsdError
    (with the failing pivot) otherwise.  A zero diagonal with a nonzero
    residual row proves H is not PSD.
    """
    m, n = shape(h)
    if m != n:
        raise DimensionError("ldlt_psd_check needs a square matrix")
    if not mat_eq(h, transpose(h)):
        raise PreconditionError("ldlt_psd_check needs a symmetric matrix")
    a = copy_mat(h)
    idx = list(range(n))
    pivots = []
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i] > 0), None)
        if piv is None:
            for i in range(k, n):
                if a[i][i] < 0:
                    raise NotPsdError(idx[i], f"negative diagonal {a[i][i]}")
            for i in range(k, n):
                for j in range(k, n):
                    if a[i][j] != 0:
                        raise NotPsdError(
                            idx[i], f"zero pivot with nonzero residual at ({idx[i]},{idx[j]})"
                        )
            pivots.extend([ZERO] * (n - k))
            break
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            for row in a:
                row[k], row[piv] = row[piv], row[k]
            idx[k], idx[piv] = idx[piv], idx[k]
        d = a[k][k]
        pivots.append(d)
        for i in range(k + 1, n):
            f = a[i][k] / d
            for j in range(k + 1, n):
                a[i][j] -= f * a[k][j]
            a[i][k] = ZERO
    return pivots


def is_psd(h: Matrix) -> bool:
    try:
        ldlt_psd_check(h)
        return True
    except NotPsdError:
        return False
