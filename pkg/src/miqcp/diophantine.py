"""Integer reflexive generalized inverses and mixed-integer parametrization.

The two public operations here are the arithmetic heart of every reduction
in the package: ``integer_reflexive_ginv`` builds a reflexive generalized
inverse A# with A#A integer, and ``parametrize_mixed_integer_solutions``
turns the solution set of W x = w with leading integer variables into an
affine image of a lower-dimensional mixed-integer space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import DimensionError
from .linalg import (
    Matrix,
    UnimodularCert,
    Vector,
    column_reduce_unimodular,
    identity,
    inverse,
    mat_mul,
    mat_vec,
    row_basis_permute,
    shape,
    vec_add,
    vec_sub,
    zeros,
)
from .rational import ZERO, ONE, is_integral


@dataclass(frozen=True)
class IntegerReflexiveGinv:
    """A#, the unimodular factor U, and the rank r of A.

    Satisfies A A# A = A, A# A A# = A#, A# A integer, and
    A# A = U diag(I_r, 0) U^-1 exactly.
    """

    asharp: Matrix
    u: UnimodularCert
    r: int


def integer_reflexive_ginv(a: Matrix) -> IntegerReflexiveGinv:
    """Integer reflexive generalized inverse of a rational matrix.

    Construction: permute a row basis to the top, column-reduce it with a
    unimodular U so A1 U = [K1 | 0], then A# = U [[K1^-1, 0], [0, 0]] Wperm.
    """
    m, n = shape(a)
    wperm, a1, _a2 = row_basis_permute(a)
    r = len(a1)
    if r == 0:
        return IntegerReflexiveGinv(zeros(n, m), UnimodularCert(identity(n), identity(n)), 0)
    u, k1 = column_reduce_unimodular(a1)
    k1_inv = inverse(k1)
    # K#_I = [[K1^-1, 0], [0, 0]] is n x m; A# = U K#_I Wperm collapses to
    # (first r columns of U) K1^-1 (first r rows of Wperm.u)
    ksharp = zeros(n, m)
    for i in range(r):
        for j in range(r):
            ksharp[i][j] = k1_inv[i][j]
    asharp = mat_mul(mat_mul(u.u, ksharp), wperm.u)
    return IntegerReflexiveGinv(asharp, u, r)


@dataclass(frozen=True)
class AffineParam:
    """Affine map tau(x') = xbar + M x' with mixed-integer bookkeeping.

    The first p entries of xbar are integers, M has full column rank, and
    tau restricts to a bijection between Z^p' x R^(n'-p') and the
    mixed-integer points of the target set.
    """

    xbar: Vector
    m: Matrix
    p_prime: int
    n_prime: int

    def apply(self, xprime: Vector) -> Vector:
        return vec_add(self.xbar, mat_vec(self.m, xprime))

    def apply_inverse(self, x: Vector) -> Vector:
        """tau^-1(x) = (M^T M)^-1 M^T (x - xbar); valid on the image of tau."""
        if self.n_prime == 0:
            return []
        n = len(self.xbar)
        mt = [[self.m[i][j] for i in range(n)] for j in range(self.n_prime)]
        gram = mat_mul(mt, self.m)
        rhs = mat_vec(mt, vec_sub(x, self.xbar))
        return mat_vec(inverse(gram), rhs)

    def compose(self, inner: "AffineParam") -> "AffineParam":
        """The map x'' -> self(inner(x''))."""
        return AffineParam(
            self.apply(inner.xbar),
            mat_mul(self.m, inner.m),
            inner.p_prime,
            inner.n_prime,
        )


def identity_param(n: int, p: int) -> AffineParam:
    return AffineParam([ZERO] * n, identity(n), p, n)


class Empty:
    """Certified absence of mixed-integer solutions."""

    def __repr__(self):
        return "Empty()"

    def __eq__(self, other):
        return isinstance(other, Empty)

    def __hash__(self):
        return hash(Empty)


EMPTY = Empty()


def parametrize_mixed_integer_solutions(
    w: Matrix, rhs: Vector, p: int
) -> Union[Empty, AffineParam]:
    """Mixed-integer solutions of W x = rhs with x in Z^p x R^(n-p).

    Splits W = [A | B] at column p, forms C = (I - B B#) A and d = (I - B B#) rhs,
    and tests (i) C#_I d integer, (ii) C C#_I d = d.  On success returns the
    affine parametrization assembled from the trailing columns of the
    unimodular factors U_C, U_B; on failure returns Empty.
    """
    m = len(w)
    if m == 0:
        raise DimensionError("parametrize: empty system (caller handles m = 0)")
    n = len(w[0])
    if len(rhs) != m:
        raise DimensionError("parametrize: len(rhs) != rows of W")
    if not 0 <= p <= n:
        raise DimensionError(f"parametrize: p={p} out of range for n={n}")
    q = n - p
    a = [row[:p] for row in w]
    b = [row[p:] for row in w]

    if q > 0:
        b_g = integer_reflexive_ginv(b)
        bsharp, r_b, u_b = b_g.asharp, b_g.r, b_g.u.u
        bb = mat_mul(b, bsharp)
    else:
        bsharp, r_b, u_b = None, 0, []
        bb = zeros(m, m)
    proj = [[(ONE if i == j else ZERO) - bb[i][j] for j in range(m)] for i in range(m)]
    d = mat_vec(proj, rhs)

    if p > 0:
        c = mat_mul(proj, a)
        c_g = integer_reflexive_ginv(c)
        ybar = mat_vec(c_g.asharp, d)
        if any(not is_integral(v) for v in ybar):
            return EMPTY
        if mat_vec(c, ybar) != d:
            return EMPTY
        r_c, u_c = c_g.r, c_g.u.u
    else:
        # condition (i) is vacuous; (ii) degenerates to linear consistency
        if any(v != 0 for v in d):
            return EMPTY
        ybar, r_c, u_c = [], 0, []

    p_prime = p - r_c
    q_prime = q - r_b
    n_prime = p_prime + q_prime

    # The trailing n - r columns of each unimodular factor span the solution
    # lattice of the homogeneous system; negating them is a bijection of the
    # free variables, chosen so that M = I on unconstrained instances.
    r_blk = [[u_c[i][r_c + j] for j in range(p_prime)] for i in range(p)]
    t_blk = [[u_b[i][r_b + j] for j in range(q_prime)] for i in range(q)]

    if q > 0:
        if p > 0:
            ba = mat_mul(bsharp, a)
            s_blk = [[-v for v in row] for row in mat_mul(ba, r_blk)]
            ba_ybar = mat_vec(ba, ybar)
        else:
            s_blk = [[] for _ in range(q)]
            ba_ybar = [ZERO] * q
        zbar = vec_sub(mat_vec(bsharp, rhs), ba_ybar)
    else:
        s_blk, zbar = [], []

    xbar = list(ybar) + list(zbar)
    m_map = [r_blk[i] + [ZERO] * q_prime for i in range(p)] + [
        s_blk[i] + t_blk[i] for i in range(q)
    ]
    return AffineParam(xbar, m_map, p_prime, n_prime)
