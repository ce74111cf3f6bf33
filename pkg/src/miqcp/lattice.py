"""Exact LLL reduction and the flatness dichotomy.

The lattice generated by the columns of an invertible rational matrix is
reduced with delta = 3/4 in exact Gram-Schmidt arithmetic.  The flatness
routine then either places a lattice point inside a given ball (Babai's
nearest plane on the reduced basis) or certifies a thin integer direction
whose width over the ball is at most p * 2^(p(p-1)/4).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import DimensionError, PreconditionError
from .linalg import (
    Matrix,
    UnimodularCert,
    Vector,
    det,
    dot,
    identity,
    inverse,
    norm_sq,
    vec_sub,
)
from .rational import Rat, ZERO, rround


@dataclass(frozen=True)
class LatticeBasis:
    """Lattice {B mu : mu integer}, generated by the columns of b_mat."""

    b_mat: Matrix

    @property
    def p(self) -> int:
        return len(self.b_mat)

    def columns(self) -> List[Vector]:
        p = self.p
        return [[self.b_mat[i][j] for i in range(p)] for j in range(p)]

    def validate(self):
        if any(len(row) != self.p for row in self.b_mat):
            raise DimensionError("lattice basis must be square")
        if det(self.b_mat) == 0:
            raise PreconditionError("lattice basis is singular")


def _gram_schmidt(cols: List[Vector]) -> Tuple[List[Vector], List[List[Rat]]]:
    star = []
    mu = [[ZERO] * len(cols) for _ in cols]
    for i, b in enumerate(cols):
        v = list(b)
        for j in range(i):
            denom = norm_sq(star[j])
            mu[i][j] = dot(b, star[j]) / denom
            v = [a - mu[i][j] * c for a, c in zip(v, star[j])]
        star.append(v)
    return star, mu


def lll_reduce(basis: LatticeBasis) -> Tuple[LatticeBasis, UnimodularCert]:
    """LLL with delta = 3/4; returns the reduced basis and U with Bred = B U."""
    basis.validate()
    p = basis.p
    cols = basis.columns()
    u = identity(p)
    uinv = identity(p)

    def col_addmul(dst, src, k):
        cols[dst] = [a + k * b for a, b in zip(cols[dst], cols[src])]
        for row in u:
            row[dst] += k * row[src]
        uinv[src] = [x - k * y for x, y in zip(uinv[src], uinv[dst])]

    def col_swap(c1, c2):
        cols[c1], cols[c2] = cols[c2], cols[c1]
        for row in u:
            row[c1], row[c2] = row[c2], row[c1]
        uinv[c1], uinv[c2] = uinv[c2], uinv[c1]

    star, mu = _gram_schmidt(cols)
    k = 1
    while k < p:
        for j in range(k - 1, -1, -1):
            if 2 * abs(mu[k][j]) > 1:
                col_addmul(k, j, -rround(mu[k][j]))
                star, mu = _gram_schmidt(cols)
        if norm_sq(star[k]) >= (Rat(3, 4) - mu[k][k - 1] ** 2) * norm_sq(star[k - 1]):
            k += 1
        else:
            col_swap(k, k - 1)
            star, mu = _gram_schmidt(cols)
            k = max(k - 1, 1)

    reduced = [[cols[j][i] for j in range(p)] for i in range(p)]
    return LatticeBasis(reduced), UnimodularCert(u, uinv)


def babai_nearest_plane(reduced: LatticeBasis, target: Vector) -> Vector:
    """Nearest-plane rounding of target in the (reduced) basis; a lattice point."""
    cols = reduced.columns()
    star, _mu = _gram_schmidt(cols)
    t = list(target)
    z = [ZERO] * reduced.p
    for i in range(reduced.p - 1, -1, -1):
        coeff = rround(dot(t, star[i]) / norm_sq(star[i]))
        t = [a - coeff * b for a, b in zip(t, cols[i])]
        z = [a + coeff * b for a, b in zip(z, cols[i])]
    return z


LATTICE_POINT = "lattice_point"
THIN_DIRECTION = "thin_direction"


@dataclass(frozen=True)
class FlatnessOutcome:
    tag: str
    z: Optional[Vector] = None  # lattice point inside the ball
    d: Optional[Vector] = None  # dual direction with bounded width


def width_bound_sq(p: int) -> Rat:
    """(p * 2^(p(p-1)/4))^2 = p^2 * 2^(p(p-1)/2), an exact rational."""
    return Rat(p * p * (1 << (p * (p - 1) // 2)))


def flatness(a: Vector, r, basis: LatticeBasis) -> FlatnessOutcome:
    """Either a lattice point in B(a, r), or a thin integral direction.

    The returned direction d has B^T d integral and satisfies
    4 r^2 |d|^2 <= (p 2^(p(p-1)/4))^2 exactly; among the dual rows of the
    reduced basis the one of smallest norm is chosen.
    """
    r = Rat(r)
    if r < 0:
        raise PreconditionError("flatness needs r >= 0")
    if len(a) != basis.p:
        raise DimensionError("flatness: center has wrong dimension")
    reduced, _u = lll_reduce(basis)
    z = babai_nearest_plane(reduced, a)
    if norm_sq(vec_sub(z, a)) <= r * r:
        return FlatnessOutcome(LATTICE_POINT, z=list(z))
    dual_rows = inverse(reduced.b_mat)
    best = min(dual_rows, key=norm_sq)
    p = basis.p
    if 4 * r * r * norm_sq(best) > width_bound_sq(p):
        raise AssertionError("flatness width bound violated; LLL reduction broken")
    return FlatnessOutcome(THIN_DIRECTION, d=list(best))
