"""Exact two-phase primal simplex with Bland's rule.

Solves min c^T x over {x : W x <= w} with x free, entirely in rational
arithmetic.  Returns exact optima with dual certificates, exact
unboundedness rays, and Farkas certificates on infeasibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DimensionError
from .linalg import Matrix, Vector, dot
from .rational import Rat, ZERO, ONE

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LpResult:
    status: str
    x: Optional[Vector] = None
    value: Optional[Rat] = None
    dual: Optional[Vector] = None     # mu >= 0 with c + W^T mu = 0 at an optimum
    ray: Optional[Vector] = None      # W ray <= 0 and c^T ray < 0 when unbounded
    farkas: Optional[Vector] = None   # mu >= 0, mu^T W = 0, mu^T w < 0 when infeasible

    @property
    def is_optimal(self):
        return self.status == OPTIMAL


def solve_lp(w_mat: Matrix, w_rhs: Vector, c: Vector) -> LpResult:
    """min c^T x s.t. W x <= w, x free in R^n."""
    m = len(w_mat)
    n = len(c)
    if any(len(row) != n for row in w_mat) or len(w_rhs) != m:
        raise DimensionError("solve_lp: inconsistent shapes")

    if m == 0:
        if all(cj == 0 for cj in c):
            return LpResult(OPTIMAL, [ZERO] * n, ZERO, dual=[])
        ray = [(-ONE if cj > 0 else (ONE if cj < 0 else ZERO)) for cj in c]
        return LpResult(UNBOUNDED, x=[ZERO] * n, ray=ray)
    if n == 0:
        if all(wi >= 0 for wi in w_rhs):
            return LpResult(OPTIMAL, [], ZERO, dual=[ZERO] * m)
        bad = next(i for i in range(m) if w_rhs[i] < 0)
        farkas = [ZERO] * m
        farkas[bad] = ONE
        return LpResult(INFEASIBLE, farkas=farkas)

    # Standard form: z = (x+, x-, s) >= 0 with rows scaled so b >= 0, plus
    # artificial variables forming the phase-1 identity basis.  The
    # artificial columns double as an explicit copy of B^-1, which is where
    # the dual values are read off.
    sigma = [(-ONE if w_rhs[i] < 0 else ONE) for i in range(m)]
    ncols = 2 * n + m
    total = ncols + m
    tab = []
    for i in range(m):
        row = [ZERO] * (total + 1)
        for j in range(n):
            v = sigma[i] * w_mat[i][j]
            row[j] = v
            row[n + j] = -v
        row[2 * n + i] = sigma[i]
        row[ncols + i] = ONE
        row[total] = sigma[i] * w_rhs[i]
        tab.append(row)
    basis = [ncols + i for i in range(m)]

    def pivot(r, jcol):
        inv = ONE / tab[r][jcol]
        rr = tab[r]
        if inv != 1:
            for j in range(total + 1):
                if rr[j] != 0:
                    rr[j] *= inv
        nz = [j for j in range(total + 1) if rr[j] != 0]
        for i in range(m):
            if i != r:
                ti = tab[i]
                f = ti[jcol]
                if f != 0:
                    for j in nz:
                        ti[j] -= f * rr[j]
        basis[r] = jcol

    def build_red(cost):
        red = cost[:] + [ZERO]
        for i in range(m):
            cb = cost[basis[i]]
            if cb != 0:
                ti = tab[i]
                for j in range(total + 1):
                    if ti[j] != 0:
                        red[j] -= cb * ti[j]
        return red

    def run(cost):
        """Bland loop over real columns; returns (status, red_row, enter_col)."""
        red = build_red(cost)
        while True:
            enter = next((j for j in range(ncols) if red[j] < 0), None)
            if enter is None:
                return OPTIMAL, red, None
            leave = None
            best = None
            for i in range(m):
                a = tab[i][enter]
                if a > 0:
                    key = (tab[i][total] / a, basis[i])
                    if best is None or key < best:
                        best = key
                        leave = i
            if leave is None:
                return UNBOUNDED, red, enter
            pivot(leave, enter)
            f = red[enter]
            if f != 0:
                rr = tab[leave]
                for j in range(total + 1):
                    if rr[j] != 0:
                        red[j] -= f * rr[j]

    # Phase 1: minimize the artificial sum.
    cost1 = [ZERO] * ncols + [ONE] * m
    status, red1, _ = run(cost1)
    assert status == OPTIMAL  # bounded below by 0
    if -red1[total] > 0:
        # y_i = 1 - red1[artificial_i]; mu = -sigma * y is a Farkas certificate
        mu = [-sigma[i] * (ONE - red1[ncols + i]) for i in range(m)]
        return LpResult(INFEASIBLE, farkas=mu)

    # Drive artificials out of the basis where possible; a row with no real
    # nonzero entry is redundant and stays inert (basic artificial at zero).
    for i in range(m):
        if basis[i] >= ncols:
            jnew = next((j for j in range(ncols) if tab[i][j] != 0), None)
            if jnew is not None:
                pivot(i, jnew)

    # Phase 2.
    cost2 = [ZERO] * (total)
    for j in range(n):
        cost2[j] = c[j]
        cost2[n + j] = -c[j]
    status, red2, enter = run(cost2)

    def current_x():
        zvals = [ZERO] * total
        for i in range(m):
            zvals[basis[i]] = tab[i][total]
        return [zvals[j] - zvals[n + j] for j in range(n)]

    if status == UNBOUNDED:
        d = [ZERO] * total
        d[enter] = ONE
        for i in range(m):
            d[basis[i]] = -tab[i][enter]
        ray = [d[j] - d[n + j] for j in range(n)]
        return LpResult(UNBOUNDED, x=current_x(), ray=ray)

    x = current_x()
    mu = [-sigma[i] * (-red2[ncols + i]) for i in range(m)]
    return LpResult(OPTIMAL, x, dot(c, x), dual=mu)
