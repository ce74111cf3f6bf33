"""Polyhedra: exact LP access, implicit equalities, full-dimensional reduction.

A polyhedron is W x <= w together with the count p of leading integer
variables.  The reduction maps a non-full-dimensional polyhedron to a
full-dimensional isomorphic one in lower dimension while preserving the
mixed-integer points, via the implicit-equality system and the diophantine
parametrization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .diophantine import (
    EMPTY,
    AffineParam,
    Empty,
    identity_param,
    parametrize_mixed_integer_solutions,
)
from .errors import DimensionError, PreconditionError
from .linalg import Matrix, Vector, dot
from .rational import Rat, ZERO, ONE
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, LpResult, solve_lp


@dataclass
class Polyhedron:
    """{x in R^n : W x <= w} with the first p variables marked integer."""

    w_mat: Matrix
    w_rhs: Vector
    p: int = 0

    def __post_init__(self):
        if self.w_mat and any(len(r) != len(self.w_mat[0]) for r in self.w_mat):
            raise DimensionError("ragged constraint matrix")
        if len(self.w_rhs) != len(self.w_mat):
            raise DimensionError("len(w) != number of rows")
        if not 0 <= self.p <= self.n:
            raise DimensionError(f"p={self.p} out of range for n={self.n}")

    @property
    def m(self) -> int:
        return len(self.w_mat)

    @property
    def n(self) -> int:
        if self.w_mat:
            return len(self.w_mat[0])
        return self._n_hint

    _n_hint: int = field(default=0, repr=False)

    def contains(self, x: Vector) -> bool:
        return all(dot(row, x) <= b for row, b in zip(self.w_mat, self.w_rhs))

    def slacks(self, x: Vector) -> Vector:
        return [b - dot(row, x) for row, b in zip(self.w_mat, self.w_rhs)]

    def with_rows(self, rows: Matrix, rhs: Vector, p: Optional[int] = None) -> "Polyhedron":
        return Polyhedron(
            [r[:] for r in self.w_mat] + [r[:] for r in rows],
            list(self.w_rhs) + list(rhs),
            self.p if p is None else p,
            _n_hint=self.n,
        )

    def with_equality(self, row: Vector, b) -> "Polyhedron":
        return self.with_rows([row, [-v for v in row]], [b, -b])

    def with_box(self, lo: Vector, hi: Vector) -> "Polyhedron":
        n = self.n
        rows, rhs = [], []
        for i in range(n):
            e_pos = [ZERO] * n
            e_pos[i] = ONE
            rows.append(e_pos)
            rhs.append(Rat(hi[i]))
            e_neg = [ZERO] * n
            e_neg[i] = -ONE
            rows.append(e_neg)
            rhs.append(-Rat(lo[i]))
        return self.with_rows(rows, rhs)

    def with_first_coords_fixed(self, values: Vector) -> "Polyhedron":
        out = self
        for i, v in enumerate(values):
            row = [ZERO] * self.n
            row[i] = ONE
            out = out.with_equality(row, Rat(v))
        return out

    def map_through(self, tau: AffineParam) -> "Polyhedron":
        """Image description {x' : W M x' <= w - W xbar}.

        Rows that map to 0 <= nonnegative are dropped; a row mapping to
        0 <= negative is kept as an explicit infeasibility witness (this
        happens when tau parametrizes a hyperplane missing the set).
        """
        rows, rhs = [], []
        for row, b in zip(self.w_mat, self.w_rhs):
            new_row = [dot(row, [tau.m[i][j] for i in range(len(row))])
                       for j in range(tau.n_prime)]
            new_b = b - dot(row, tau.xbar)
            if all(v == 0 for v in new_row) and new_b >= 0:
                continue
            rows.append(new_row)
            rhs.append(new_b)
        return Polyhedron(rows, rhs, tau.p_prime, _n_hint=tau.n_prime)


def lp_min(c: Vector, poly: Polyhedron) -> LpResult:
    """Exact min of c^T x over the polyhedron, with certificates."""
    if len(c) != poly.n:
        raise DimensionError("lp_min: objective length != n")
    return solve_lp(poly.w_mat, poly.w_rhs, c)


def recession_ray_check(poly: Polyhedron, ray: Vector) -> bool:
    """Membership of ray in the recession cone {r : W r <= 0}."""
    if len(ray) != poly.n:
        raise DimensionError("recession_ray_check: ray length != n")
    return all(dot(row, ray) <= 0 for row in poly.w_mat)


@dataclass
class _FulldimProbe:
    status: str                     # "empty" | "flat" | "full_dim"
    point: Optional[Vector] = None  # feasible point; interior when full_dim
    max_slack: Optional[Rat] = None


def _fulldim_probe(poly: Polyhedron) -> _FulldimProbe:
    """One LP (max t : Wx + t <= w) deciding empty / flat / full-dimensional."""
    n, m = poly.n, poly.m
    if m == 0:
        return _FulldimProbe("full_dim", [ZERO] * n, None)
    ext_rows = [row[:] + [ONE] for row in poly.w_mat]
    c = [ZERO] * n + [-ONE]
    res = solve_lp(ext_rows, poly.w_rhs, c)
    if res.status == UNBOUNDED:
        # push along the ray until the slack variable is >= 1
        t0, dt = res.x[n], res.ray[n]
        if dt <= 0:  # ray improves -t, so dt > 0 always
            raise AssertionError("interior LP ray does not increase slack")
        k = max(ONE, (ONE - t0) / dt)
        x = [a + k * b for a, b in zip(res.x[:n], res.ray[:n])]
        return _FulldimProbe("full_dim", x, None)
    tstar = -res.value
    if tstar > 0:
        return _FulldimProbe("full_dim", res.x[:n], tstar)
    if tstar == 0:
        return _FulldimProbe("flat", res.x[:n], tstar)
    return _FulldimProbe("empty")


def is_fulldim_polyhedron(poly: Polyhedron) -> bool:
    """True iff the polyhedron is nonempty and has no implicit equality."""
    return _fulldim_probe(poly).status == "full_dim"


def implicit_equalities(poly: Polyhedron, _probe: Optional[_FulldimProbe] = None) -> List[int]:
    """Indices i with W_i x = w_i on all of P, found by per-row LPs.

    Rows with positive slack at any discovered feasible point are pruned
    without an LP.  Raises on an empty polyhedron.
    """
    probe = _probe or _fulldim_probe(poly)
    if probe.status == "empty":
        raise PreconditionError("implicit_equalities: polyhedron is empty")
    if probe.status == "full_dim":
        return []
    candidates = set()
    for i, s in enumerate(poly.slacks(probe.point)):
        if s == 0:
            candidates.add(i)
    out = []
    for i in sorted(candidates):
        if i not in candidates:
            continue
        res = lp_min(poly.w_mat[i], poly)
        assert res.status != INFEASIBLE  # the polyhedron is nonempty
        if res.status == OPTIMAL and res.value == poly.w_rhs[i]:
            out.append(i)
        # any feasible point prunes every row it keeps slack on
        for j, s in enumerate(poly.slacks(res.x)):
            if s > 0:
                candidates.discard(j)
    return out


def fulldim_reduce_polyhedron(
    poly: Polyhedron,
) -> Union[Empty, Tuple[AffineParam, Polyhedron]]:
    """Full-dimensional reduction preserving mixed-integer points.

    Returns Empty when P has no mixed-integer point detectable from the
    implicit-equality system (including P = empty set); otherwise a map
    tau with P = tau(P') and P' full-dimensional.
    """
    probe = _fulldim_probe(poly)
    if probe.status == "empty":
        return EMPTY
    if probe.status == "full_dim":
        return identity_param(poly.n, poly.p), poly
    eq_idx = implicit_equalities(poly, probe)
    if not eq_idx:
        raise AssertionError("flat polyhedron must have an implicit equality")
    w_eq = [poly.w_mat[i] for i in eq_idx]
    rhs_eq = [poly.w_rhs[i] for i in eq_idx]
    tau = parametrize_mixed_integer_solutions(w_eq, rhs_eq, poly.p)
    if isinstance(tau, Empty):
        return EMPTY
    reduced = poly.map_through(tau)
    return tau, reduced
