"""Mixed integer convex quadratic programming: feasibility, boundedness,
exact optimization, and the enumeration oracle.

The feasibility recursion: box the set, reduce it to a full-dimensional
convex quadratic set, sandwich the projection onto the integer variables
between two balls, and ask the lattice for either an integer point in the
inner ball (lift it by a slice QP) or a thin integer direction (enumerate
the few hyperplane slices it allows, each with at least one fewer integer
variable).  Work grows with the number of integer variables, not with the
count of continuous ones.

Optimization runs the feasibility recursion on level sets of the objective.
Once a candidate value v is in hand (the slice-QP optimum of the best known
integer assignment), a single probe at v - 1/(2 D^2) decides optimality,
where D bounds the denominator of every candidate value; midpoint probes
tighten the bracket when the candidate improves too slowly.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .bounds import magnitude_bound
from .cqs import (
    ConvexQuadraticSet,
    _fulldim_reduce_cqs_impl,
    cqs_bit_size,
    inner_polytope,
    quadratic_feasible_point,
)
from .diophantine import Empty, parametrize_mixed_integer_solutions
from .errors import DimensionError, PreconditionError
from .lattice import LATTICE_POINT, LatticeBasis, flatness
from .linalg import Vector, dot, inverse, mat_vec, norm_sq
from .polyhedra import Polyhedron, lp_min
from .qp import QpObjective, descent_ray, qp_min, qp_min_on_slice
from .rational import (
    Rat,
    ZERO,
    denom,
    is_integral,
    numer,
    rceil,
    rfloor,
    sqrt_upper_bound,
)
from .simplex import INFEASIBLE, OPTIMAL
from .rounding import ceil_sqrt, sandwich

OPTIMAL_STATUS = "optimal"
INFEASIBLE_STATUS = "infeasible"
UNBOUNDED_STATUS = "unbounded"


@dataclass
class MicqpInstance:
    """min x^T H x + h^T x over {W x <= w}, first p variables integer.

    declared_box, when present, promises: if the feasible region has a mixed
    integer point, it has one inside the box, and when the problem is bounded
    an optimal one inside the box.  It is a search certificate, not a
    constraint; without it the symbolic magnitude bounds are used.
    """

    obj: QpObjective
    poly: Polyhedron
    declared_box: Optional[Tuple[Vector, Vector]] = None

    def __post_init__(self):
        if self.obj.n != self.poly.n:
            raise DimensionError("objective and constraints disagree on n")
        if self.declared_box is not None:
            lo, hi = self.declared_box
            if len(lo) != self.poly.n or len(hi) != self.poly.n:
                raise DimensionError("declared box has wrong dimension")
            if any(a > b for a, b in zip(lo, hi)):
                raise DimensionError("declared box has lo > hi")


@dataclass
class SolveStatus:
    status: str
    x: Optional[Vector] = None          # optimal point
    value: Optional[Rat] = None         # exact optimal value
    point: Optional[Vector] = None      # feasible point on unbounded instances
    ray: Optional[Vector] = None        # certified descent ray

    @property
    def is_optimal(self):
        return self.status == OPTIMAL_STATUS


@dataclass
class Trace:
    """Recursion telemetry: one entry per feasibility node."""

    nodes: List[dict] = field(default_factory=list)

    def record(self, **kw):
        self.nodes.append(kw)

    def max_depth(self) -> int:
        return max((n["depth"] for n in self.nodes), default=0)

    def band_entries(self):
        return [n for n in self.nodes if n.get("event") == "thin_direction"]

    def as_dict(self):
        def plain(v):
            if isinstance(v, (int, str, bool)) or v is None:
                return v
            return str(v)

        return {"nodes": [{k: plain(v) for k, v in node.items()} for node in self.nodes]}


def gamma_band_bound_sq(p: int) -> Rat:
    """(4 ceil_sqrt(p)^3 p 2^(p(p-1)/4))^2, exact (the exponent doubles)."""
    k = ceil_sqrt(p)
    base = 4 * k ** 3 * p
    return Rat(base * base * (1 << (p * (p - 1) // 2)))


def _merge_duplicate_rows(poly: Polyhedron) -> Polyhedron:
    """Identical constraint rows keep only their tightest right-hand side."""
    seen = {}
    order = []
    for row, b in zip(poly.w_mat, poly.w_rhs):
        key = tuple(row)
        if key in seen:
            seen[key] = min(seen[key], b)
        else:
            seen[key] = b
            order.append(key)
    rows = [list(k) for k in order]
    rhs = [seen[k] for k in order]
    return Polyhedron(rows, rhs, poly.p, _n_hint=poly.n)


def _boxed(q: ConvexQuadraticSet, declared_box) -> ConvexQuadraticSet:
    from .rounding import cqs_is_bounded

    if declared_box is not None:
        lo, hi = declared_box
        poly = _merge_duplicate_rows(q.poly.with_box(lo, hi))
        return ConvexQuadraticSet(poly, q.obj, q.eta)
    if cqs_is_bounded(q):
        return q
    warnings.warn(
        "no declared box; appending the symbolic magnitude bound "
        "(arithmetic on numbers with ~2^(2^5 s^2) bits)",
        RuntimeWarning,
        stacklevel=3,
    )
    bound = magnitude_bound(cqs_bit_size(q), 4)
    return ConvexQuadraticSet(
        q.poly.with_box([-bound] * q.n, [bound] * q.n), q.obj, q.eta
    )


def feasibility(
    q: ConvexQuadraticSet,
    declared_box: Optional[Tuple[Vector, Vector]] = None,
    trace: Optional[Trace] = None,
) -> Optional[Vector]:
    """A point of Q with integer leading coordinates, or None if none exists."""
    return _feas_rec(_boxed(q, declared_box), 0, trace)


def _feas_rec(q: ConvexQuadraticSet, depth: int, trace: Optional[Trace]) -> Optional[Vector]:
    on_descent = None
    if trace is not None:
        on_descent = lambda dim: trace.record(depth=depth, p=q.p,
                                              event="face_descent", ambient_dim=dim)
    out = _fulldim_reduce_cqs_impl(q, bounded_hint=True, on_descent=on_descent)
    if isinstance(out, Empty):
        if trace is not None:
            trace.record(depth=depth, p=q.p, event="empty_after_reduction")
        return None
    tau, q2, face_min = out.tau, out.q, out.face_min
    p2 = q2.p

    if p2 == 0:
        point = quadratic_feasible_point(q2.obj, q2.poly, q2.eta, bounded_hint=True)
        assert point is not None, "full-dimensional reduced set cannot be empty"
        if trace is not None:
            trace.record(depth=depth, p=q.p, event="continuous")
        return tau.apply(point)

    inner = inner_polytope(q2, _face_min=face_min, bounded_hint=True)
    sw = sandwich(q2, p2, inner=inner, check=False)
    outcome = flatness(sw.a, sw.r, LatticeBasis(sw.b_mat))

    if outcome.tag == LATTICE_POINT:
        y = mat_vec(inverse(sw.b_mat), outcome.z)
        assert all(is_integral(v) for v in y)
        point = quadratic_feasible_point(
            q2.obj, q2.poly.with_first_coords_fixed(y), q2.eta, bounded_hint=True
        )
        assert point is not None, "inner-ball lattice point must lift"
        if trace is not None:
            trace.record(depth=depth, p=q.p, event="lattice_point")
        return tau.apply(point)

    # thin direction: every mixed-integer point lies on one of few hyperplanes
    d = outcome.d
    c_int = [dot([sw.b_mat[i][j] for i in range(p2)], d) for j in range(p2)]
    assert all(is_integral(v) for v in c_int)
    da = dot(d, sw.a)
    radius_term = sw.big_r * sqrt_upper_bound(norm_sq(d))
    gamma_lo = rceil(da - radius_term)
    gamma_hi = rfloor(da + radius_term)
    count = max(0, gamma_hi - gamma_lo + 1)
    if trace is not None:
        trace.record(
            depth=depth,
            p=q.p,
            event="thin_direction",
            band_count=count,
            band_bound_sq=gamma_band_bound_sq(p2),
        )
    c_ext = list(c_int) + [ZERO] * (q2.n - p2)
    for gamma in range(gamma_lo, gamma_hi + 1):
        param = parametrize_mixed_integer_solutions([c_ext], [Rat(gamma)], p2)
        if isinstance(param, Empty):
            continue
        assert param.p_prime <= p2 - 1
        sub = _feas_rec(q2.map_through(param), depth + 1, trace)
        if sub is not None:
            return tau.apply(param.apply(sub))
    return None


@dataclass
class BoundednessResult:
    unbounded: bool
    point: Optional[Vector] = None
    ray: Optional[Vector] = None


def boundedness(
    inst: MicqpInstance,
    feasible_point: Optional[Vector] = None,
    trace: Optional[Trace] = None,
) -> BoundednessResult:
    """Unbounded iff a mixed-integer feasible point and a descent ray coexist.

    On an infeasible instance the answer is Bounded (vacuously); callers
    report infeasibility first.
    """
    x = feasible_point
    if x is None:
        x = feasibility(_milp_cqs(inst.poly), inst.declared_box, trace)
        if x is None:
            return BoundednessResult(False)
    ray = descent_ray(inst.obj, inst.poly)
    if ray is None:
        return BoundednessResult(False)
    return BoundednessResult(True, point=x, ray=ray)


def _milp_cqs(poly: Polyhedron) -> ConvexQuadraticSet:
    n = poly.n
    zero = QpObjective([[ZERO] * n for _ in range(n)], [ZERO] * n)
    return ConvexQuadraticSet(poly, zero, ZERO)


def _denominator_bound(inst: MicqpInstance) -> int:
    """Integer D with: every candidate optimal value has denominator <= D.

    Candidate values are slice-QP optima.  Their points solve KKT systems
    [2H A^T; A 0] x = rhs with A drawn from rows of W and unit pin rows, so
    after scaling every row by the global lcm L of all data denominators the
    system is integer, Hadamard bounds its determinant by (2n Amax^2)^n, and
    Cramer bounds every point denominator by that.  The value q(x*) then has
    denominator at most lcm(H, h denominators) times the point bound squared.
    """
    from math import lcm

    n = inst.poly.n
    ell_obj = 1
    for row in inst.obj.h_mat:
        for v in row:
            ell_obj = lcm(ell_obj, denom(2 * v))
    for v in inst.obj.h_vec:
        ell_obj = lcm(ell_obj, denom(v))
    ell = ell_obj
    for row, b in zip(inst.poly.w_mat, inst.poly.w_rhs):
        for v in row:
            ell = lcm(ell, denom(v))
        ell = lcm(ell, denom(b))
    amax = ell  # unit pin rows scale to L
    for row in inst.obj.h_mat:
        for v in row:
            amax = max(amax, abs(numer(2 * v)) * (ell // denom(2 * v)))
    for row in inst.poly.w_mat:
        for v in row:
            amax = max(amax, abs(numer(v)) * (ell // denom(v)))
    d_point = (2 * n * amax * amax) ** max(1, n)
    return ell_obj * d_point * d_point


def optimize(inst: MicqpInstance, trace: Optional[Trace] = None) -> SolveStatus:
    """Accurate solve: feasibility, boundedness, then the exact optimum."""
    x_feas = feasibility(_milp_cqs(inst.poly), inst.declared_box, trace)
    if x_feas is None:
        return SolveStatus(INFEASIBLE_STATUS)
    ray = descent_ray(inst.obj, inst.poly)
    if ray is not None:
        return SolveStatus(UNBOUNDED_STATUS, point=x_feas, ray=ray)

    p = inst.poly.p
    if p == 0:
        cont = qp_min(inst.obj, inst.poly, check_psd=False)
        assert cont.is_optimal
        return SolveStatus(OPTIMAL_STATUS, x=cont.x, value=cont.value)

    cont = qp_min(inst.obj, inst.poly, check_psd=False, bounded_hint=True)
    assert cont.is_optimal, "no descent ray means the continuous problem is bounded"
    lo = cont.value

    best = qp_min_on_slice(inst.obj, inst.poly, x_feas[:p], check_psd=False,
                           bounded_hint=True)
    assert best.is_optimal
    x_best, v = best.x, best.value

    dbound = _denominator_bound(inst)
    gap = Rat(1, 2 * dbound * dbound)
    min_spacing = Rat(1, dbound * dbound)
    improvements = 0
    while v > lo:
        if v - lo < min_spacing:
            break  # only one candidate value fits in (lo, v]
        probe_at = v - gap
        if improvements and improvements % 8 == 0:
            midpoint = (lo + v) / 2
            if midpoint < probe_at:
                probe_at = midpoint
        found = feasibility(
            ConvexQuadraticSet(inst.poly, inst.obj, probe_at),
            inst.declared_box,
            trace,
        )
        if found is None:
            if probe_at == v - gap:
                break  # no candidate below v: v is the optimum
            lo = probe_at
            continue
        improved = qp_min_on_slice(inst.obj, inst.poly, found[:p], check_psd=False,
                                   bounded_hint=True)
        assert improved.is_optimal and improved.value <= probe_at
        x_best, v = improved.x, improved.value
        improvements += 1
    return SolveStatus(OPTIMAL_STATUS, x=x_best, value=v)


def oracle_optimize(inst: MicqpInstance) -> SolveStatus:
    """Brute force over all integer assignments inside the declared box.

    Requires declared_box.  Scans assignments lexicographically, so ties
    resolve to the smallest integer part.
    """
    if inst.declared_box is None:
        raise PreconditionError("oracle_optimize requires a declared box")
    p = inst.poly.p
    if p == 0:
        res = qp_min(inst.obj, inst.poly, check_psd=False)
        if res.status == INFEASIBLE:
            return SolveStatus(INFEASIBLE_STATUS)
        if res.status == OPTIMAL:
            return SolveStatus(OPTIMAL_STATUS, x=res.x, value=res.value)
        return SolveStatus(UNBOUNDED_STATUS, point=res.point, ray=res.ray)

    lo, hi = inst.declared_box
    ranges = [range(rceil(lo[i]), rfloor(hi[i]) + 1) for i in range(p)]
    feasible_slices = []
    witness = None
    for assign in itertools.product(*ranges):
        pins = [Rat(v) for v in assign]
        probe = lp_min([ZERO] * inst.poly.n, inst.poly.with_first_coords_fixed(pins))
        if probe.status != INFEASIBLE:
            feasible_slices.append(pins)
            if witness is None:
                witness = probe.x
    if not feasible_slices:
        return SolveStatus(INFEASIBLE_STATUS)
    ray = descent_ray(inst.obj, inst.poly)
    if ray is not None:
        return SolveStatus(UNBOUNDED_STATUS, point=witness, ray=ray)
    best_x, best_v = None, None
    for pins in feasible_slices:
        res = qp_min_on_slice(inst.obj, inst.poly, pins, check_psd=False,
                              bounded_hint=True)
        assert res.is_optimal
        if best_v is None or res.value < best_v:
            best_x, best_v = res.x, res.value
    return SolveStatus(OPTIMAL_STATUS, x=best_x, value=best_v)
