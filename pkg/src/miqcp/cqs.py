"""Convex quadratic sets: classification and full-dimensional reduction.

A convex quadratic set Q is a polyhedron intersected with one convex
quadratic inequality.  Writing eta_bar for the minimum of the quadratic
over the polyhedron and eta_tilde for its minimum over all of space, Q
falls into exactly one of: empty (eta_bar > eta), full-dimensional
(eta_bar < eta), contained in the stationary affine subspace
(eta_bar = eta_tilde = eta), or contained in a proper tangent face of the
polyhedron (eta_tilde < eta_bar = eta).  The reduction walks tangent faces
until the full-dimensional case is reached, composing mixed-integer
preserving affine maps along the way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .bounds import magnitude_bound, scaled_integer_system_size
from .diophantine import EMPTY, AffineParam, Empty, identity_param
from .errors import DimensionError, PreconditionError
from .linalg import Matrix, Vector, dot, vec_add, vec_scale
from .polyhedra import (
    Polyhedron,
    _fulldim_probe,
    fulldim_reduce_polyhedron,
    implicit_equalities,
)
from .qp import QpObjective, QpResult, qp_min
from .rational import Rat, ZERO, ONE, denom, numer, rfloor, rround, size_of_seq
from .simplex import INFEASIBLE


@dataclass
class ConvexQuadraticSet:
    """{x : W x <= w, x^T H x + h^T x <= eta} with leading integer variables."""

    poly: Polyhedron
    obj: QpObjective
    eta: Rat

    def __post_init__(self):
        if self.obj.n != self.poly.n:
            raise DimensionError("quadratic dimension != polyhedron dimension")
        self.eta = Rat(self.eta)

    @property
    def n(self) -> int:
        return self.poly.n

    @property
    def p(self) -> int:
        return self.poly.p

    def contains(self, x: Vector) -> bool:
        return self.poly.contains(x) and self.obj.value(x) <= self.eta

    def map_through(self, tau: AffineParam) -> "ConvexQuadraticSet":
        """Substitute x = xbar + M x'; eta' = eta - q(xbar) keeps the set exact."""
        return ConvexQuadraticSet(
            self.poly.map_through(tau),
            self.obj.map_through(tau),
            self.eta - self.obj.value(tau.xbar),
        )


FULL_DIM = "full_dim"
LOW_DIM_AFFINE = "low_dim_affine"
LOW_DIM_FACE = "low_dim_face"
LOW_DIM_POLY = "low_dim_poly"
EMPTY_SET = "empty_set"


def quadratic_feasible_point(
    obj: QpObjective, poly: Polyhedron, eta, bounded_hint: bool = False
) -> Optional[Vector]:
    """A point of {x in poly : q(x) <= eta}, or None (exact decision).

    Minimizes q over the polyhedron; when that is unbounded below, walks the
    certified descent ray (H r = 0, h.r <= -1) far enough to clear eta.
    """
    res = qp_min(obj, poly, check_psd=False, bounded_hint=bounded_hint)
    if res.status == INFEASIBLE:
        return None
    if res.is_optimal:
        return res.x if res.value <= eta else None
    point, ray = res.point, res.ray
    gap = obj.value(point) - eta
    lam = ZERO if gap <= 0 else Rat(rround(gap) + 1)
    out = vec_add(point, vec_scale(lam, ray))
    return out


@dataclass
class FulldimCertificate:
    tag: str
    polytope: Optional[Polyhedron] = None      # full_dim: polytope inside Q
    eq_rows: Optional[Matrix] = None           # low_dim_affine: 2H x = -h
    eq_rhs: Optional[Vector] = None
    face: Optional[Polyhedron] = None          # low_dim_face: containing face
    implicit_rows: Optional[List[int]] = None  # low_dim_poly: P's implicit equalities


def stationary_affine_subspace(obj: QpObjective) -> Tuple[Matrix, Vector]:
    """The linear system 2 H x = -h (set of global minima of the quadratic)."""
    rows = [[2 * v for v in row] for row in obj.h_mat]
    rhs = [-v for v in obj.h_vec]
    return rows, rhs


def _round_to_grid(x: Vector, frac_bits: int) -> Vector:
    scale = 1 << frac_bits
    return [Rat(rround(v * scale), scale) for v in x]


def _small_witness(q: ConvexQuadraticSet, xbar: Vector) -> Vector:
    """A feasible point with q-value < eta and small bit size, if one is easy.

    The inner-cube construction only needs some feasible point with strictly
    slack quadratic; a coarser witness gives a much larger cube because the
    cube radius divides by 2^size(witness).
    """
    probe = _fulldim_probe(q.poly)
    candidates = []
    if probe.point is not None and q.obj.value(probe.point) < q.eta:
        mid = vec_scale(Rat(1, 2), vec_add(xbar, probe.point))
        candidates.extend([probe.point, mid])
    best = xbar
    best_size = size_of_seq(xbar)
    for cand in candidates:
        for bits in (0, 2, 4, 8, 16, 24):
            rounded = _round_to_grid(cand, bits)
            if q.poly.contains(rounded) and q.obj.value(rounded) < q.eta:
                s = size_of_seq(rounded)
                if s < best_size:
                    best, best_size = rounded, s
                break
        s = size_of_seq(cand)
        if s < best_size and q.poly.contains(cand) and q.obj.value(cand) < q.eta:
            best, best_size = cand, s
    return best


def cqs_bit_size(q: ConvexQuadraticSet) -> int:
    return scaled_integer_system_size(
        [q.poly.w_mat, q.obj.h_mat], [q.poly.w_rhs, q.obj.h_vec], [q.eta]
    )


def theoretical_box(q: ConvexQuadraticSet, exponent_class: int = 4):
    """Symbolic +-2^(2^class+1 s^2) coordinate box (no declared box given)."""
    bound = magnitude_bound(cqs_bit_size(q), exponent_class)
    n = q.n
    return [-bound] * n, [bound] * n


def inner_polytope(
    q: ConvexQuadraticSet,
    declared_box: Optional[Tuple[Vector, Vector]] = None,
    _face_min: Optional[QpResult] = None,
    bounded_hint: bool = False,
) -> Polyhedron:
    """A full-dimensional polytope (P intersected with a cube) inside Q.

    Requires P full-dimensional and min q over P strictly below eta.  The
    cube radius delta comes from an exact Lipschitz bound for the quadratic
    on [-beta, beta]^n; when the minimum over P is -infinity the witness is
    re-minimized over the declared box (or the symbolic magnitude box).
    """
    poly, obj, eta = q.poly, q.obj, q.eta
    n = q.n
    if n == 0:
        raise PreconditionError("inner_polytope: zero-dimensional set")
    if obj.is_zero_quadratic() and all(v == 0 for v in obj.h_vec):
        # the quadratic is identically zero: Q is the polyhedron itself
        if eta < 0:
            raise PreconditionError("inner_polytope: identically-zero quadratic, eta < 0")
        probe = _fulldim_probe(poly)
        if probe.status != "full_dim":
            raise PreconditionError("inner_polytope: P is not full-dimensional")
        center = probe.point
        return poly.with_box([v - 1 for v in center], [v + 1 for v in center])
    res = _face_min or qp_min(obj, poly, check_psd=False, bounded_hint=bounded_hint)
    if res.status == INFEASIBLE:
        raise PreconditionError("inner_polytope: polyhedron is empty")
    if res.is_optimal:
        if res.value >= eta:
            raise PreconditionError("inner_polytope: min over P is not below eta")
        xbar = res.x
    else:
        lo, hi = declared_box if declared_box is not None else theoretical_box(q, 4)
        boxed = poly.with_box(lo, hi)
        res2 = qp_min(obj, boxed, check_psd=False)
        if not res2.is_optimal or res2.value >= eta:
            raise PreconditionError(
                "inner_polytope: declared box does not contain a point below eta"
            )
        xbar = res2.x
    xbar = _small_witness(q, xbar)
    qval = obj.value(xbar)
    alpha = Rat(1 << size_of_seq([v for row in obj.h_mat for v in row] + list(obj.h_vec)))
    beta = Rat(1 << size_of_seq(xbar)) + 1
    lip = 2 * alpha * beta * n * (n + 2)
    delta = min(ONE, (eta - qval) / lip)
    delta = _enlarge_cube(q, xbar, delta)
    lo_box = [v - delta for v in xbar]
    hi_box = [v + delta for v in xbar]
    return poly.with_box(lo_box, hi_box)


def _enlarge_cube(q: ConvexQuadraticSet, xbar: Vector, delta):
    """Largest delta * 2^k <= 1 whose cube around xbar stays inside the
    quadratic level set.

    The maximum of the convex quadratic over a box sits at a box vertex, so
    checking the 2^n vertices certifies the whole cube; containment is
    monotone in the radius, so binary search applies.  The Lipschitz delta
    stays as the guaranteed floor.
    """
    import itertools

    n = q.n
    if n > 12 or delta >= 1:
        return delta
    inv = ONE / delta
    k_max = (numer(inv) // denom(inv)).bit_length() - 1
    if k_max <= 0:
        return delta

    def cube_ok(rad):
        for signs in itertools.product((-1, 1), repeat=n):
            vertex = [x + s * rad for x, s in zip(xbar, signs)]
            if q.obj.value(vertex) > q.eta:
                return False
        return True

    lo_k, hi_k = 0, k_max
    while lo_k < hi_k:
        mid = (lo_k + hi_k + 1) // 2
        if cube_ok(delta * (1 << mid)):
            lo_k = mid
        else:
            hi_k = mid - 1
    best = delta * (1 << lo_k)
    # shrink to a nearby dyadic radius: containment is monotone, so any
    # radius in [best/2, best] is still certified, and a small denominator
    # keeps every downstream subproblem small
    inv_best = ONE / best
    j = max(1, (numer(inv_best) // denom(inv_best)).bit_length() + 1)
    dyadic = Rat(rfloor(best * (1 << j)), 1 << j)
    if dyadic > 0 and cube_ok(dyadic):
        return dyadic
    return best


def tangent_face(
    q: ConvexQuadraticSet,
    _face_min: Optional[QpResult] = None,
    _free_min: Optional[QpResult] = None,
) -> Polyhedron:
    """The proper face of P containing Q when min over P equals eta.

    The supporting hyperplane is grad q(xbar)^T (x - xbar) = 0 at a
    minimizer xbar of q over P; for H = 0 it is h^T x = eta.  The face is
    returned as P's system with its tight rows set to equality.
    """
    poly, obj, eta = q.poly, q.obj, q.eta
    probe = _fulldim_probe(poly)
    if probe.status != "full_dim":
        raise PreconditionError("tangent_face: P must be full-dimensional")
    res = _face_min or qp_min(obj, poly, check_psd=False)
    if not res.is_optimal or res.value != eta:
        raise PreconditionError("tangent_face: min over P must equal eta")
    if obj.is_zero_quadratic():
        normal, offset = list(obj.h_vec), eta
    else:
        free = _free_min or qp_min(obj, Polyhedron([], [], _n_hint=q.n), check_psd=False)
        if free.is_optimal and free.value == eta:
            raise PreconditionError("tangent_face: unconstrained min equals eta")
        xbar = res.x
        normal = obj.gradient(xbar)
        offset = dot(normal, xbar)
        if all(v == 0 for v in normal):
            raise AssertionError("zero gradient contradicts eta_tilde < eta")
    hyper = poly.with_equality(list(normal), offset)
    tight = implicit_equalities(hyper)
    own = [i for i in tight if i < poly.m]
    face_rows = [[-v for v in poly.w_mat[i]] for i in own]
    face_rhs = [-poly.w_rhs[i] for i in own]
    return poly.with_rows(face_rows, face_rhs)


def classify_fulldim(
    q: ConvexQuadraticSet, declared_box: Optional[Tuple[Vector, Vector]] = None
) -> FulldimCertificate:
    """Three-way classification with a checkable certificate per case."""
    poly, obj, eta = q.poly, q.obj, q.eta
    probe = _fulldim_probe(poly)
    if probe.status == "empty":
        return FulldimCertificate(EMPTY_SET)
    if obj.is_zero_quadratic() and all(v == 0 for v in obj.h_vec):
        # identically-zero quadratic: Q is P itself
        if eta < 0:
            return FulldimCertificate(EMPTY_SET)
        if probe.status == "full_dim":
            return FulldimCertificate(FULL_DIM, polytope=inner_polytope(q))
        return FulldimCertificate(
            LOW_DIM_POLY, implicit_rows=implicit_equalities(poly, probe)
        )
    face_min = qp_min(obj, poly, check_psd=False)
    eta_bar_finite = face_min.is_optimal
    if eta_bar_finite and face_min.value > eta:
        return FulldimCertificate(EMPTY_SET)
    if eta_bar_finite and face_min.value == eta:
        free_min = qp_min(obj, Polyhedron([], [], _n_hint=q.n), check_psd=False)
        if free_min.is_optimal and free_min.value == eta:
            rows, rhs = stationary_affine_subspace(obj)
            return FulldimCertificate(LOW_DIM_AFFINE, eq_rows=rows, eq_rhs=rhs)
        if probe.status == "full_dim":
            face = tangent_face(q, _face_min=face_min, _free_min=free_min)
            return FulldimCertificate(LOW_DIM_FACE, face=face)
        return FulldimCertificate(
            LOW_DIM_POLY, implicit_rows=implicit_equalities(poly, probe)
        )
    # eta_bar < eta (possibly -infinity): Q nonempty
    if probe.status != "full_dim":
        return FulldimCertificate(
            LOW_DIM_POLY, implicit_rows=implicit_equalities(poly, probe)
        )
    polytope = inner_polytope(q, declared_box, _face_min=face_min)
    return FulldimCertificate(FULL_DIM, polytope=polytope)


@dataclass
class _ReduceOutcome:
    tau: AffineParam
    q: ConvexQuadraticSet
    face_min: Optional[QpResult]  # min of the reduced quadratic over the reduced P


def _fulldim_reduce_cqs_impl(
    q: ConvexQuadraticSet,
    bounded_hint: bool = False,
    on_descent=None,
) -> Union[Empty, _ReduceOutcome]:
    tau_acc = identity_param(q.n, q.p)
    cur = q
    for _ in range(q.n + 2):
        if cur.obj.is_zero_quadratic():
            # the quadratic degenerates to one linear row; reduce as a polyhedron
            aug = cur.poly.with_rows([list(cur.obj.h_vec)], [cur.eta])
            out = fulldim_reduce_polyhedron(aug)
            if isinstance(out, Empty):
                return EMPTY
            tau2, p2 = out
            q2 = ConvexQuadraticSet(p2, cur.obj.map_through(tau2),
                                    cur.eta - cur.obj.value(tau2.xbar))
            return _ReduceOutcome(tau_acc.compose(tau2), q2, None)

        out = fulldim_reduce_polyhedron(cur.poly)
        if isinstance(out, Empty):
            return EMPTY
        tau1, f_red = out
        cur = ConvexQuadraticSet(
            f_red, cur.obj.map_through(tau1), cur.eta - cur.obj.value(tau1.xbar)
        )
        tau_acc = tau_acc.compose(tau1)

        if cur.obj.is_zero_quadratic():
            continue  # substitution may have killed H; restart on the new face

        face_min = qp_min(cur.obj, cur.poly, check_psd=False, bounded_hint=bounded_hint)
        eta_bar_finite = face_min.is_optimal
        if eta_bar_finite and face_min.value > cur.eta:
            return EMPTY
        if not eta_bar_finite or face_min.value < cur.eta:
            return _ReduceOutcome(tau_acc, cur, face_min)

        free_min = qp_min(cur.obj, Polyhedron([], [], _n_hint=cur.n), check_psd=False)
        if free_min.is_optimal and free_min.value == cur.eta:
            # Q = F intersected with the stationary subspace; finish as polyhedron
            rows, rhs = stationary_affine_subspace(cur.obj)
            sys_poly = cur.poly
            for row, b in zip(rows, rhs):
                sys_poly = sys_poly.with_equality(row, b)
            out2 = fulldim_reduce_polyhedron(sys_poly)
            if isinstance(out2, Empty):
                return EMPTY
            tau2, p2 = out2
            q2 = ConvexQuadraticSet(p2, cur.obj.map_through(tau2),
                                    cur.eta - cur.obj.value(tau2.xbar))
            return _ReduceOutcome(tau_acc.compose(tau2), q2, None)

        # tangent-face descent: dimension strictly decreases
        face = tangent_face(cur, _face_min=face_min, _free_min=free_min)
        if on_descent is not None:
            on_descent(cur.n)
        cur = ConvexQuadraticSet(face, cur.obj, cur.eta)
    raise AssertionError("face descent failed to terminate within n iterations")


def fulldim_reduce_cqs(
    q: ConvexQuadraticSet, bounded_hint: bool = False
) -> Union[Empty, Tuple[AffineParam, ConvexQuadraticSet]]:
    """Empty, or tau and a full-dimensional Q' with Q = tau(Q') and
    mixed-integer points in bijection."""
    out = _fulldim_reduce_cqs_impl(q, bounded_hint=bounded_hint)
    if isinstance(out, Empty):
        return EMPTY
    return out.tau, out.q
