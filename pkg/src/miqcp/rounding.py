"""Sandwiching the projection of a convex quadratic set between two balls.

Seeds a simplex of affinely independent projected points inside the set,
grows it with the 3/2 expansion rule until no facet can be pushed further,
and normalizes by the simplex's edge matrix.  The resulting concentric
balls B(a, r) and B(a, R) satisfy R/r <= 4 ceil(sqrt(p))^3 and sandwich
the projection of the set onto the leading p coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .cqs import (
    FULL_DIM,
    ConvexQuadraticSet,
    classify_fulldim,
    quadratic_feasible_point,
)
from .errors import PreconditionError
from .linalg import (
    Matrix,
    Vector,
    det,
    dot,
    inverse,
    mat_vec,
    null_space,
    vec_add,
)
from .polyhedra import Polyhedron, lp_min
from .rational import Rat, ZERO, ONE
from .simplex import OPTIMAL

_MAX_ESCALATION = 128
_MAX_SWEEPS = 100000


def ceil_sqrt(p: int) -> int:
    """Smallest k with k*k >= p, by integer binary search."""
    if p < 1:
        raise PreconditionError("ceil_sqrt needs p >= 1")
    lo, hi = 0, p
    while lo < hi:
        mid = (lo + hi) // 2
        if mid * mid >= p:
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass
class Simplex:
    """Full-dimensional simplex in R^p by vertices and facet inequalities.

    facets[i] = (normal, offset) supports all vertices except vertex i:
    normal . v_j = offset for j != i and normal . v_i < offset.
    """

    vertices: List[Vector]
    facets: List[Tuple[Vector, Rat]] = field(default_factory=list)

    @property
    def p(self) -> int:
        return len(self.vertices) - 1

    def edge_matrix(self) -> Matrix:
        v0 = self.vertices[0]
        return [[self.vertices[j + 1][i] - v0[i] for j in range(self.p)]
                for i in range(self.p)]

    def volume_scale(self):
        """|det of the edge matrix| (p! times the volume)."""
        return abs(det(self.edge_matrix()))

    def is_nondegenerate(self) -> bool:
        return self.volume_scale() != 0

    def check_facets(self) -> bool:
        for i, (normal, offset) in enumerate(self.facets):
            for j, v in enumerate(self.vertices):
                val = dot(normal, v)
                if j == i:
                    if not val < offset:
                        return False
                elif val != offset:
                    return False
        return True


def _primitive(normal: Vector) -> Vector:
    """Scale a rational direction to a primitive integer vector."""
    from math import gcd, lcm

    from .rational import denom, numer

    ell = lcm(*[denom(v) for v in normal])
    ints = [numer(v) * (ell // denom(v)) for v in normal]
    g = gcd(*[abs(v) for v in ints])
    if g > 1:
        ints = [v // g for v in ints]
    return [Rat(v) for v in ints]


def compute_facets(vertices: List[Vector]) -> List[Tuple[Vector, Rat]]:
    """Facet (normal, offset) opposite each vertex, from exact null spaces.

    Normals are scaled to primitive integer vectors; the expansion rule is
    scale-invariant, and small normals keep the probe subproblems small.
    """
    p = len(vertices) - 1
    facets = []
    for i in range(p + 1):
        others = [v for j, v in enumerate(vertices) if j != i]
        if p == 1:
            normal = [ONE]
        else:
            rows = [[others[j][t] - others[0][t] for t in range(p)]
                    for j in range(1, p)]
            ns = null_space(rows)
            normal = _primitive([ns[t][0] for t in range(p)])
        offset = dot(normal, others[0])
        val = dot(normal, vertices[i])
        if val == offset:
            raise PreconditionError("degenerate simplex: vertex on opposite facet")
        if val > offset:
            normal = [-v for v in normal]
            offset = -offset
        facets.append((normal, offset))
    return facets


def make_simplex(vertices: List[Vector]) -> Simplex:
    s = Simplex([list(v) for v in vertices])
    s.facets = compute_facets(s.vertices)
    return s


def cqs_is_bounded(q: ConvexQuadraticSet) -> bool:
    """Q bounded iff its recession cone {Wr <= 0, Hr = 0, h.r <= 0} is {0}."""
    n = q.n
    rows = [row[:] for row in q.poly.w_mat]
    rhs = [ZERO] * len(rows)
    for hrow in q.obj.h_mat:
        rows.append(list(hrow))
        rhs.append(ZERO)
        rows.append([-v for v in hrow])
        rhs.append(ZERO)
    rows.append(list(q.obj.h_vec))
    rhs.append(ZERO)
    for i in range(n):
        for sign in (ONE, -ONE):
            cap = [ZERO] * n
            cap[i] = sign
            probe = Polyhedron(rows + [cap], rhs + [ONE], _n_hint=n)
            c = [ZERO] * n
            c[i] = -sign
            res = lp_min(c, probe)
            assert res.status == OPTIMAL  # capped, feasible at r = 0
            if res.value < 0:
                return False
    return True


def _project(x: Vector, p: int) -> Vector:
    return list(x[:p])


def _lift_direction(c_proj: Vector, n: int) -> Vector:
    return list(c_proj) + [ZERO] * (n - len(c_proj))


def seed_simplex(
    q: ConvexQuadraticSet,
    p: int,
    inner: Optional[Polyhedron] = None,
    check: bool = True,
) -> List[Vector]:
    """p+1 points of proj_p(Q) that are affinely independent.

    Works inside a full-dimensional polytope F contained in Q, extending the
    projected set one direction at a time: minimize and maximize a lifted
    normal direction over F; at least one of the two optima must leave the
    current affine hull.
    """
    n = q.n
    if not 1 <= p <= n:
        raise PreconditionError("seed_simplex needs 1 <= p <= n")
    if check and not cqs_is_bounded(q):
        raise PreconditionError("seed_simplex: Q is unbounded")
    if inner is None:
        cert = classify_fulldim(q)
        if cert.tag != FULL_DIM:
            raise PreconditionError("seed_simplex: Q is not full-dimensional")
        inner = cert.polytope
    first = lp_min(_lift_direction([ONE], n), inner)
    assert first.status == OPTIMAL
    points = [_project(first.x, p)]
    while len(points) < p + 1:
        t = len(points) - 1
        if t == 0:
            c_proj = [ONE] + [ZERO] * (p - 1)
        else:
            rows = [[points[j][i] - points[0][i] for i in range(p)]
                    for j in range(1, t + 1)]
            ns = null_space(rows)
            c_proj = [ns[i][0] for i in range(p)]
        c_full = _lift_direction(c_proj, n)
        lo = lp_min(c_full, inner)
        hi = lp_min([-v for v in c_full], inner)
        assert lo.status == OPTIMAL and hi.status == OPTIMAL
        base = dot(c_proj, points[0])
        if dot(c_proj, _project(lo.x, p)) != base:
            points.append(_project(lo.x, p))
        elif dot(c_proj, _project(hi.x, p)) != base:
            points.append(_project(hi.x, p))
        else:
            raise AssertionError(
                "both extreme points lie in the current hull; F not full-dimensional"
            )
    return points


def _cut_feasible_point(
    q: ConvexQuadraticSet, cut_row: Vector, cut_rhs
) -> Optional[Vector]:
    """A point of Q with cut_row . x <= cut_rhs, or None (exact decision).

    Callers guarantee Q bounded (a grow precondition), so the QP skips its
    unboundedness probe.
    """
    poly = q.poly.with_rows([list(cut_row)], [cut_rhs])
    return quadratic_feasible_point(q.obj, poly, q.eta, bounded_hint=True)


def _simplify_accepted_point(
    q: ConvexQuadraticSet,
    pt: Vector,
    anchor: Optional[Vector],
    cut_row: Vector,
    cut_rhs0,
) -> Vector:
    """A small-bit-size substitute for pt, still in Q and beyond the base cut.

    Probe points are KKT solutions whose denominators compound across grow
    iterations; any point of Q with cut_row . x <= cut_rhs0 expands the
    simplex just as validly, so mix slightly toward an interior anchor and
    round to a coarse grid, verifying everything exactly.
    """
    from .rational import rround

    base = pt
    if anchor is not None:
        for theta in (Rat(1, 8), Rat(1, 64)):
            mix = [a + theta * (b - a) for a, b in zip(pt, anchor)]
            if dot(cut_row, mix) <= cut_rhs0 and q.contains(mix):
                base = mix
                break
    for bits in (4, 8, 16, 32, 64):
        scale = 1 << bits
        rounded = [Rat(rround(v * scale), scale) for v in base]
        if dot(cut_row, rounded) <= cut_rhs0 and q.contains(rounded):
            return rounded
    return pt


def grow_simplex(
    q: ConvexQuadraticSet,
    p: int,
    s0: Simplex,
    check: bool = True,
    anchor: Optional[Vector] = None,
) -> Tuple[Simplex, List]:
    """Expand s0 inside proj_p(Q) until no facet admits a 3/2 push.

    Probes both expansion sets per facet, escalating the push threshold
    geometrically so that a long run of accepted pushes costs one probe per
    doubling.  Returns the final simplex and the exact trace of edge-matrix
    determinants (each accepted push multiplies the volume by >= 3/2).
    """
    n = q.n
    if len(s0.vertices) != p + 1:
        raise PreconditionError("grow_simplex: simplex has wrong vertex count")
    vertices = [list(v) for v in s0.vertices]
    sim = make_simplex(vertices)
    if not sim.is_nondegenerate():
        raise PreconditionError("grow_simplex: seed simplex is degenerate")
    if check:
        for v in vertices:
            if _slice_membership(q, v) is None:
                raise PreconditionError("grow_simplex: seed vertex outside proj(Q)")
    vol_trace = [sim.volume_scale()]
    for _ in range(_MAX_SWEEPS):
        expanded = False
        facets = compute_facets(sim.vertices)
        for i in range(p + 1):
            normal, offset = facets[i]
            gap = offset - dot(normal, sim.vertices[i])
            found = None
            for sense in (1, -1):
                # sense +1 pushes beyond the facet, -1 pushes behind vertex i
                last_good = None
                step = Rat(3, 2) * gap
                if sense == 1:
                    base_row = _lift_direction([-v for v in normal], n)
                    base_rhs = -(offset + step)
                else:
                    base_row = _lift_direction(list(normal), n)
                    base_rhs = offset - step
                cur_step = step
                for _k in range(_MAX_ESCALATION):
                    if sense == 1:
                        cut_rhs = -(offset + cur_step)
                    else:
                        cut_rhs = offset - cur_step
                    pt = _cut_feasible_point(q, base_row, cut_rhs)
                    if pt is None:
                        break
                    last_good = pt
                    cur_step = cur_step * 2
                if last_good is not None:
                    found = _simplify_accepted_point(
                        q, last_good, anchor, base_row, base_rhs
                    )
                    break
            if found is not None:
                new_vertex = _project(found, p)
                old_scale = sim.volume_scale()
                cand = [list(v) for v in sim.vertices]
                cand[i] = new_vertex
                sim = make_simplex(cand)
                new_scale = sim.volume_scale()
                assert new_scale * 2 >= old_scale * 3, "3/2 volume law violated"
                vol_trace.append(new_scale)
                expanded = True
                break
        if not expanded:
            sim.facets = facets
            return sim, vol_trace
    raise AssertionError("grow_simplex failed to terminate; is Q bounded?")


def _slice_membership(q: ConvexQuadraticSet, y_proj: Vector) -> Optional[Vector]:
    """A witness x in Q with proj(x) = y_proj, or None (Q must be bounded)."""
    return quadratic_feasible_point(
        q.obj, q.poly.with_first_coords_fixed(y_proj), q.eta, bounded_hint=True
    )


@dataclass(frozen=True)
class SandwichResult:
    """B(a, r) <= B (proj_p Q) <= B(a, R) with B = inverse edge matrix.

    r = 1/(p + ceil_sqrt(p)) and R = 2 ceil_sqrt(p), so R/r <= 4 ceil_sqrt(p)^3.
    """

    b_mat: Matrix
    a: Vector
    r: Rat
    big_r: Rat
    simplex: Simplex


def sandwich(
    q: ConvexQuadraticSet,
    p: int,
    inner: Optional[Polyhedron] = None,
    check: bool = True,
) -> SandwichResult:
    """Two concentric balls sandwiching the normalized projection of Q."""
    if inner is None:
        cert = classify_fulldim(q)
        if cert.tag != FULL_DIM:
            raise PreconditionError("sandwich: Q is not full-dimensional")
        inner = cert.polytope
    seed = seed_simplex(q, p, inner=inner, check=check)
    from .polyhedra import _fulldim_probe

    anchor = _fulldim_probe(inner).point
    grown, _trace = grow_simplex(q, p, make_simplex(seed), check=False, anchor=anchor)
    v0 = grown.vertices[0]
    m_tilde = grown.edge_matrix()
    b_mat = inverse(m_tilde)
    k = ceil_sqrt(p)
    r = Rat(1, p + k)
    big_r = Rat(2 * k)
    a_tilde = [Rat(1, p + k)] * p
    a = vec_add(a_tilde, mat_vec(b_mat, v0))
    return SandwichResult(b_mat, a, r, big_r, grown)
