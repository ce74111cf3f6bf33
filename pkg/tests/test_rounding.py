import random

import pytest

from miqcp.cqs import ConvexQuadraticSet
from miqcp.errors import PreconditionError
from miqcp.linalg import dot, mat, mat_vec, norm_sq, vec_sub
from miqcp.polyhedra import Polyhedron
from miqcp.qp import QpObjective
from miqcp.rational import Rat, ZERO
from miqcp.rounding import (
    SandwichResult,
    Simplex,
    ceil_sqrt,
    compute_facets,
    cqs_is_bounded,
    grow_simplex,
    make_simplex,
    sandwich,
    seed_simplex,
    _slice_membership,
)

from test_polyhedra import box


def inactive_quadratic_box(lo, hi, p):
    n = len(lo)
    h_mat = [[Rat(1) if i == j else Rat(0) for j in range(n)] for i in range(n)]
    eta = Rat(sum(max(abs(a), abs(b)) ** 2 for a, b in zip(lo, hi)) + 10)
    return ConvexQuadraticSet(box(lo, hi, p=p), QpObjective(h_mat, [Rat(0)] * n), eta)


def test_ceil_sqrt_values():
    assert ceil_sqrt(1) == 1
    assert ceil_sqrt(4) == 2
    assert ceil_sqrt(5) == 3  # 2^2 < 5 <= 3^2
    for p in range(1, 200):
        k = ceil_sqrt(p)
        assert k * k >= p and (k - 1) * (k - 1) < p


def test_exact_ratio_law():
    for p in range(1, 65):
        k = ceil_sqrt(p)
        r = Rat(1, p + k)
        big_r = Rat(2 * k)
        assert big_r / r == 2 * k * (p + k)
        assert big_r / r <= 4 * k ** 3


def test_cqs_is_bounded():
    assert cqs_is_bounded(inactive_quadratic_box([0, 0], [1, 1], 1))
    ray_poly = Polyhedron(mat([[0, -1]]), [Rat(0)])  # x2 >= 0 only
    q = ConvexQuadraticSet(ray_poly, QpObjective(mat([[1, 0], [0, 0]]), [Rat(0), Rat(0)]), Rat(9))
    assert not cqs_is_bounded(q)


def test_seed_simplex_interval():
    q = inactive_quadratic_box([0, 0], [1, 1], 1)
    pts = seed_simplex(q, 1)
    assert len(pts) == 2
    assert pts[0] != pts[1]
    for y in pts:
        assert 0 <= y[0] <= 1
        assert _slice_membership(q, y) is not None


def test_seed_simplex_3d_projected_to_2d():
    q = inactive_quadratic_box([0, 0, 0], [1, 1, 1], 2)
    pts = seed_simplex(q, 2)
    assert len(pts) == 3
    sim = make_simplex(pts)
    assert sim.is_nondegenerate()


def test_seed_simplex_rejects_flat_set():
    poly = box([0, 0], [1, 1]).with_equality([Rat(1), Rat(0)], Rat(0))
    q = ConvexQuadraticSet(poly, QpObjective(mat([[1, 0], [0, 1]]), [Rat(0), Rat(0)]), Rat(9))
    with pytest.raises(PreconditionError):
        seed_simplex(q, 1)


def test_compute_facets_normalization():
    sim = make_simplex([[Rat(0), Rat(0)], [Rat(1), Rat(0)], [Rat(0), Rat(1)]])
    assert sim.check_facets()


def test_grow_interval_spec_example():
    # proj interval [0, 1]; seed [0, 1/8] grows to width >= 2/3 quickly
    q = inactive_quadratic_box([0, 0], [1, 1], 1)
    s0 = make_simplex([[Rat(0)], [Rat(1, 8)]])
    grown, trace = grow_simplex(q, 1, s0)
    width = abs(grown.vertices[1][0] - grown.vertices[0][0])
    assert width >= Rat(2, 3)
    # every accepted expansion multiplied the volume by >= 3/2
    for a, b in zip(trace, trace[1:]):
        assert b * 2 >= a * 3
    assert len(trace) - 1 <= 6  # within ceil(log_{3/2} 8) accepted expansions
    # termination bound: (3/2)^accepted * vol_0 <= vol_final
    accepted = len(trace) - 1
    assert Rat(3, 2) ** accepted * trace[0] <= trace[-1]


def test_grow_fixed_point():
    # a simplex already certified maximal stays unchanged
    q = inactive_quadratic_box([0, 0], [1, 1], 1)
    s0 = make_simplex([[Rat(0)], [Rat(1)]])
    grown, trace = grow_simplex(q, 1, s0)
    assert sorted(v[0] for v in grown.vertices) == [0, 1]
    assert len(trace) == 1


def test_grow_rejects_outside_seed():
    q = inactive_quadratic_box([0, 0], [1, 1], 1)
    s0 = make_simplex([[Rat(0)], [Rat(7)]])
    with pytest.raises(PreconditionError):
        grow_simplex(q, 1, s0)


def test_sandwich_formulas_p1():
    q = inactive_quadratic_box([0, 0], [1, 1], 1)
    res = sandwich(q, 1)
    assert res.r == Rat(1, 2)
    assert res.big_r == 2
    assert res.big_r / res.r == 4 == 4 * ceil_sqrt(1) ** 3


def test_sandwich_formula_table():
    # r and R depend only on p
    for p, (r_expect, big_expect) in {
        1: (Rat(1, 2), Rat(2)),
        4: (Rat(1, 6), Rat(4)),
    }.items():
        k = ceil_sqrt(p)
        assert Rat(1, p + k) == r_expect
        assert Rat(2 * k) == big_expect
    assert Rat(4) / Rat(1, 6) == 24 <= 32


def _ball_samples_inside(a, r, p):
    """Rational points in B(a, r): axis points on the sphere, scaled diagonal."""
    pts = []
    for i in range(p):
        for sign in (1, -1):
            z = list(a)
            z[i] = z[i] + sign * r
            pts.append(z)
    # all-ones direction scaled strictly inside: |e| = sqrt(p) <= p, use r/p
    diag = [v + r / p for v in a]
    pts.append(diag)
    return pts


def test_sandwich_inner_ball_membership_box2d():
    q = inactive_quadratic_box([0, 0], [1, 1], 2)
    res = sandwich(q, 2)
    from miqcp.linalg import inverse
    binv = inverse(res.b_mat)
    for z in _ball_samples_inside(res.a, res.r, 2):
        y = mat_vec(binv, z)
        assert _slice_membership(q, y) is not None, f"inner sample {z} escaped"


def test_sandwich_outer_ball_contains_integer_points():
    q = inactive_quadratic_box([-2, -2], [2, 2], 2)
    res = sandwich(q, 2)
    for x1 in range(-2, 3):
        for x2 in range(-2, 3):
            x = [Rat(x1), Rat(x2)]
            if q.contains(x):
                z = mat_vec(res.b_mat, x)
                assert norm_sq(vec_sub(z, res.a)) <= res.big_r ** 2


def test_sandwich_facet_certificate():
    q = inactive_quadratic_box([0, 0], [1, 1], 1)
    res = sandwich(q, 1)
    sim = res.simplex
    assert sim.check_facets()
    # certified: for each facet, all of proj(Q) is within 3/2 the facet gap
    for i, (normal, offset) in enumerate(sim.facets):
        gap = offset - dot(normal, sim.vertices[i])
        for yval in (Rat(0), Rat(1, 3), Rat(1)):
            assert abs(offset - normal[0] * yval) <= Rat(3, 2) * gap
