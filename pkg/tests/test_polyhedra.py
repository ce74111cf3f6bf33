import itertools
import random

import pytest

from miqcp.diophantine import EMPTY, AffineParam, Empty
from miqcp.errors import PreconditionError
from miqcp.linalg import det, dot, gauss_solve, mat, mat_vec
from miqcp.polyhedra import (
    Polyhedron,
    fulldim_reduce_polyhedron,
    implicit_equalities,
    is_fulldim_polyhedron,
    lp_min,
    recession_ray_check,
)
from miqcp.rational import Rat, is_integral
from miqcp.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED


def box(lo, hi, p=0):
    """Axis box in len(lo) dims."""
    n = len(lo)
    rows, rhs = [], []
    for i in range(n):
        e = [Rat(0)] * n
        e[i] = Rat(1)
        rows.append(e)
        rhs.append(Rat(hi[i]))
        e2 = [Rat(0)] * n
        e2[i] = Rat(-1)
        rows.append(e2)
        rhs.append(Rat(-Rat(lo[i])))
    return Polyhedron(rows, rhs, p)


def enumerate_vertices(poly):
    """All basic feasible points: solve every n-row subsystem, keep feasible."""
    n = poly.n
    verts = []
    for idx in itertools.combinations(range(poly.m), n):
        a = [poly.w_mat[i] for i in idx]
        b = [poly.w_rhs[i] for i in idx]
        if det(a) == 0:
            continue
        x = gauss_solve(a, b)
        if x is not None and poly.contains(x):
            verts.append(x)
    return verts


def check_dual_certificate(c, poly, res):
    assert res.status == OPTIMAL
    mu = res.dual
    assert all(v >= 0 for v in mu)
    n = poly.n
    for j in range(n):
        stat = c[j] + sum(mu[i] * poly.w_mat[i][j] for i in range(poly.m))
        assert stat == 0
    for i in range(poly.m):
        slack = poly.w_rhs[i] - dot(poly.w_mat[i], res.x)
        assert mu[i] * slack == 0
    assert poly.contains(res.x)


def test_lp_min_box_corner():
    poly = box([0], [1])
    res = lp_min([Rat(1)], poly)
    assert res.status == OPTIMAL and res.x == [0] and res.value == 0
    check_dual_certificate([Rat(1)], poly, res)


def test_lp_min_unbounded_ray():
    poly = Polyhedron(mat([[-1]]), [Rat(0)])  # x >= 0
    res = lp_min([Rat(-1)], poly)
    assert res.status == UNBOUNDED
    assert res.ray is not None and res.ray[0] > 0
    assert recession_ray_check(poly, res.ray)
    assert dot([Rat(-1)], res.ray) < 0


def test_lp_min_simplex_face():
    # min x1 + x2 over {x1 + x2 >= 1/3, x >= 0}: value 1/3 (vertex oracle)
    rows = mat([[-1, -1], [-1, 0], [0, -1]])
    rhs = [Rat(-1, 3), Rat(0), Rat(0)]
    poly = Polyhedron(rows, rhs)
    c = [Rat(1), Rat(1)]
    res = lp_min(c, poly)
    assert res.status == OPTIMAL
    assert res.value == Rat(1, 3)
    verts = enumerate_vertices(poly)
    assert res.value == min(dot(c, v) for v in verts)
    check_dual_certificate(c, poly, res)


def test_lp_min_infeasible_farkas():
    poly = Polyhedron(mat([[1], [-1]]), [Rat(0), Rat(-1)])  # x <= 0, x >= 1
    res = lp_min([Rat(1)], poly)
    assert res.status == INFEASIBLE
    mu = res.farkas
    assert all(v >= 0 for v in mu)
    assert all(
        sum(mu[i] * poly.w_mat[i][j] for i in range(poly.m)) == 0 for j in range(poly.n)
    )
    assert sum(mu[i] * poly.w_rhs[i] for i in range(poly.m)) < 0


def test_lp_randomized_against_vertex_oracle():
    rng = random.Random(17)
    solved = 0
    while solved < 80:
        n = rng.randint(1, 3)
        poly = box([-3] * n, [3] * n)
        extra_rows = [[Rat(rng.randint(-3, 3)) for _ in range(n)] for _ in range(rng.randint(0, 3))]
        extra_rhs = [Rat(rng.randint(-2, 6)) for _ in extra_rows]
        poly = poly.with_rows(extra_rows, extra_rhs)
        c = [Rat(rng.randint(-5, 5)) for _ in range(n)]
        res = lp_min(c, poly)
        verts = enumerate_vertices(poly)
        if res.status == INFEASIBLE:
            assert verts == []
            continue
        assert res.status == OPTIMAL  # boxed, never unbounded
        assert verts, "optimal on a boxed polyhedron must have vertices"
        assert res.value == min(dot(c, v) for v in verts)
        check_dual_certificate(c, poly, res)
        solved += 1


def test_implicit_equalities_forced():
    poly = Polyhedron(mat([[1], [-1]]), [Rat(0), Rat(0)])  # x <= 0 and x >= 0
    assert implicit_equalities(poly) == [0, 1]


def test_implicit_equalities_none_on_box():
    assert implicit_equalities(box([0], [1])) == []


def test_implicit_equalities_pair():
    rows = mat([[1, 1], [-1, -1], [1, 0]])
    rhs = [Rat(1), Rat(-1), Rat(5)]
    poly = Polyhedron(rows, rhs)
    assert implicit_equalities(poly) == [0, 1]


def test_implicit_equalities_raises_on_empty():
    poly = Polyhedron(mat([[1], [-1]]), [Rat(0), Rat(-1)])
    with pytest.raises(PreconditionError):
        implicit_equalities(poly)


def test_is_fulldim():
    assert is_fulldim_polyhedron(box([0, 0], [1, 1]))
    slab = Polyhedron(mat([[1, 0], [-1, 0]]), [Rat(0), Rat(0)])
    assert not is_fulldim_polyhedron(slab)
    empty = Polyhedron(mat([[1], [-1]]), [Rat(0), Rat(-1)])
    assert not is_fulldim_polyhedron(empty)


def test_reduce_fulldim_box_is_identity():
    poly = box([0, 0], [1, 1], p=1)
    out = fulldim_reduce_polyhedron(poly)
    assert not isinstance(out, Empty)
    tau, reduced = out
    assert tau.xbar == [0, 0]
    assert tau.p_prime == 1 and tau.n_prime == 2
    assert reduced is poly


def test_reduce_line_segment_spec_example():
    # 2x1 + x2 = 1 (two inequalities), -10 <= x <= 10, p = 1
    poly = box([-10, -10], [10, 10], p=1).with_equality([Rat(2), Rat(1)], Rat(1))
    out = fulldim_reduce_polyhedron(poly)
    assert not isinstance(out, Empty)
    tau, reduced = out
    assert tau.n_prime == 1 and tau.p_prime == 1
    assert is_fulldim_polyhedron(reduced)
    # bijection on mixed-integer points in the box
    originals = set()
    for x1 in range(-10, 11):
        x2 = 1 - 2 * x1
        if -10 <= x2 <= 10:
            originals.add((Rat(x1), Rat(x2)))
    mapped = set()
    for k in range(-100, 101):
        xp = [Rat(k)]
        if reduced.contains(xp):
            x = tau.apply(xp)
            assert all(is_integral(v) for v in x[:1])
            mapped.add(tuple(x))
    assert mapped == originals


def test_reduce_fractional_slab_is_empty():
    poly = Polyhedron(mat([[1], [-1]]), [Rat(1, 2), Rat(-1, 2)], p=1)  # x = 1/2
    assert fulldim_reduce_polyhedron(poly) == EMPTY


def test_reduce_empty_polyhedron_is_empty():
    poly = Polyhedron(mat([[1], [-1]]), [Rat(0), Rat(-1)], p=0)
    assert fulldim_reduce_polyhedron(poly) == EMPTY


def test_reduce_furthermore_clause():
    # seeded integer-supported equality x1 = 3 forces p' <= p - 1
    poly = box([-5, -5], [5, 5], p=2).with_equality([Rat(1), Rat(0)], Rat(3))
    out = fulldim_reduce_polyhedron(poly)
    tau, reduced = out
    assert tau.p_prime <= 1
    assert is_fulldim_polyhedron(reduced)


def test_recession_ray_check_cases():
    poly = Polyhedron(mat([[1, -1]]), [Rat(0)])
    assert recession_ray_check(poly, [Rat(0), Rat(0)])
    assert recession_ray_check(poly, [Rat(1), Rat(2)])
    poly2 = Polyhedron(mat([[1]]), [Rat(1)])
    assert not recession_ray_check(poly2, [Rat(1)])
