import random

import pytest

from miqcp.errors import PreconditionError
from miqcp.lattice import (
    LATTICE_POINT,
    THIN_DIRECTION,
    FlatnessOutcome,
    LatticeBasis,
    babai_nearest_plane,
    flatness,
    lll_reduce,
    width_bound_sq,
)
from miqcp.linalg import (
    det,
    dot,
    identity,
    inverse,
    is_integer_mat,
    mat,
    mat_eq,
    mat_mul,
    mat_vec,
    norm_sq,
    vec_sub,
)
from miqcp.rational import Rat, is_integral


def _gram_schmidt_norms(basis):
    cols = basis.columns()
    star = []
    for i, b in enumerate(cols):
        v = list(b)
        for s in star:
            coef = dot(b, s) / norm_sq(s)
            v = [a - coef * c for a, c in zip(v, s)]
        star.append(v)
    return star


def assert_lll_reduced(basis):
    cols = basis.columns()
    star = _gram_schmidt_norms(basis)
    p = basis.p
    for i in range(p):
        for j in range(i):
            mu = dot(cols[i], star[j]) / norm_sq(star[j])
            assert 2 * abs(mu) <= 1
    for k in range(1, p):
        mu = dot(cols[k], star[k - 1]) / norm_sq(star[k - 1])
        assert norm_sq(star[k]) >= (Rat(3, 4) - mu * mu) * norm_sq(star[k - 1])


def test_lll_identity_unchanged():
    red, u = lll_reduce(LatticeBasis(identity(3)))
    assert mat_eq(red.b_mat, identity(3))
    assert u.check()


def test_lll_skew_basis():
    b = LatticeBasis(mat([[1, 1000001], [0, 1]]))
    red, u = lll_reduce(b)
    assert abs(det(red.b_mat)) == abs(det(b.b_mat))
    assert mat_eq(mat_mul(b.b_mat, u.u), red.b_mat)
    assert u.check()
    assert_lll_reduced(red)
    assert all(abs(v) <= 2 for row in red.b_mat for v in row)


def test_lll_diagonal_already_reduced():
    b = LatticeBasis(mat([[2, 0], [0, 3]]))
    red, _ = lll_reduce(b)
    assert abs(det(red.b_mat)) == 6
    assert_lll_reduced(red)


def test_lll_rejects_singular():
    with pytest.raises(PreconditionError):
        lll_reduce(LatticeBasis(mat([[1, 2], [2, 4]])))


def test_lll_randomized_invariants():
    rng = random.Random(101)
    done = 0
    while done < 60:
        p = rng.randint(1, 5)
        b_mat = [[Rat(rng.randint(-8, 8), rng.choice([1, 1, 2])) for _ in range(p)]
                 for _ in range(p)]
        if det(b_mat) == 0:
            continue
        basis = LatticeBasis(b_mat)
        red, u = lll_reduce(basis)
        assert is_integer_mat(u.u) and is_integer_mat(u.uinv)
        assert abs(det(u.u)) == 1
        assert mat_eq(mat_mul(basis.b_mat, u.u), red.b_mat)
        assert abs(det(red.b_mat)) == abs(det(basis.b_mat))
        assert_lll_reduced(red)
        done += 1


def test_babai_simple():
    basis = LatticeBasis(identity(2))
    z = babai_nearest_plane(basis, [Rat(3, 4), Rat(-1, 3)])
    assert z == [1, 0]


def test_flatness_1d_lattice_point():
    out = flatness([Rat(2, 5)], Rat(3, 5), LatticeBasis(mat([[1]])))
    assert out.tag == LATTICE_POINT
    assert out.z == [0]


def test_flatness_1d_thin_direction():
    out = flatness([Rat(1, 2)], Rat(1, 4), LatticeBasis(mat([[1]])))
    assert out.tag == THIN_DIRECTION
    assert abs(out.d[0]) == 1
    # width 2 * (1/4) * 1 = 1/2 <= 1 * 2^0 = 1
    assert 4 * Rat(1, 4) ** 2 * norm_sq(out.d) <= width_bound_sq(1)


def test_flatness_2d_identity():
    out = flatness([Rat(1, 2), Rat(1, 2)], Rat(1), LatticeBasis(identity(2)))
    assert out.tag == LATTICE_POINT
    z = out.z
    assert all(is_integral(v) for v in z)
    assert norm_sq(vec_sub(z, [Rat(1, 2), Rat(1, 2)])) <= 1


def test_flatness_invariants_randomized():
    rng = random.Random(7)
    done = 0
    while done < 200:
        p = rng.randint(1, 5)
        b_mat = [[Rat(rng.randint(-6, 6), rng.choice([1, 2, 3])) for _ in range(p)]
                 for _ in range(p)]
        if det(b_mat) == 0:
            continue
        basis = LatticeBasis(b_mat)
        a = [Rat(rng.randint(-12, 12), rng.choice([1, 2, 3, 4])) for _ in range(p)]
        r = Rat(rng.randint(0, 8), rng.choice([1, 2, 3]))
        out = flatness(a, r, basis)
        binv = inverse(b_mat)
        if out.tag == LATTICE_POINT:
            coeffs = mat_vec(binv, out.z)
            assert all(is_integral(v) for v in coeffs)
            assert norm_sq(vec_sub(out.z, a)) <= r * r
        else:
            assert any(v != 0 for v in out.d)
            bt_d = [dot([b_mat[i][j] for i in range(p)], out.d) for j in range(p)]
            assert all(is_integral(v) for v in bt_d)
            assert 4 * r * r * norm_sq(out.d) <= width_bound_sq(p)
        done += 1
