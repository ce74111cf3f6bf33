"""LLL reduction and the flatness dichotomy.

Given a ball and a lattice, either a lattice point lies inside the ball, or
there is an integer direction along which the ball is provably thin; the
thin direction is what the solver branches on.
"""

from miqcp import LatticeBasis, flatness, lll_reduce
from miqcp.lattice import width_bound_sq
from miqcp.linalg import mat, norm_sq
from miqcp.rational import Rat, rat_str

skew = LatticeBasis(mat([[1, 1000001], [0, 1]]))
reduced, u = lll_reduce(skew)
print("skew basis columns reduced to:")
for row in reduced.b_mat:
    print("  ", [rat_str(v) for v in row])
print("transform U is unimodular:", u.check())
print()

wide = flatness([Rat(1, 2), Rat(1, 2)], Rat(1), LatticeBasis(mat([[1, 0], [0, 1]])))
print("unit lattice, ball radius 1:", wide.tag, [rat_str(v) for v in wide.z])

narrow = flatness([Rat(1, 2)], Rat(1, 4), LatticeBasis(mat([[1]])))
print("unit lattice, ball radius 1/4 at 1/2:", narrow.tag,
      [rat_str(v) for v in narrow.d])
lhs = 4 * Rat(1, 4) ** 2 * norm_sq(narrow.d)
print("width certificate: 4 r^2 |d|^2 =", rat_str(lhs),
      "<=", rat_str(width_bound_sq(1)))
