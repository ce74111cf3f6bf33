"""Full-dimensional reduction of polyhedra and convex quadratic sets.

A set squeezed onto an affine subspace is mapped to a full-dimensional
isomorphic copy in lower dimension, by an affine map that carries the
mixed-integer points across bijectively.
"""

from miqcp import (
    ConvexQuadraticSet,
    Polyhedron,
    QpObjective,
    fulldim_reduce_cqs,
    fulldim_reduce_polyhedron,
    is_fulldim_polyhedron,
)
from miqcp.linalg import mat
from miqcp.rational import Rat, rat_str

# The segment 2x1 + x2 = 1 inside a box, with both coordinates integer.
rows = mat([[2, 1], [-2, -1], [1, 0], [-1, 0], [0, 1], [0, -1]])
rhs = [Rat(v) for v in (1, -1, 10, 10, 10, 10)]
segment = Polyhedron(rows, rhs, p=2)
print("polyhedron: 2x1 + x2 = 1, |x| <= 10, both integer")
print("full-dimensional?", is_fulldim_polyhedron(segment))

tau, reduced = fulldim_reduce_polyhedron(segment)
print("reduced to dimension", tau.n_prime, "with", tau.p_prime, "integer variables")
print("reduced polyhedron full-dimensional?", is_fulldim_polyhedron(reduced))
for k in range(-3, 4):
    if reduced.contains([Rat(k)]):
        x = tau.apply([Rat(k)])
        print(f"  k={k:+d} -> x = ({rat_str(x[0])}, {rat_str(x[1])})")
print()

# A convex quadratic set that is a single tangency point: x1 >= 1, x1^2 <= 1.
poly = Polyhedron(mat([[-1, 0], [0, 1], [0, -1]]),
                  [Rat(-1), Rat(5), Rat(5)], p=2)
q = ConvexQuadraticSet(poly, QpObjective(mat([[1, 0], [0, 0]]), [Rat(0), Rat(0)]), Rat(1))
print("convex quadratic set: x1 >= 1, |x2| <= 5, x1^2 <= 1 (tangent at x1 = 1)")
tau2, q2 = fulldim_reduce_cqs(q)
print("face descent found p' =", tau2.p_prime, ", n' =", tau2.n_prime)
print("image of x' = 2:", [rat_str(v) for v in tau2.apply([Rat(2)])])
