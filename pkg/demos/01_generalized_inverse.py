"""Integer reflexive generalized inverses and mixed-integer parametrization.

A reflexive generalized inverse A# satisfies A A# A = A and A# A A# = A#;
it is called integer when A# A has integer entries.  That integrality is
what lets the parametrization map lattice points onto lattice points.
"""

from miqcp import integer_reflexive_ginv, parametrize_mixed_integer_solutions
from miqcp.linalg import mat, mat_mul
from miqcp.rational import Rat, rat_str


def show(mtx):
    return "[" + "; ".join(" ".join(rat_str(v) for v in row) for row in mtx) + "]"


a = mat([[1, 2], [2, 4], [0, 3]])
g = integer_reflexive_ginv(a)
print("A       =", show(a))
print("A#      =", show(g.asharp))
print("A A# A  =", show(mat_mul(mat_mul(a, g.asharp), a)), "(equals A)")
print("A# A    =", show(mat_mul(g.asharp, a)), "(integer entries)")
print("rank    =", g.r)
print()

# Mixed-integer solutions of 2y + z = 1 with y integer, z real:
# tau(y') = (0, 1) + y' (1, -2) hits exactly the solutions with y integer.
param = parametrize_mixed_integer_solutions(mat([[2, 1]]), [Rat(1)], p=1)
print("system 2y + z = 1, y integer:")
print("  xbar =", [rat_str(v) for v in param.xbar])
print("  M    =", show(param.m))
print("  p' =", param.p_prime, " n' =", param.n_prime)
for k in range(-2, 3):
    x = param.apply([Rat(k)])
    print(f"  tau({k:+d}) = ({rat_str(x[0])}, {rat_str(x[1])})   checks: 2y+z =",
          rat_str(2 * x[0] + x[1]))

# An infeasible system is certified, not guessed: y = 1/2 with y integer.
out = parametrize_mixed_integer_solutions(mat([[1, 0]]), [Rat(1, 2)], p=1)
print()
print("system y = 1/2, y integer ->", out)
