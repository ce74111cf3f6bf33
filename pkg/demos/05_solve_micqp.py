"""End-to-end accurate solving of a mixed integer convex quadratic program.

The instance below is the lifted form of min (x1 - 1/2)^2 + x2^2 with x1
integer: an auxiliary continuous variable is pinned to 1/2, so the exact
optimal value 1/4 is representable without a constant term.
"""

from miqcp import MicqpInstance, Polyhedron, QpObjective, Trace, optimize, oracle_optimize
from miqcp.linalg import mat
from miqcp.rational import Rat, rat_str

rows = mat([
    [0, 0, 1], [0, 0, -1],          # x3 = 1/2
    [1, 0, 0], [-1, 0, 0],          # |x1| <= 2
    [0, 1, 0], [0, -1, 0],          # |x2| <= 2
])
rhs = [Rat(1, 2), Rat(-1, 2), Rat(2), Rat(2), Rat(2), Rat(2)]
poly = Polyhedron(rows, rhs, p=1)
obj = QpObjective(mat([[1, 0, -1], [0, 1, 0], [-1, 0, 1]]), [Rat(0)] * 3)
inst = MicqpInstance(obj, poly, ([Rat(-5)] * 3, [Rat(5)] * 3))

trace = Trace()
res = optimize(inst, trace)
print("status:", res.status)
print("value :", rat_str(res.value))
print("point :", [rat_str(v) for v in res.x])
print()

check = oracle_optimize(inst)
print("oracle agrees:", check.status == res.status and check.value == res.value)
print()

print("recursion trace:")
for node in trace.nodes:
    print("  ", node)
print()
print("the same instance ships as fixtures/halfpoint.json;")
print("try: miqcp solve fixtures/halfpoint.json")
