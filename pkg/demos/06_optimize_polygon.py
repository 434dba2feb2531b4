"""Pattern search over convex 16-gons for small perimeter^2 * lambda_2.

Takes a few minutes; each objective evaluation is a FEM solve at h = 0.03.
"""

import math

from specgeom.bessel import nth_zero
from specgeom.experiments import optimize_lambda_k

j0, j1 = nth_zero(0, 1).value, nth_zero(1, 1).value
state = optimize_lambda_k(2, n_vertices=16, iterations=3, seed=2024, target_h=0.03)
disk_value = (2 * math.pi * j1) ** 2
print(f"start {state.history[0]:.3f}  final {state.objective:.3f}  ({state.objective / disk_value - 1:+.2%} vs disk)")
print("two disjoint disks:", 4 * j0**2 * (2 * math.pi) ** 2)
print("accepted moves:", state.accepted, "of", state.evaluations, "evaluations")
for x, y in state.vertices:
    print(f"{x: .5f} {y: .5f}")
