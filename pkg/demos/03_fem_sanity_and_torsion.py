"""P1 finite elements: closed-form checks, convergence and torsional rigidity."""

import math

import numpy as np

from specgeom import bounds
from specgeom.experiments import square_torsion_series
from specgeom.fem2d import dirichlet_eigs, disk, torsion_solve, triangulate_convex, unit_square

j0sq = 2.404825557695773**2

# eigenvalue error on the disk shrinks by ~4 per halving of h
prev = None
for h in (0.2, 0.1, 0.05, 0.025):
    mesh = triangulate_convex(disk(), target_h=h)
    err = dirichlet_eigs(mesh, 1).eigenvalues[0] - j0sq
    note = "" if prev is None else f"  ratio {prev / err:.3f}"
    print(f"h={mesh.h:.4f} vertices={mesh.n_vertices:6d} error={err:.3e}{note}")
    prev = err

sq = dirichlet_eigs(triangulate_convex(unit_square(), target_h=0.05), 3).eigenvalues
print("square / pi^2:", sq / math.pi**2)

# torsion: u = (1 - r^2)/4 on the unit disk, so P = pi/8; P scales like alpha^4
p1 = torsion_solve(triangulate_convex(disk(), target_h=0.05)).rigidity
p2 = torsion_solve(triangulate_convex(disk(2.0), target_h=0.1)).rigidity
print(f"disk P = {p1:.6f} (pi/8 = {math.pi / 8:.6f}); P(2 disk)/P(disk) = {p2 / p1:.4f}")
print("square P =", torsion_solve(triangulate_convex(unit_square(), target_h=0.05)).rigidity,
      "series:", square_torsion_series())

# lambda_k >= c(2) P^(-1/2) k^(1/2) on the disk
from specgeom import ball_spectrum as bs

vals = bs.ball_eigenvalues(2, 50).values
lb = np.array([bounds.torsion_eigenvalue_lower_bound(2, k, math.pi / 8) for k in range(1, 51)])
print("smallest lambda_k / bound over k <= 50:", (vals / lb).min())
