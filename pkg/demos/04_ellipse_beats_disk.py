"""Stretching the disk into an ellipse lowers perimeter^2 * lambda_2.

Perimeter grows like 1 + t/2 while lambda_2 drops like 1 - 3t/2, so the
scale-free product falls with slope -1/2 at t = 0.
"""

from specgeom.experiments import EllipseConfig, ellipse_experiment

res = ellipse_experiment(EllipseConfig((0.02, 0.04, 0.06, 0.08), target_h=0.05))
print(f"f(0) = {res.f0:.4f}   (2 pi j_1)^2 = {res.f0_exact:.4f}")
for p, g in zip(res.points, res.normalized_slopes):
    print(f"t={p.t:.2f} perimeter={p.perimeter:.6f} lambda_2={p.lambda2:.6f} f/f0={p.f / res.f0:.5f} (f/f0-1)/t={g:.4f}")
print("slope at t -> 0:", res.fitted_slope)
