"""Bessel zeros and the Dirichlet spectrum of the unit ball.

Run with ``python3 demos/01_bessel_zeros_and_ball_spectrum.py``.
"""

import math

from specgeom import ball_spectrum as bs
from specgeom.bessel import asymptotic_bracket, bessel_j, nth_zero

# J_1/2(x) = sqrt(2/(pi x)) sin x, so its zeros are multiples of pi
for n in (1, 2, 3):
    z = nth_zero(0.5, n)
    print(f"j_(1/2),{n} = {z.value:.15f}   n*pi = {n * math.pi:.15f}   |err| <= {z.abs_err:.1e}")

print("J_1(1) =", bessel_j(1, 1.0))

# the first zero sits inside nu + a nu^(1/3) + [0.5, 1.537] nu^(-1/3)
for nu in (1, 10, 100, 1000):
    br = asymptotic_bracket(nu)
    print(f"nu={nu:5d}: {br.lower:.4f} <= j = {nth_zero(nu, 1).value:.4f} <= {br.upper:.4f}")

# lambda_1(B_m) is simple; the next level has multiplicity m
for m in (2, 3, 4):
    spec = bs.ball_eigenvalues(m, m + 2)
    print(f"m={m}:", [round(float(v), 4) for v in spec.values])

print("spherical harmonics of degree 3 in 6 variables:", bs.harmonic_multiplicity(6, 3))

# Weyl growth in the plane: lambda_k ~ 4k for the unit disk
vals = bs.ball_eigenvalues(2, 200).values
print("lambda_200 / (4*200) =", vals[-1] / 800)
