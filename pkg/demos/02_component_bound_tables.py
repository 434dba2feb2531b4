"""Component-count bounds for eigenvalue minimisers.

Under a boundary-measure constraint a minimiser of lambda_k (k <= m+1) in
R^m has at most omega components; the bound only needs ball eigenvalues.
Floors are evaluated on certified intervals so breakpoints are exact.
"""

from specgeom import bounds


def runs(rows):
    out = []
    for r in rows:
        if out and out[-1][0] == r.omega_max:
            out[-1][2] = r.dimension
        else:
            out.append([r.omega_max, r.dimension, r.dimension])
    return out


rows = bounds.theorem2v_table(600)
for omega, lo, hi in runs(rows):
    print(f"boundary measure: omega <= {omega} for m = {lo}..{hi}")

# close to the 587/588 breakpoint the floor argument is within 3e-5 of 3
for m in (587, 588):
    r = bounds.hausdorff_component_bound(m, 3)
    print(f"m={m}: floor argument {r.bound_value:.7f}, flag={r.err_flag or 'none'}")

# beyond m = 2^15 the zeros are replaced by their asymptotic brackets
asym = bounds.asymptotic_omega_bound()
print("m >= 2^15: omega <=", asym.omega_max, asym.extras)

# volume (beta = m) and torsion (beta = m + 2) constraints
for mode in ("LebesgueMeasure", "TorsionalRigidity"):
    rows = [r for r in bounds.corollary5_tables(mode, 600) if r.applicable]
    print(mode, [(o, lo, hi) for o, lo, hi in runs(rows)])

# the ball never minimises lambda_2 under the boundary constraint for m >= 3
print("m=3 margin j_3/2 - sqrt(2) pi =", bounds.ball_not_minimiser_margin(3))

# which splits into components survive the optimality bound
for m, k in ((4, 4), (8, 5)):
    confs = bounds.enumerate_configurations(m, k, m, refined=True)
    print(f"m={m}, k={k}:", [(c.k1, c.k2) for c in confs])
