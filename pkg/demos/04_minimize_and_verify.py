"""Volume minimization over norm balls, and randomized verification.

For orthogonally invariant norms the minimizer of v over the unit ball is
the scaled ball form, with a closed-form optimal value.  The projected
subgradient solver recovers it, and the randomized verifier checks the
closed-form lower bound on random feasible forms.

The last section demonstrates the one genuine exception: for Schatten
p = 1 at degree 4 the Gram-map kernel lets a feasible form beat the
stated bound N^(n/(d p)) * vol(ball), so that cell of the verification
matrix fails by design of the bound, not by solver error.
"""

import math

import numpy as np

from ballvol import (NormSpec, ball_form, bombieri_norm_ball_exact,
                     minimize_volume_form, theoretical_opt, verify_lower_bound,
                     volume_spherical_mc, Form, GramMatrix, form_from_gram,
                     schatten_norm)

# solve P with the Bombieri norm at (2,4)
trace = minimize_volume_form(NormSpec("bombieri"), 2, 4, iters=60,
                             samples=15_000)
opt = theoretical_opt(NormSpec("bombieri"), 2, 4)
target = ball_form(2, 4).coeffs / bombieri_norm_ball_exact(2, 4)
print("final objective:", trace.final_objective, " closed-form opt:", opt)
print("distance to scaled ball form:",
      np.linalg.norm(trace.final_form.coeffs - target))

# randomized verification of the Bombieri lower bound
rep = verify_lower_bound(NormSpec("bombieri"), 2, 4, trials=100, samples=4000)
print("\nbombieri x (2,4): min ratio", rep["min_ratio"],
      " violations", len(rep["violations"]))

# the Schatten p=1 anomaly at degree 4: a rank-one Gram matrix of the
# scaled ball form ((x^2+y^2)/sqrt(2))^2 with nuclear norm 1
G = 0.5 * np.array([[1.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 1.0]])
f = form_from_gram(GramMatrix(2, 4, G))
print("\nnuclear norm of the rank-one Gram:", schatten_norm(G, 1))
est = volume_spherical_mc(f, samples=50_000)
print("its volume:", est.value, "= sqrt(2)*pi =", math.sqrt(2) * math.pi)
print("stated schatten(1) bound:", theoretical_opt(NormSpec("schatten", 1), 2, 4),
      "= 3^(1/2)*pi; the feasible form above beats it")
