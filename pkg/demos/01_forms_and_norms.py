"""Forms in the rescaled monomial basis and their sphere norms.

The rescaled basis makes the Bombieri inner product a plain dot product,
so apolarity identities and orthogonal invariance become one-liners.
"""

import math

import numpy as np

from ballvol import (ball_form, bombieri_norm, bombieri_product,
                     apply_orthogonal, lp_sphere_norm, power_form,
                     random_orthogonal, rescaled_from_monomial, sup_sphere_norm)

rng = np.random.default_rng(1)

# (x^2 + y^2)^2 in the rescaled basis: note the sqrt(6) on the mixed term
b = ball_form(2, 4)
print("ball form (2,4) coefficients:", np.round(b.coeffs, 6))
print("Bombieri norm:", bombieri_norm(b), "= sqrt(8/3) =", math.sqrt(8 / 3))

# pairing a form against the 4th power of a linear form evaluates it there
f = rescaled_from_monomial(2, 4, np.array([1.0, 0, 0, 0, 1.0]))  # x^4 + y^4
y = np.array([0.3, -1.1])
print("\n<f, (y.x)^4> =", bombieri_product(f, power_form(y, 4)))
print("f(y)         =", f(y))

# the Bombieri norm does not move under a rotation of the variables
rho = random_orthogonal(2, rng)
print("\n|f| before rotation:", bombieri_norm(f))
print("|f| after rotation: ", bombieri_norm(apply_orthogonal(f, rho)))

# sphere norms: L^p by Monte Carlo, sup by multistart ascent
est = lp_sphere_norm(f, 2.0, samples=200_000)
print("\nL2 sphere norm of x^4+y^4:", est.value, "+-", est.std_error)
print("sup on the sphere:", sup_sphere_norm(f).value, "(max of cos^4+sin^4)")
