"""Sublevel-set volume v(f) = vol{f <= 1} three ways.

The Laplace identity turns the set volume into a smooth integral of
exp(-f); polar coordinates turn it into a bounded integral over the
sphere.  Both are cross-checked here against the exact ellipsoid formula.
"""

import math

import numpy as np

from ballvol import (ball_form, ball_volume, kappa, rescaled_from_monomial,
                     volume_laplace_mc, volume_quadratic_exact,
                     volume_spherical_mc)

# the ball form is the sanity anchor: v(b) is the unit-ball volume
for n in (2, 3):
    est = volume_laplace_mc(ball_form(n, 2), samples=100_000)
    print(f"v(|x|^2), n={n}: {est.value:.6f}  exact {ball_volume(n):.6f}")

# an anisotropic quartic with a quadrature-checkable volume
f = rescaled_from_monomial(2, 4, np.array([1.0, 0, 0, 0, 1.0]))  # x^4 + y^4
exact = (2 * math.gamma(1.25)) ** 2 / math.gamma(1.5)
a = volume_laplace_mc(f, samples=300_000)
b = volume_spherical_mc(f, samples=300_000)
print(f"\nv(x^4+y^4): laplace {a.value:.4f} +- {a.std_error:.4f}, "
      f"spherical {b.value:.4f} +- {b.std_error:.4f}, exact {exact:.4f}")

# ellipsoids have a closed form to compare against
A = np.array([[2.0, 0.3], [0.3, 8.0]])
print("\nellipsoid volume exact:", volume_quadratic_exact(A))

# the normalizing constant kappa makes exp(-kappa |x|^d) a probability law
print("\nkappa(2,4) =", kappa(2, 4))

# an indefinite form has an infinite sublevel set; the estimator flags it
g = rescaled_from_monomial(2, 2, np.array([1.0, 0.0, -1.0]))  # x^2 - y^2
print("v(x^2-y^2) infinite:", volume_laplace_mc(g, samples=1000).infinite)
