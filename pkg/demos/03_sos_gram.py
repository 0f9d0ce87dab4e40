"""Sum-of-squares Gram matrices: the map, its kernel, and projections.

A PSD Gram matrix certifies a form as a sum of squares.  At degree 4 the
map from matrices to forms already has a kernel, which is why different
Gram representations of the same form can have very different norms.
"""

import numpy as np

from ballvol import (GramMatrix, ball_form, eigh, form_from_gram,
                     gram_dimension, project_psd_schatten_ball, schatten_norm,
                     sos_decompose)

n, d = 2, 4
N = gram_dimension(n, d)
print("Gram dimension for (2,4):", N)

# the identity Gram matrix represents the ball form
f = form_from_gram(GramMatrix(n, d, np.eye(N)))
print("form of id_3 == ball form:", np.allclose(f.coeffs, ball_form(n, d).coeffs))

# kernel direction: x^2 * y^2 - (xy)^2 = 0 as a polynomial
K = np.array([[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]])
print("kernel matrix maps to zero form:",
      np.max(np.abs(form_from_gram(GramMatrix(n, d, K)).coeffs)) < 1e-14)

# consequence: id + K is another Gram matrix of the same ball form,
# with a different nuclear norm
G2 = np.eye(N) + K
print("nuclear norm of id:    ", schatten_norm(np.eye(N), 1))
print("nuclear norm of id + K:", schatten_norm(G2, 1))

# spectral decomposition gives an explicit SOS certificate
parts = sos_decompose(GramMatrix(n, d, G2))
print("SOS decomposition has", len(parts), "squares")

# joint projection onto {PSD} intersect {Frobenius ball}
S = np.array([[1.5, 0.2, 0.0], [0.2, -0.4, 0.1], [0.0, 0.1, 0.9]])
P = project_psd_schatten_ball(S, 2)
print("projected eigenvalues:", np.round(eigh(P).eigenvalues, 4),
      " Frobenius norm:", schatten_norm(P, 2))
