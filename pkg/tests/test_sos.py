import math

import numpy as np
import pytest

from ballvol import (Form, GramMatrix, apply_orthogonal, ball_form,
                     bombieri_product, eigh, evaluate, form_from_gram,
                     gram_dimension, gram_from_form_map, gram_from_squares,
                     induced_representation, multi_index_table,
                     project_psd_schatten_ball, random_orthogonal, schatten_norm,
                     simplex_projection, sos_decompose, spectral_norm)

rng = np.random.default_rng(424242)


def random_symmetric(N):
    A = rng.standard_normal((N, N))
    return 0.5 * (A + A.T)


@pytest.mark.parametrize("n,d,N", [(2, 2, 2), (2, 4, 3), (3, 2, 3), (3, 4, 6),
                                   (4, 6, 20)])
def test_gram_dimension(n, d, N):
    assert gram_dimension(n, d) == N == math.comb(d // 2 + n - 1, n - 1)


def test_identity_gram_gives_ball_form():
    # sum of squared rescaled half-degree monomials telescopes to |x|^d
    for n, d in [(2, 2), (2, 4), (3, 4), (4, 2)]:
        G = GramMatrix(n, d, np.eye(gram_dimension(n, d)))
        f = form_from_gram(G)
        np.testing.assert_allclose(f.coeffs, ball_form(n, d).coeffs, atol=1e-14)


def test_gram_map_has_kernel_at_degree_four():
    # antidiagonal relation x^2 * y^2 = (xy)^2, invisible at the form level
    K = np.array([[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]])
    f = form_from_gram(GramMatrix(2, 4, K))
    assert np.max(np.abs(f.coeffs)) < 1e-14


def test_gram_evaluation_identity():
    n, d = 2, 4
    G = random_symmetric(3)
    f = form_from_gram(GramMatrix(n, d, G))
    x = rng.standard_normal((15, n))
    m = np.stack([evaluate(Form(n, d // 2, np.eye(3)[j]), x) for j in range(3)])
    direct = np.einsum("js,jk,ks->s", m, G, m)
    np.testing.assert_allclose(evaluate(f, x), direct, rtol=1e-11, atol=1e-12)


def test_gram_map_transpose_is_adjoint():
    n, d = 3, 4
    N, T = gram_dimension(n, d), multi_index_table(n, d).size
    G = random_symmetric(N)
    g = rng.standard_normal(T)
    lhs = float(np.sum(form_from_gram(GramMatrix(n, d, G)).coeffs * g))
    rhs = float(np.sum(G * gram_from_form_map(n, d, g)))
    assert abs(lhs - rhs) < 1e-11


def test_gram_from_squares():
    half = multi_index_table(2, 2)
    squares = [Form(2, 2, rng.standard_normal(half.size)) for _ in range(3)]
    G = gram_from_squares(squares)
    f = form_from_gram(G)
    x = rng.standard_normal((10, 2))
    direct = sum(evaluate(s, x) ** 2 for s in squares)
    np.testing.assert_allclose(evaluate(f, x), direct, rtol=1e-11)


@pytest.mark.parametrize("N", [2, 3, 6, 10])
def test_jacobi_eigensolver(N):
    S = random_symmetric(N)
    ed = eigh(S)
    lam, Q = ed.eigenvalues, ed.eigenvectors
    assert np.all(np.diff(lam) <= 1e-12)
    np.testing.assert_allclose(Q.T @ Q, np.eye(N), atol=1e-12)
    np.testing.assert_allclose(Q @ np.diag(lam) @ Q.T, S, atol=1e-10)
    np.testing.assert_allclose(np.sort(lam), np.linalg.eigvalsh(S), atol=1e-10)


def test_eigensolver_deterministic():
    S = random_symmetric(5)
    a, b = eigh(S), eigh(S.copy())
    np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
    np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)


def test_schatten_norms_of_identity():
    for N in (2, 3, 6):
        for p in (1.0, 2.0, 3.0):
            assert abs(schatten_norm(np.eye(N), p) - N ** (1 / p)) < 1e-12
        assert abs(spectral_norm(np.eye(N)) - 1.0) < 1e-14


def test_schatten_matches_singular_values():
    S = random_symmetric(4)
    sv = np.abs(np.linalg.eigvalsh(S))
    assert abs(schatten_norm(S, 1) - sv.sum()) < 1e-10
    assert abs(schatten_norm(S, 2) - np.linalg.norm(S)) < 1e-10
    assert abs(spectral_norm(S) - sv.max()) < 1e-10


def test_simplex_projection():
    np.testing.assert_allclose(simplex_projection(np.array([0.5, 0.5])),
                               [0.5, 0.5])
    out = simplex_projection(np.array([2.0, 1.0, 0.0]))
    np.testing.assert_allclose(out, [1.0, 0.0, 0.0])
    v = rng.standard_normal(8)
    out = simplex_projection(v, radius=2.5)
    assert abs(out.sum() - 2.5) < 1e-12
    assert np.all(out >= 0)


@pytest.mark.parametrize("p", [1, 2, math.inf])
def test_psd_ball_projection(p):
    S = random_symmetric(5)
    P = project_psd_schatten_ball(S, p)
    lam = np.linalg.eigvalsh(P)
    assert lam.min() > -1e-12
    nrm = spectral_norm(P) if p == math.inf else schatten_norm(P, p)
    assert nrm <= 1.0 + 1e-10
    # idempotent
    np.testing.assert_allclose(project_psd_schatten_ball(P, p), P, atol=1e-10)
    # feasible input is a fixed point
    F = np.diag([0.4, 0.3, 0.1, 0.0, 0.0])
    np.testing.assert_allclose(project_psd_schatten_ball(F, p), F, atol=1e-12)


def test_projection_is_euclidean_nearest_on_diagonals():
    # diagonal case reduces to the vector projection, checked by scipy-free
    # brute force over a grid of feasible diagonal matrices
    S = np.diag([1.2, 0.5, -0.3])
    P = project_psd_schatten_ball(S, 1)
    lam = np.sort(np.diag(P))[::-1]
    direct = simplex_projection(np.clip(np.diag(S), 0, None), 1.0)
    np.testing.assert_allclose(lam, np.sort(direct)[::-1], atol=1e-12)


def test_sos_decompose_round_trip():
    n, d = 2, 4
    half = multi_index_table(n, d // 2)
    squares = [Form(n, 2, rng.standard_normal(half.size)) for _ in range(2)]
    G = gram_from_squares(squares)
    parts = sos_decompose(G)
    f = form_from_gram(G)
    x = rng.standard_normal((10, 2))
    recon = sum(evaluate(s, x) ** 2 for s in parts)
    np.testing.assert_allclose(recon, evaluate(f, x), rtol=1e-10)
    with pytest.raises(ValueError):
        sos_decompose(GramMatrix(2, 4, np.diag([1.0, -1.0, 1.0])))


def test_induced_representation_orthogonal_and_equivariant():
    for n, half_d in [(2, 1), (2, 2), (3, 2), (4, 3)]:
        rho = random_orthogonal(n, rng)
        R = induced_representation(rho, n, half_d)
        N = gram_dimension(n, 2 * half_d)
        np.testing.assert_allclose(R @ R.T, np.eye(N), atol=1e-12)
        G = random_symmetric(N)
        lhs = form_from_gram(GramMatrix(n, 2 * half_d, R.T @ G @ R))
        rhs = apply_orthogonal(form_from_gram(GramMatrix(n, 2 * half_d, G)), rho)
        np.testing.assert_allclose(lhs.coeffs, rhs.coeffs, atol=1e-11)


def test_gram_symmetry_enforced():
    with pytest.raises(ValueError):
        GramMatrix(2, 4, np.array([[1.0, 2.0, 0.0],
                                   [0.0, 1.0, 0.0],
                                   [0.0, 0.0, 1.0]]))
