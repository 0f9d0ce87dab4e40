import math

import numpy as np
import pytest
from scipy import integrate

from ballvol import (Form, ball_form, ball_volume, gaussian_like_moment, kappa,
                     multi_index_table, normalize_to_probability,
                     rescaled_from_monomial, volume_gradient, volume_laplace_mc,
                     volume_quadratic_exact, volume_spherical_mc)
from ballvol.volume import _screen_scale

rng = np.random.default_rng(777)

QUARTIC_VOL = (2 * math.gamma(1.25)) ** 2 / math.gamma(1.5)  # v(x^4+y^4)


def quadratic_form(A):
    """x^t A x as a degree-2 form."""
    n = A.shape[0]
    table = multi_index_table(n, 2)
    mono = np.empty(table.size)
    for idx, a in enumerate(table.indices):
        nz = [k for k in range(n) if a[k] > 0]
        mono[idx] = A[nz[0], nz[0]] if len(nz) == 1 else 2 * A[nz[0], nz[1]]
    return rescaled_from_monomial(n, 2, mono)


def test_ball_volume_values():
    assert abs(ball_volume(2) - math.pi) < 1e-14
    assert abs(ball_volume(3) - 4 * math.pi / 3) < 1e-13
    assert abs(ball_volume(1) - 2.0) < 1e-14


def test_kappa_values():
    assert abs(kappa(1, 2) - math.pi) < 1e-13
    assert abs(kappa(2, 2) - math.pi) < 1e-13
    # oracle: kappa(1,4) makes exp(-kappa x^4) integrate to 1
    k = kappa(1, 4)
    integral = integrate.quad(lambda x: math.exp(-k * x ** 4), -np.inf, np.inf)[0]
    assert abs(integral - 1.0) < 1e-9
    assert abs(k - 10.8) < 0.1
    with pytest.raises(ValueError):
        kappa(2, 3)


def test_laplace_ball_is_exact_by_construction():
    # the importance law matches exp(-|x|^2) exactly, weights are constant
    est = volume_laplace_mc(ball_form(2, 2), samples=10_000, seed=4)
    assert abs(est.value - math.pi) < 1e-10
    est = volume_laplace_mc(ball_form(3, 2), samples=10_000, seed=4)
    assert abs(est.value - 4 * math.pi / 3) < 1e-9


def test_laplace_quartic_golden():
    f = rescaled_from_monomial(2, 4, np.array([1.0, 0, 0, 0, 1.0]))
    est = volume_laplace_mc(f, samples=200_000, seed=8)
    assert abs(est.value - QUARTIC_VOL) < 3.0 * est.std_error
    assert est.std_error < 0.02


def test_laplace_matches_quadratic_oracle():
    A = np.array([[2.0, 0.0], [0.0, 8.0]])
    f = quadratic_form(A)
    est = volume_laplace_mc(f, samples=200_000, seed=9)
    exact = volume_quadratic_exact(A)
    assert abs(exact - math.pi / 4) < 1e-14
    assert abs(est.value - exact) < max(3.0 * est.std_error, 0.002)


def test_spherical_ball_exact():
    est = volume_spherical_mc(ball_form(3, 4), samples=1000, seed=2)
    assert abs(est.value - ball_volume(3)) < 1e-12
    assert est.std_error < 1e-12


def test_spherical_one_dimensional():
    # {4x^2 <= 1} = [-1/2, 1/2] has volume 1
    f = rescaled_from_monomial(1, 2, np.array([4.0]))
    est = volume_spherical_mc(f, samples=100, seed=2)
    assert abs(est.value - 1.0) < 1e-13


def test_estimators_cross_agree():
    f = rescaled_from_monomial(2, 4, np.array([1.0, 0, 0, 0, 1.0]))
    a = volume_laplace_mc(f, samples=300_000, seed=21)
    b = volume_spherical_mc(f, samples=300_000, seed=22)
    joint = math.hypot(a.std_error, b.std_error)
    assert abs(a.value - b.value) < 3.0 * joint + 1e-4


def test_quadratic_exact_random_spd():
    for _ in range(10):
        n = int(rng.integers(1, 4))
        B = rng.standard_normal((n, n))
        A = B @ B.T + 0.3 * np.eye(n)
        exact = volume_quadratic_exact(A)
        assert abs(exact - ball_volume(n) / math.sqrt(np.linalg.det(A))) < 1e-10
    with pytest.raises(ValueError):
        volume_quadratic_exact(np.array([[1.0, 0.0], [0.0, -1.0]]))


def test_indefinite_form_flags_infinite():
    f = rescaled_from_monomial(2, 2, np.array([1.0, 0.0, -1.0]))
    est = volume_laplace_mc(f, samples=1000, seed=3)
    assert est.infinite
    est = volume_spherical_mc(f, samples=1000, seed=3)
    assert est.infinite


def test_gradient_matches_finite_differences():
    f = Form(2, 4, np.array([1.0, 0.1, 0.8, -0.1, 1.2]))
    seed, samples = 13, 150_000
    scale = _screen_scale(f, seed)
    grad = volume_gradient(f, samples=samples, seed=seed, scale=scale)
    h = 1e-4
    for i in range(5):
        e = np.zeros(5)
        e[i] = h
        vp = volume_laplace_mc(Form(2, 4, f.coeffs + e), samples=samples,
                               seed=seed, scale=scale).value
        vm = volume_laplace_mc(Form(2, 4, f.coeffs - e), samples=samples,
                               seed=seed, scale=scale).value
        fd = (vp - vm) / (2 * h)
        assert abs(fd - grad[i]) < 1e-4 * max(1.0, abs(grad[i]))


def test_moments():
    assert abs(gaussian_like_moment((0, 0), 2, 4) - 1.0) < 1e-10
    assert gaussian_like_moment((1, 2), 2, 4) == 0.0
    assert gaussian_like_moment((3, 0, 1), 3, 2) == 0.0
    # d = 2 reduces to plain Gaussian moments of exp(-pi |x|^2)
    m2 = gaussian_like_moment((2, 0), 2, 2)
    assert abs(m2 - 1.0 / (2 * math.pi)) < 1e-12
    # quadrature oracle for the quartic law in one variable
    k = kappa(1, 4)
    exact = integrate.quad(lambda x: x ** 4 * math.exp(-k * x ** 4),
                           -np.inf, np.inf)[0]
    assert abs(gaussian_like_moment((4,), 1, 4) - exact) < 1e-9


def test_normalization_constant_of_ball_is_kappa():
    for n, d in [(1, 2), (2, 2), (2, 4), (3, 2)]:
        c, g = normalize_to_probability(ball_form(n, d), volume=ball_volume(n))
        assert abs(c - kappa(n, d)) < 1e-12 * kappa(n, d)
        np.testing.assert_allclose(g.coeffs, c * ball_form(n, d).coeffs)
