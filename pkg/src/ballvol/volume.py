"""Sublevel-set volumes v(f) = vol{f <= 1} of nonnegative forms.

Two Monte-Carlo routes are provided and cross-checked:

* ``volume_laplace_mc`` integrates exp(-f) against a Gaussian-like
  importance law with density proportional to exp(-c |x|^d) and divides
  by Gamma(1 + n/d);
* ``volume_spherical_mc`` integrates f^(-n/d) over the sphere in polar
  coordinates.

Indefinite forms have infinite sublevel volume; both estimators screen
for negativity on the sphere and return an infinite-flag estimate rather
than raising, so optimization loops can treat the value as +inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .forms import Form, evaluate, monomial_from_rescaled
from .norms import min_sphere, sphere_surface
from .streams import DEFAULT_SEED, substream, unit_sphere
from . import sos as _sos

__all__ = [
    "VolumeEstimate",
    "GaussianLikeLaw",
    "ball_volume",
    "kappa",
    "volume_laplace_mc",
    "volume_spherical_mc",
    "volume_quadratic_exact",
    "volume_gradient",
    "gaussian_like_moment",
    "normalize_to_probability",
]

# importance weights whose sample variance exceeds this multiple of the
# squared mean indicate a form that slipped through negativity screening
_WEIGHT_BLOWUP = 1e6


@dataclass(frozen=True)
class VolumeEstimate:
    value: float            # math.inf flags an infinite sublevel set
    std_error: float
    samples: int
    seed: int
    method: str

    @property
    def infinite(self) -> bool:
        return math.isinf(self.value)

    def __post_init__(self):
        if self.std_error < 0:
            raise ValueError("std_error must be nonnegative")
        if not (self.value >= 0 or math.isinf(self.value)):
            raise ValueError("volume must be nonnegative or infinite")


@dataclass(frozen=True)
class GaussianLikeLaw:
    """Probability law with density exp(-kappa |x|^d) on R^n."""

    n: int
    d: int

    @property
    def kappa(self) -> float:
        return kappa(self.n, self.d)


def ball_volume(n: int) -> float:
    """Volume of the unit Euclidean ball: pi^(n/2) / Gamma(n/2 + 1)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def kappa(n: int, d: int) -> float:
    """Scale making x -> exp(-kappa |x|^d) a probability density on R^n."""
    if d % 2 != 0:
        raise ValueError(f"even degree required, got d={d}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return (math.gamma(1 + n / d) / math.gamma(1 + n / 2)) ** (d / n) * math.pi ** (d / 2)


def _screen_scale(f: Form, seed: int, quick: bool = False):
    """Estimated minimum of f on the sphere; nonpositive means v(f) = inf.

    The quick variant takes the minimum over one vectorized sphere sample
    (enough for forms known nonnegative by construction); the full variant
    refines it by multistart descent.
    """
    if quick:
        pts = unit_sphere(substream(seed, block=0), 512, f.n)
        return float(np.min(evaluate(f, pts)))
    est = min_sphere(f, restarts=32, iters=100, seed=seed)
    return est.value


def _radial_samples(n: int, d: int, scale: float, samples: int,
                    rng: np.random.Generator):
    """Points x = r * theta with radial law t = scale * r^d ~ Gamma(n/d)."""
    theta = unit_sphere(rng, samples, n)
    t = rng.standard_gamma(n / d, size=samples)
    r = (t / scale) ** (1.0 / d)
    return r[:, None] * theta, t


def _laplace_weights(f: Form, samples: int, seed: int,
                     scale: float | None = None, quick_screen: bool = False,
                     block: int = 0):
    """Importance weights for integrating exp(-f) dx.

    Reference law: density C * exp(-scale |x|^d) with the scale set to the
    (estimated) minimum of f on the sphere, so that weights are bounded by
    (kappa/scale)^(n/d).  C = (scale/kappa)^(n/d) by the scaling identity
    for the Gaussian-like law.  Returns (x, w) or None when screening
    detects an indefinite form.

    A caller-supplied ``scale`` bypasses screening entirely; with the seed
    fixed this makes the estimate a smooth function of the coefficients
    (common random numbers for finite-difference checks and solvers).
    ``block`` selects a disjoint substream of the seed, so iterative
    callers can refresh randomness without changing the seed.
    """
    n, d = f.n, f.d
    if scale is not None:
        smin = scale
    else:
        smin = _screen_scale(f, seed, quick=quick_screen)
    if smin <= 0:
        return None
    kap = kappa(n, d)
    rng = substream(seed, block=1 + block)
    x, t = _radial_samples(n, d, smin, samples, rng)
    # log w = (n/d) log(kappa/scale) + scale*|x|^d - f(x), and scale*|x|^d = t
    logw = (n / d) * math.log(kap / smin) + t - evaluate(f, x)
    if np.max(logw) > 700.0:
        raise FloatingPointError("importance weight overflow; form is badly scaled")
    w = np.exp(logw)
    return x, w


def _blown_up(w: np.ndarray) -> bool:
    m = w.mean()
    return m <= 0 or w.var(ddof=1) > _WEIGHT_BLOWUP * m * m


def volume_laplace_mc(f: Form, samples: int = 100_000, seed: int = DEFAULT_SEED,
                      scale: float | None = None, quick_screen: bool = False,
                      block: int = 0) -> VolumeEstimate:
    """v(f) via v(f) = integral exp(-f) dx / Gamma(1 + n/d)."""
    if samples < 10:
        raise ValueError("need at least 10 samples")
    sw = _laplace_weights(f, samples, seed, scale=scale,
                          quick_screen=quick_screen, block=block)
    if sw is None:
        return VolumeEstimate(math.inf, 0.0, samples, seed, "laplace")
    _, w = sw
    if _blown_up(w):
        return VolumeEstimate(math.inf, 0.0, samples, seed, "laplace")
    gam = math.gamma(1 + f.n / f.d)
    value = float(w.mean()) / gam
    std_error = float(w.std(ddof=1)) / math.sqrt(samples) / gam
    return VolumeEstimate(value, std_error, samples, seed, "laplace")


def volume_spherical_mc(f: Form, samples: int = 100_000, seed: int = DEFAULT_SEED,
                        quick_screen: bool = False,
                        block: int = 0) -> VolumeEstimate:
    """v(f) via polar coordinates: (surface/n) * E_uniform[f^(-n/d)].

    For forms bounded away from zero on the sphere the integrand is
    bounded, so this route is robust for strongly anisotropic forms where
    importance weights of the Laplace route become heavy-tailed.
    """
    if samples < 10:
        raise ValueError("need at least 10 samples")
    n, d = f.n, f.d
    if _screen_scale(f, seed, quick=quick_screen) <= 0:
        return VolumeEstimate(math.inf, 0.0, samples, seed, "spherical")
    rng = substream(seed, block=1 + block)
    vals = evaluate(f, unit_sphere(rng, samples, n))
    if np.any(vals <= 0):
        return VolumeEstimate(math.inf, 0.0, samples, seed, "spherical")
    g = vals ** (-n / d)
    factor = sphere_surface(n) / n
    value = factor * float(g.mean())
    std_error = factor * float(g.std(ddof=1)) / math.sqrt(samples)
    return VolumeEstimate(value, std_error, samples, seed, "spherical")


def volume_quadratic_exact(A) -> float:
    """vol{x^t A x <= 1} = ball_volume(n) / sqrt(det A), A positive definite."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    eig = _sos.eigh(A)
    if eig.eigenvalues[-1] <= 0:
        raise ValueError("matrix is not positive definite")
    return ball_volume(n) / math.sqrt(float(np.prod(eig.eigenvalues)))


def volume_gradient(f: Form, samples: int = 100_000, seed: int = DEFAULT_SEED,
                    scale: float | None = None, quick_screen: bool = False,
                    block: int = 0) -> np.ndarray:
    """Gradient of v with respect to the rescaled coefficients of f.

    Differentiates the Laplace identity under the integral and reuses the
    sample stream of :func:`volume_laplace_mc` (same seed and scale give
    common random numbers).
    """
    sw = _laplace_weights(f, samples, seed, scale=scale,
                          quick_screen=quick_screen, block=block)
    if sw is None:
        raise ValueError("form is not strictly positive on the sphere")
    x, w = sw
    if _blown_up(w):
        raise ValueError("importance weights blew up; form is near-indefinite")
    table = f.table
    gam = math.gamma(1 + f.n / f.d)
    from .forms import _monomial_values
    basis = _monomial_values(table, x) * table.sqrt_mult[None, :]
    return -(basis * w[:, None]).mean(axis=0) / gam


def gaussian_like_moment(alpha, n: int, d: int) -> float:
    """Moment integral x^alpha against the density exp(-kappa |x|^d).

    Equals a Gamma-ratio multiple of the corresponding moment of the
    Gaussian exp(-kappa^(2/d) |x|^2); zero whenever any alpha_i is odd.
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n:
        raise ValueError(f"alpha has length {len(alpha)}, expected n={n}")
    if any(a % 2 for a in alpha):
        return 0.0
    k = sum(alpha)
    c = kappa(n, d) ** (2.0 / d)
    gauss = 1.0
    for a in alpha:
        gauss *= math.gamma((a + 1) / 2) / c ** ((a + 1) / 2)
    ratio = math.gamma(1 + (n + k) / d) / math.gamma(1 + (n + k) / 2)
    return ratio * gauss


def normalize_to_probability(f: Form, samples: int = 200_000,
                             seed: int = DEFAULT_SEED, volume: float | None = None):
    """Scale c such that exp(-c f) integrates to 1 over R^n.

    Uses c = (Gamma(1 + n/d) * v(f))^(d/n), from the homogeneity
    v(c f) = c^(-n/d) v(f).  Pass ``volume`` to shortcut the Monte-Carlo
    estimate with a known value of v(f).
    """
    n, d = f.n, f.d
    if volume is None:
        est = volume_laplace_mc(f, samples=samples, seed=seed)
        if est.infinite:
            raise ValueError("cannot normalize a form with infinite sublevel volume")
        volume = est.value
    c = (math.gamma(1 + n / d) * volume) ** (d / n)
    return c, Form(n, d, c * f.coeffs)
