"""Sphere-based norms of forms.

L^p norms are taken with respect to the *unnormalized* Riemannian volume
density on S^{n-1}: the total mass is the full surface area
2 pi^{n/2} / Gamma(n/2), not 1.  Monte-Carlo estimates therefore carry the
surface-area factor explicitly; dropping it is the classic off-by-total-
mass bug.

sup/min estimates come from multistart projected gradient ascent/descent
on the sphere and are one-sided bounds (a lower bound for sup, an upper
bound for min).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .forms import Form, evaluate, gradient_forms
from .streams import DEFAULT_SEED, substream, unit_sphere

__all__ = [
    "SphereSampler",
    "NormEstimate",
    "sphere_surface",
    "lp_sphere_norm",
    "lp_norm_ball_exact",
    "sup_sphere_norm",
    "min_sphere",
]


@dataclass
class SphereSampler:
    """Deterministic stream of uniform points on S^{n-1}.

    Each call to :meth:`take` consumes one block of the (seed, counter)
    substream; the same (seed, counter) always reproduces the same points.
    """

    n: int
    seed: int = DEFAULT_SEED
    counter: int = 0

    def take(self, m: int) -> np.ndarray:
        rng = substream(self.seed, self.counter)
        self.counter += 1
        return unit_sphere(rng, m, self.n)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    std_error: float
    samples: int
    kind: str

    def __post_init__(self):
        if self.std_error < 0:
            raise ValueError("std_error must be nonnegative")


def sphere_surface(n: int) -> float:
    """Surface area of S^{n-1}: 2 pi^{n/2} / Gamma(n/2)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def lp_sphere_norm(f: Form, p: float, samples: int = 100_000,
                   seed: int = DEFAULT_SEED) -> NormEstimate:
    """Monte-Carlo L^p(S^{n-1}) norm of f.

    Estimates (surface * E|f|^p)^(1/p) from uniform sphere samples, with a
    delta-method standard error.
    """
    if p < 1:
        raise ValueError(f"need p >= 1, got p={p}")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    pts = SphereSampler(f.n, seed).take(samples)
    vals = np.abs(evaluate(f, pts)) ** p
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite form values on the sphere")
    mean = float(vals.mean())
    sem = float(vals.std(ddof=1) / math.sqrt(samples))
    value = (sphere_surface(f.n) * mean) ** (1.0 / p)
    std_error = value * sem / (p * mean) if mean > 0 else 0.0
    return NormEstimate(value=value, std_error=std_error, samples=samples, kind="lp")


def lp_norm_ball_exact(n: int, p: float) -> float:
    """L^p(S^{n-1}) norm of |x|^d (any d): surface area to the power 1/p."""
    if p < 1:
        raise ValueError(f"need p >= 1, got p={p}")
    return sphere_surface(n) ** (1.0 / p)


def _multistart_extremum(f: Form, restarts: int, iters: int, seed: int,
                         maximize: bool) -> NormEstimate:
    """Projected gradient ascent/descent of f (|f| when maximizing) on S^{n-1}."""
    if restarts < 1:
        raise ValueError("need at least one restart")
    x = SphereSampler(f.n, seed).take(restarts)
    grads = gradient_forms(f)
    step = 0.1 / max(f.d, 1)
    sign = 1.0 if maximize else -1.0

    def objective(pts):
        v = evaluate(f, pts)
        return np.abs(v) if maximize else v

    best = objective(x)
    for _ in range(iters):
        v = evaluate(f, x)
        g = np.stack([evaluate(gi, x) for gi in grads], axis=1)
        if maximize:
            g = g * np.sign(v)[:, None]
        # tangential step, then retract by normalization
        g_t = g - (np.sum(g * x, axis=1)[:, None]) * x
        x = x + sign * step * g_t
        x = x / np.linalg.norm(x, axis=1)[:, None]
        cur = objective(x)
        best = np.maximum(best, cur) if maximize else np.minimum(best, cur)
    value = float(best.max() if maximize else best.min())
    return NormEstimate(value=value, std_error=0.0, samples=restarts,
                        kind="sup" if maximize else "min")


def sup_sphere_norm(f: Form, restarts: int = 32, iters: int = 200,
                    seed: int = DEFAULT_SEED) -> NormEstimate:
    """Lower bound on max_{S^{n-1}} |f| by multistart projected ascent."""
    return _multistart_extremum(f, restarts, iters, seed, maximize=True)


def min_sphere(f: Form, restarts: int = 32, iters: int = 200,
               seed: int = DEFAULT_SEED) -> NormEstimate:
    """Upper bound on min_{S^{n-1}} f; a negative value certifies that the
    sublevel set {f <= 1} has infinite volume."""
    return _multistart_extremum(f, restarts, iters, seed, maximize=False)
