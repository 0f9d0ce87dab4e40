"""Volume minimization over norm balls and its randomized verification.

Two convex programs are solved numerically by projected subgradient
descent with Monte-Carlo gradients:

* minimize v(f) over {||f|| <= 1} in coefficient space, for the Bombieri
  norm (orthogonally invariant) and for the l1 norm of monomial
  coefficients (not invariant; its minimizer is an axis form, not the
  ball form);
* minimize v(f) over sums of squares whose Gram matrix is PSD with
  Schatten-p norm at most 1, in Gram-matrix space.

For orthogonally invariant norms the optimum is known in closed form
(theoretical_opt); verify_lower_bound samples random feasible points and
checks that none beats it beyond Monte-Carlo tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .forms import (Form, ball_form, bombieri_norm, bombieri_norm_ball_exact,
                    monomial_from_rescaled, multi_index_table,
                    nuclear_norm_ball, nuclear_upper_bound, power_form,
                    rescaled_from_monomial)
from .norms import lp_norm_ball_exact, lp_sphere_norm, sup_sphere_norm
from .sos import (GramMatrix, form_from_gram, gram_dimension,
                  gram_from_form_map, gram_from_squares,
                  project_psd_schatten_ball, schatten_norm, simplex_projection,
                  spectral_norm)
from .streams import DEFAULT_SEED, substream, unit_sphere
from .volume import (ball_volume, kappa, normalize_to_probability,
                     volume_gradient, volume_laplace_mc, volume_spherical_mc,
                     _screen_scale)

__all__ = [
    "NormSpec",
    "SolverTrace",
    "theoretical_opt",
    "minimize_volume_form",
    "minimize_volume_sos",
    "verify_lower_bound",
    "verify_pstar_equivalence",
]

_FORM_KINDS = {"bombieri", "l1_coeff", "lp_sphere", "sup_sphere", "nuclear"}
_MATRIX_KINDS = {"schatten", "spectral"}
_INVARIANT_KINDS = {"bombieri", "lp_sphere", "sup_sphere", "nuclear",
                    "schatten", "spectral"}


@dataclass(frozen=True)
class NormSpec:
    """A choice of norm for the volume-minimization programs."""

    kind: str
    p: float | None = None

    def __post_init__(self):
        if self.kind not in _FORM_KINDS | _MATRIX_KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind in ("lp_sphere", "schatten"):
            if self.p is None or self.p < 1:
                raise ValueError(f"kind {self.kind!r} needs p >= 1")

    @property
    def invariant(self) -> bool:
        return self.kind in _INVARIANT_KINDS

    def label(self) -> str:
        if self.p is not None:
            p = "inf" if math.isinf(self.p) else f"{self.p:g}"
            return f"{self.kind}(p={p})"
        return self.kind


@dataclass
class SolverTrace:
    """Iterate history of one projected-subgradient run."""

    iterates: list = field(default_factory=list)  # (objective, step, residual)
    final_form: Form | None = None
    final_gram: GramMatrix | None = None
    final_objective: float = math.nan
    seed: int = DEFAULT_SEED
    samples: int = 0

    def record(self, objective, step, residual):
        self.iterates.append((float(objective), float(step), float(residual)))

    @property
    def objectives(self):
        return [it[0] for it in self.iterates]


def theoretical_opt(norm: NormSpec, n: int, d: int) -> float:
    """Closed-form optimal value ||b||^(n/d) * vol(B_n) for invariant norms."""
    vb = ball_volume(n)
    if norm.kind == "bombieri":
        nb = bombieri_norm_ball_exact(n, d)
    elif norm.kind == "lp_sphere":
        nb = lp_norm_ball_exact(n, norm.p)
    elif norm.kind == "sup_sphere":
        nb = 1.0
    elif norm.kind == "nuclear":
        nb = nuclear_norm_ball(n, d)
    elif norm.kind == "schatten":
        nb = gram_dimension(n, d) ** (1.0 / norm.p)
    elif norm.kind == "spectral":
        nb = 1.0
    else:
        raise ValueError(
            f"no closed-form optimum for non-invariant norm {norm.kind!r}"
        )
    return nb ** (n / d) * vb


# l1 feasible radius: the axis form (1/sqrt(n)) sum x_i^d that realizes the
# non-invariant optimum has plain coefficient l1-norm sqrt(n), so the unit
# ball of the (scaled) l1 norm used here is {sum |c_alpha| <= sqrt(n)}.
def _l1_radius(n: int) -> float:
    return math.sqrt(n)


def form_norm_value(f: Form, norm: NormSpec, samples: int = 65536,
                    seed: int = DEFAULT_SEED):
    """(value, std_error) of the given norm of f; exact norms report 0 error."""
    if norm.kind == "bombieri":
        return bombieri_norm(f), 0.0
    if norm.kind == "l1_coeff":
        return float(np.sum(np.abs(monomial_from_rescaled(f)))) / _l1_radius(f.n), 0.0
    if norm.kind == "lp_sphere":
        est = lp_sphere_norm(f, norm.p, samples=samples, seed=seed)
        return est.value, est.std_error
    if norm.kind == "sup_sphere":
        est = sup_sphere_norm(f, restarts=24, iters=120, seed=seed)
        return est.value, 0.0
    raise ValueError(f"cannot evaluate norm kind {norm.kind!r} on a form")


def _project_form(coeffs: np.ndarray, norm: NormSpec, table) -> np.ndarray:
    """Project onto the unit sphere of the norm (optimum lies on the boundary;
    scaling a feasible interior point up to the boundary only lowers v)."""
    if norm.kind == "bombieri":
        nrm = np.linalg.norm(coeffs)
        if nrm == 0:
            raise ValueError("cannot project the zero form")
        return coeffs / nrm
    if norm.kind == "l1_coeff":
        mono = coeffs * table.sqrt_mult
        radius = _l1_radius(table.n)
        l1 = np.sum(np.abs(mono))
        if l1 > radius:
            mono = np.sign(mono) * simplex_projection(np.abs(mono), radius)
            l1 = np.sum(np.abs(mono))
        if l1 == 0:
            raise ValueError("cannot project the zero form")
        mono *= radius / l1
        return mono / table.sqrt_mult
    raise ValueError(f"no coefficient-space projection for kind {norm.kind!r}")


def minimize_volume_form(norm: NormSpec, n: int, d: int, iters: int = 80,
                         samples: int = 20_000, seed: int = DEFAULT_SEED,
                         step0: float | None = None,
                         final_samples: int = 200_000) -> SolverTrace:
    """Projected subgradient descent of v over the unit ball of a
    coefficient-space norm (bombieri or l1_coeff)."""
    if norm.kind not in ("bombieri", "l1_coeff"):
        raise ValueError(f"form solver supports bombieri/l1_coeff, got {norm.kind!r}")
    if d % 2 != 0:
        raise ValueError(f"even degree required, got d={d}")
    if iters < 1:
        raise ValueError("need at least one iteration")
    table = multi_index_table(n, d)
    b = ball_form(n, d)
    nrm0, _ = form_norm_value(b, norm)
    coeffs = b.coeffs / nrm0

    trace = SolverTrace(seed=seed, samples=samples)

    def objective(c, block):
        f = Form(n, d, c)
        scale = _screen_scale(f, seed, quick=True)
        if scale <= 0:
            return math.inf, f
        est = volume_laplace_mc(f, samples=samples, seed=seed,
                                scale=scale, block=block)
        return (math.inf if est.infinite else est.value), f

    best_c, best_v = coeffs, objective(coeffs, 0)[0]
    s0 = step0
    for k in range(iters):
        f_k = Form(n, d, coeffs)
        scale = _screen_scale(f_k, seed, quick=True)
        grad = volume_gradient(f_k, samples=samples, seed=seed,
                               scale=scale, block=k + 1)
        if norm.kind == "l1_coeff":
            # descend on the plain-monomial coefficients (the norm's metric)
            grad = grad / table.sqrt_mult
        if s0 is None:
            s0 = 0.5 / float(np.linalg.norm(grad))
        step = s0 / math.sqrt(k + 1)
        for _ in range(30):
            if norm.kind == "l1_coeff":
                mono = coeffs * table.sqrt_mult - step * grad
                cand = _project_form(mono / table.sqrt_mult, norm, table)
            else:
                cand = _project_form(coeffs - step * grad, norm, table)
            v_cand, _ = objective(cand, 0)
            if math.isfinite(v_cand):
                break
            step *= 0.5
        else:
            v_cand, cand = best_v, coeffs
        coeffs = cand
        nrm, _ = form_norm_value(Form(n, d, coeffs), norm)
        trace.record(v_cand, step, abs(nrm - 1.0))
        if v_cand < best_v:
            best_v, best_c = v_cand, coeffs

    final = Form(n, d, best_c)
    est = volume_laplace_mc(final, samples=final_samples, seed=seed, block=iters + 1)
    trace.final_form = final
    trace.final_objective = est.value
    return trace


def minimize_volume_sos(p, n: int, d: int, iters: int = 80,
                        samples: int = 20_000, seed: int = DEFAULT_SEED,
                        step0: float | None = None,
                        final_samples: int = 200_000) -> SolverTrace:
    """Projected subgradient descent of v over {G PSD, ||G||_p <= 1},
    p in {1, 2, inf}, in Gram-matrix space."""
    if d % 2 != 0:
        raise ValueError(f"even degree required, got d={d}")
    N = gram_dimension(n, d)
    G = np.eye(N)

    trace = SolverTrace(seed=seed, samples=samples)

    def pnorm(Gm):
        if p in (math.inf, "inf"):
            return spectral_norm(Gm)
        return schatten_norm(Gm, p)

    def objective(Gm, block):
        f = form_from_gram(GramMatrix(n, d, Gm))
        scale = _screen_scale(f, seed, quick=True)
        if scale <= 0:
            return math.inf, f
        est = volume_laplace_mc(f, samples=samples, seed=seed,
                                scale=scale, block=block)
        return (math.inf if est.infinite else est.value), f

    G = G / pnorm(G)
    best_G, best_v = G, objective(G, 0)[0]
    s0 = step0
    for k in range(iters):
        f_k = form_from_gram(GramMatrix(n, d, G))
        scale = _screen_scale(f_k, seed, quick=True)
        grad_f = volume_gradient(f_k, samples=samples, seed=seed,
                                 scale=scale, block=k + 1)
        grad_G = gram_from_form_map(n, d, grad_f)
        if s0 is None:
            s0 = 0.5 / float(np.linalg.norm(grad_G))
        step = s0 / math.sqrt(k + 1)
        for _ in range(30):
            cand = project_psd_schatten_ball(G - step * grad_G, p)
            nrm = pnorm(cand)
            if nrm > 0:
                cand = cand / nrm
                v_cand, _ = objective(cand, 0)
                if math.isfinite(v_cand):
                    break
            step *= 0.5
        else:
            v_cand, cand = best_v, G
        G = cand
        trace.record(v_cand, step, abs(pnorm(G) - 1.0))
        if v_cand < best_v:
            best_v, best_G = v_cand, G

    gram = GramMatrix(n, d, best_G)
    final = form_from_gram(gram)
    est = volume_laplace_mc(final, samples=final_samples, seed=seed, block=iters + 1)
    trace.final_form = final
    trace.final_gram = gram
    trace.final_objective = est.value
    return trace


# ---------------------------------------------------------------------------
# randomized verification of the closed-form lower bounds
# ---------------------------------------------------------------------------

def _random_feasible_form(norm: NormSpec, n: int, d: int, rng, seed, block):
    """Random feasible point of the program: a unit-norm nonnegative form.

    Returns (form, norm_std_error).  Nonnegativity comes from squaring:
    form-norm kinds draw a random Gram of squared half-degree forms,
    matrix kinds normalize the Gram itself, the nuclear kind draws a
    certified decomposition into d-th powers with weights summing to 1.
    """
    if norm.kind == "nuclear":
        N = gram_dimension(n, d)
        k = 2 * N
        lam = np.abs(rng.standard_normal(k))
        lam /= lam.sum()
        ys = unit_sphere(rng, k, n)
        table = multi_index_table(n, d)
        coeffs = np.zeros(table.size)
        for lam_k, y in zip(lam, ys):
            coeffs += lam_k * power_form(y, d).coeffs
        f = Form(n, d, coeffs)
        # certificate check: sum |lam| = 1 bounds the nuclear norm
        bound = nuclear_upper_bound(list(zip(lam, ys)), f)
        assert abs(bound - 1.0) < 1e-12
        return f, 0.0
    if norm.kind in _MATRIX_KINDS:
        N = gram_dimension(n, d)
        A = rng.standard_normal((N, N))
        G = A @ A.T
        p = norm.p if norm.kind == "schatten" else math.inf
        G = G / (schatten_norm(G, p) if norm.kind == "schatten"
                 else np.abs(np.linalg.eigvalsh(G)).max())
        return form_from_gram(GramMatrix(n, d, G)), 0.0
    # form-norm kinds: random sum of squares, rescaled to unit norm
    N = gram_dimension(n, d)
    half = multi_index_table(n, d // 2)
    squares = [Form(n, d // 2, rng.standard_normal(half.size)) for _ in range(N)]
    f = form_from_gram(gram_from_squares(squares))
    value, err = form_norm_value(f, norm, samples=4096, seed=seed + block)
    return Form(n, d, f.coeffs / value), err / value


def verify_lower_bound(norm: NormSpec, n: int, d: int, trials: int = 500,
                       seed: int = DEFAULT_SEED, samples: int = 4000,
                       rel_tol: float = 1e-3, opt_scale: float = 1.0) -> dict:
    """Sample random feasible forms and check v(f) >= theoretical_opt.

    Each trial asserts v(f) >= opt - max(3 sigma, rel_tol * opt), where
    sigma combines the volume standard error with the propagated norm
    normalization error.  Any violation is reported with its trial data;
    an empty violation list is the expected outcome.

    ``opt_scale`` multiplies the theoretical bound; values above 1 inject
    a deliberately false bound so the failure path can be exercised.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    opt = opt_scale * theoretical_opt(norm, n, d)
    min_ratio = math.inf
    ratios = []
    violations = []
    for t in range(trials):
        rng = substream(seed, block=2 * t)
        f, rel_norm_err = _random_feasible_form(norm, n, d, rng, seed, 2 * t + 1)
        # polar-coordinate route: bounded integrand for any form positive
        # on the sphere, so anisotropic samples do not bias the check
        est = volume_spherical_mc(f, samples=samples, seed=seed,
                                  quick_screen=True, block=2 * t + 1)
        if est.infinite:
            ratios.append(math.inf)
            continue
        # v(f / s) = s^(n/d) v(f): a relative norm error moves v by n/d of it
        sigma = est.std_error + est.value * (n / d) * rel_norm_err
        tol = max(3.0 * sigma, rel_tol * opt)
        ratio = est.value / opt
        ratios.append(ratio)
        min_ratio = min(min_ratio, ratio)
        if est.value < opt - tol:
            violations.append({
                "trial": t,
                "volume": est.value,
                "std_error": est.std_error,
                "tolerance": tol,
                "coeffs": [float(c) for c in f.coeffs],
            })
    finite = [r for r in ratios if math.isfinite(r)]
    return {
        "norm": norm.label(),
        "n": n,
        "d": d,
        "theoretical_opt": opt,
        "trials": trials,
        "samples": samples,
        "seed": seed,
        "min_ratio": min_ratio if math.isfinite(min_ratio) else None,
        "mean_ratio": (sum(finite) / len(finite)) if finite else None,
        "violations": violations,
        "passed": not violations,
    }


def verify_pstar_equivalence(norm: NormSpec, n: int, d: int,
                             seed: int = DEFAULT_SEED,
                             samples: int = 200_000) -> dict:
    """Check the probability-measure reformulation on the ball form.

    The normalization constant of |x|^d must equal kappa(n, d) (exactly via
    the closed-form volume, within Monte-Carlo tolerance via the Laplace
    estimator), and the reformulated optimal value is kappa * ||b||.
    """
    if not norm.invariant:
        raise ValueError("the reformulation check needs an invariant norm")
    b = ball_form(n, d)
    kap = kappa(n, d)
    c_closed, _ = normalize_to_probability(b, volume=ball_volume(n))
    est = volume_laplace_mc(b, samples=samples, seed=seed)
    c_mc, _ = normalize_to_probability(b, volume=est.value)
    # c = (Gamma(1+n/d) v)^(d/n), so sigma_c = c * (d/n) * sigma_v / v
    sigma_c = c_mc * (d / n) * est.std_error / est.value if est.value > 0 else 0.0
    if norm.kind == "bombieri":
        norm_b = bombieri_norm_ball_exact(n, d)
    elif norm.kind == "lp_sphere":
        norm_b = lp_norm_ball_exact(n, norm.p)
    elif norm.kind == "nuclear":
        norm_b = nuclear_norm_ball(n, d)
    elif norm.kind == "schatten":
        norm_b = gram_dimension(n, d) ** (1.0 / norm.p)
    else:  # sup_sphere, spectral
        norm_b = 1.0
    return {
        "norm": norm.label(),
        "n": n,
        "d": d,
        "kappa": kap,
        "c_closed_form": c_closed,
        "c_monte_carlo": c_mc,
        "c_std_error": sigma_c,
        "closed_form_rel_error": abs(c_closed - kap) / kap,
        "mc_within_3_sigma": abs(c_mc - kap) <= 3.0 * sigma_c + 1e-12,
        "opt_star": kap * norm_b,
        "seed": seed,
    }
