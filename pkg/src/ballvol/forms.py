"""Dense homogeneous polynomials in the rescaled monomial basis.

A degree-d form in n variables is stored as a flat coefficient vector
indexed by a canonical enumeration of the exponent vectors alpha with
|alpha| = d.  Coefficients live in the *rescaled* basis

    f(x) = sum_alpha  f_alpha * sqrt(multinomial(d, alpha)) * x^alpha,

so that the apolar (Bombieri) product of two forms is the plain dot
product of their coefficient vectors and orthogonal changes of variables
act orthogonally on coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "MultiIndexTable",
    "Form",
    "multi_index_table",
    "multinomial",
    "rescaled_from_monomial",
    "monomial_from_rescaled",
    "ball_form",
    "power_form",
    "evaluate",
    "bombieri_product",
    "bombieri_norm",
    "bombieri_norm_ball_exact",
    "nuclear_norm_ball",
    "nuclear_upper_bound",
    "compose_linear",
    "apply_orthogonal",
    "differentiate",
    "random_orthogonal",
    "check_orthogonal",
]

# Above this many basis elements the dense representation stops being a
# desk-scale object; refuse rather than thrash.
_MAX_TABLE_SIZE = 2_000_000


def multinomial(d: int, alpha) -> int:
    """Multinomial coefficient d! / (alpha_1! ... alpha_n!), exact integer."""
    out = 1
    rest = d
    for a in alpha:
        out *= math.comb(rest, a)
        rest -= a
    return out


@lru_cache(maxsize=None)
def _index_tuples(n: int, d: int) -> tuple:
    """All exponent vectors of total degree d in n variables.

    Canonical order: first coordinate descending, recursively (graded-lex
    within the fixed degree).  The order is frozen: Gram matrix layout and
    the file formats depend on it.
    """
    if n == 1:
        return ((d,),)
    out = []
    for a0 in range(d, -1, -1):
        for tail in _index_tuples(n - 1, d - a0):
            out.append((a0,) + tail)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class MultiIndexTable:
    """Canonical enumeration of exponent vectors of one fixed degree."""

    n: int
    d: int
    indices: tuple = field(repr=False)
    position: dict = field(repr=False)
    exponents: np.ndarray = field(repr=False)   # (size, n) int array
    sqrt_mult: np.ndarray = field(repr=False)   # sqrt of multinomial per row

    @property
    def size(self) -> int:
        return len(self.indices)

    def index_of(self, alpha) -> int:
        return self.position[tuple(alpha)]


@lru_cache(maxsize=None)
def multi_index_table(n: int, d: int) -> MultiIndexTable:
    """Build (and cache) the canonical multi-index table for (n, d)."""
    if n < 1:
        raise ValueError(f"need at least one variable, got n={n}")
    if d < 0:
        raise ValueError(f"degree must be nonnegative, got d={d}")
    if math.comb(d + n - 1, n - 1) > _MAX_TABLE_SIZE:
        raise OverflowError(
            f"basis of size C({d + n - 1},{n - 1}) exceeds the supported "
            f"capacity ({_MAX_TABLE_SIZE})"
        )
    idx = _index_tuples(n, d)
    pos = {a: i for i, a in enumerate(idx)}
    expo = np.array(idx, dtype=np.int64).reshape(len(idx), n)
    smult = np.array([math.sqrt(multinomial(d, a)) for a in idx])
    return MultiIndexTable(n=n, d=d, indices=idx, position=pos,
                           exponents=expo, sqrt_mult=smult)


@dataclass(frozen=True, eq=False)
class Form:
    """n-variate homogeneous polynomial of degree d, rescaled-basis coeffs."""

    n: int
    d: int
    coeffs: np.ndarray

    def __post_init__(self):
        table = multi_index_table(self.n, self.d)
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (table.size,):
            raise ValueError(
                f"coefficient vector has shape {c.shape}, expected "
                f"({table.size},) for (n={self.n}, d={self.d})"
            )
        object.__setattr__(self, "coeffs", c)
        self.coeffs.setflags(write=False)

    @property
    def table(self) -> MultiIndexTable:
        return multi_index_table(self.n, self.d)

    def __call__(self, x):
        return evaluate(self, x)


def rescaled_from_monomial(n: int, d: int, monomial_coeffs) -> Form:
    """Form with the given plain-monomial coefficients c_alpha."""
    table = multi_index_table(n, d)
    c = np.asarray(monomial_coeffs, dtype=float)
    if c.shape != (table.size,):
        raise ValueError(
            f"monomial coefficient vector has shape {c.shape}, expected "
            f"({table.size},)"
        )
    return Form(n, d, c / table.sqrt_mult)


def monomial_from_rescaled(f: Form) -> np.ndarray:
    """Plain-monomial coefficients of f (inverse of rescaled_from_monomial)."""
    return f.coeffs * f.table.sqrt_mult


def zero_form(n: int, d: int) -> Form:
    return Form(n, d, np.zeros(multi_index_table(n, d).size))


def ball_form(n: int, d: int) -> Form:
    """The form |x|^d = (x_1^2 + ... + x_n^2)^(d/2), d even."""
    if d % 2 != 0:
        raise ValueError(f"|x|^d is a form only for even d, got d={d}")
    table = multi_index_table(n, d)
    half = multi_index_table(n, d // 2)
    mono = np.zeros(table.size)
    for beta in half.indices:
        mono[table.index_of(tuple(2 * b for b in beta))] = multinomial(d // 2, beta)
    return rescaled_from_monomial(n, d, mono)


def power_form(y, d: int) -> Form:
    """d-th power of the linear form x -> (y . x)."""
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    table = multi_index_table(n, d)
    # (y.x)^d = sum_alpha multinomial * y^alpha x^alpha, so the rescaled
    # coefficients are sqrt(multinomial) * y^alpha.
    ypow = np.prod(y[None, :] ** table.exponents, axis=1)
    return Form(n, d, table.sqrt_mult * ypow)


def _monomial_values(table: MultiIndexTable, x: np.ndarray) -> np.ndarray:
    """Values x^alpha for every table row; x has shape (m, n), result (m, size)."""
    m = x.shape[0]
    d = int(table.exponents.max(initial=0))
    out = np.empty((m, table.size))
    # per-variable power ladders keep memory at O(m * n * d)
    pows = [None] * table.n
    for i in range(table.n):
        ladder = np.empty((d + 1, m))
        ladder[0] = 1.0
        for k in range(1, d + 1):
            ladder[k] = ladder[k - 1] * x[:, i]
        pows[i] = ladder
    for t, alpha in enumerate(table.indices):
        acc = None
        for i, a in enumerate(alpha):
            if a == 0:
                continue
            acc = pows[i][a] if acc is None else acc * pows[i][a]
        out[:, t] = 1.0 if acc is None else acc
    return out


def evaluate(f: Form, x):
    """Evaluate f at a point (n,) or a batch of points (m, n)."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.shape[1] != f.n:
        raise ValueError(f"points have dimension {x.shape[1]}, form has n={f.n}")
    table = f.table
    mono = monomial_from_rescaled(f)
    vals = _monomial_values(table, x) @ mono
    return float(vals[0]) if single else vals


def bombieri_product(f: Form, g: Form) -> float:
    """Apolar inner product; plain dot product in the rescaled basis."""
    if (f.n, f.d) != (g.n, g.d):
        raise ValueError(
            f"shape mismatch: (n={f.n}, d={f.d}) vs (n={g.n}, d={g.d})"
        )
    return float(f.coeffs @ g.coeffs)


def bombieri_norm(f: Form) -> float:
    return float(np.linalg.norm(f.coeffs))


def bombieri_norm_ball_exact(n: int, d: int) -> float:
    """Closed form for the Bombieri norm of |x|^d:

    sqrt( prod_{i=0}^{d/2-1} (2i + n) / (2i + 1) ).
    """
    if d % 2 != 0:
        raise ValueError(f"even degree required, got d={d}")
    prod = 1.0
    for i in range(d // 2):
        prod *= (2 * i + n) / (2 * i + 1)
    return math.sqrt(prod)


def nuclear_norm_ball(n: int, d: int) -> float:
    """Nuclear norm of |x|^d; equals the squared Bombieri norm."""
    if d % 2 != 0:
        raise ValueError(f"even degree required, got d={d}")
    return bombieri_norm_ball_exact(n, d) ** 2


def nuclear_upper_bound(weights, f: Form, tol: float = 1e-8) -> float:
    """Certified upper bound sum |lambda_k| on the nuclear norm of f.

    ``weights`` is a list of (lambda_k, y_k) with y_k on the unit sphere;
    the decomposition sum lambda_k (y_k . x)^d must reconstruct f within
    ``tol`` in Bombieri norm, otherwise the certificate is rejected.
    """
    acc = np.zeros_like(f.coeffs)
    total = 0.0
    for lam, y in weights:
        y = np.asarray(y, dtype=float)
        if abs(np.linalg.norm(y) - 1.0) > 1e-10:
            raise ValueError("decomposition points must lie on the unit sphere")
        acc = acc + lam * power_form(y, f.d).coeffs
        total += abs(lam)
    residual = np.linalg.norm(acc - f.coeffs)
    if residual > tol:
        raise ValueError(
            f"invalid certificate: reconstruction residual {residual:.3e} "
            f"exceeds tol {tol:.3e}"
        )
    return total


# ---------------------------------------------------------------------------
# linear changes of variables
# ---------------------------------------------------------------------------

def _mono_mul(n, c1, d1, c2, d2):
    """Multiply two homogeneous polys given as monomial coeff vectors."""
    t1 = multi_index_table(n, d1)
    t2 = multi_index_table(n, d2)
    tr = multi_index_table(n, d1 + d2)
    out = np.zeros(tr.size)
    nz1 = np.nonzero(c1)[0]
    nz2 = np.nonzero(c2)[0]
    for i in nz1:
        ai = t1.indices[i]
        for j in nz2:
            bj = t2.indices[j]
            out[tr.index_of(tuple(a + b for a, b in zip(ai, bj)))] += c1[i] * c2[j]
    return out


def compose_linear(f: Form, M) -> Form:
    """Coefficients of x -> f(Mx) for an arbitrary n x n matrix M."""
    M = np.asarray(M, dtype=float)
    if M.shape != (f.n, f.n):
        raise ValueError(f"matrix has shape {M.shape}, expected ({f.n}, {f.n})")
    n, d = f.n, f.d
    if d == 0:
        return f
    mono = monomial_from_rescaled(f)
    # power ladders of the substituted variables x_i -> (M x)_i
    ladders = []
    for i in range(n):
        lin = M[i, :].copy()
        lad = [np.ones(1), lin]
        for k in range(2, d + 1):
            lad.append(_mono_mul(n, lad[-1], k - 1, lin, 1))
        ladders.append(lad)
    table = f.table
    out = np.zeros(table.size)
    for t in np.nonzero(mono)[0]:
        alpha = table.indices[t]
        acc, deg = None, 0
        for i, a in enumerate(alpha):
            if a == 0:
                continue
            if acc is None:
                acc, deg = ladders[i][a], a
            else:
                acc = _mono_mul(n, acc, deg, ladders[i][a], a)
                deg += a
        out += mono[t] * acc
    return rescaled_from_monomial(n, d, out)


def check_orthogonal(rho, tol: float = 1e-12) -> np.ndarray:
    """Validate that rho is orthogonal within max-entry tolerance."""
    rho = np.asarray(rho, dtype=float)
    n = rho.shape[0]
    if rho.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    err = np.max(np.abs(rho @ rho.T - np.eye(n)))
    if err > tol:
        raise ValueError(f"matrix is not orthogonal: max |rho rho^t - id| = {err:.3e}")
    return rho


def apply_orthogonal(f: Form, rho) -> Form:
    """Substitution action x -> f(rho^{-1} x) for orthogonal rho."""
    rho = check_orthogonal(rho, tol=1e-10)
    return compose_linear(f, rho.T)


def differentiate(f: Form, i: int) -> Form:
    """Partial derivative with respect to x_i, as a degree d-1 form."""
    if f.d < 1:
        raise ValueError("cannot differentiate a degree-0 form")
    if not 0 <= i < f.n:
        raise ValueError(f"variable index {i} out of range for n={f.n}")
    table = f.table
    lower = multi_index_table(f.n, f.d - 1)
    mono = monomial_from_rescaled(f)
    out = np.zeros(lower.size)
    for t, alpha in enumerate(table.indices):
        a = alpha[i]
        if a == 0 or mono[t] == 0.0:
            continue
        beta = list(alpha)
        beta[i] -= 1
        out[lower.index_of(tuple(beta))] += a * mono[t]
    return rescaled_from_monomial(f.n, f.d - 1, out)


def gradient_forms(f: Form) -> list:
    """All partial derivatives of f, in variable order."""
    return [differentiate(f, i) for i in range(f.n)]


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix (QR of a Gaussian, sign-fixed)."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))
