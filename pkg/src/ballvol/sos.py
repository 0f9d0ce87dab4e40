"""Sum-of-squares machinery: Gram matrices, spectra, and projections.

A degree-d form f is a sum of squares iff f = m(x)^t G m(x) for some
positive semidefinite symmetric G, where m(x) is the length-N vector of
rescaled monomials of degree d/2 in the canonical order.  This module
implements the (linear) Gram map and its transpose, a cyclic Jacobi
eigensolver, Schatten norms, the Euclidean projection onto
{PSD} intersect {Schatten-p ball}, and the orthogonal N x N matrix that
an orthogonal change of variables induces on the half-degree basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .forms import (Form, apply_orthogonal, check_orthogonal,
                    multi_index_table)

__all__ = [
    "GramMatrix",
    "EigenDecomposition",
    "gram_dimension",
    "form_from_gram",
    "gram_from_form_map",
    "gram_from_squares",
    "eigh",
    "schatten_norm",
    "spectral_norm",
    "project_psd_schatten_ball",
    "simplex_projection",
    "sos_decompose",
    "induced_representation",
]

_SYM_TOL = 1e-12


def gram_dimension(n: int, d: int) -> int:
    """Dimension N of the degree-d/2 monomial basis."""
    if d % 2 != 0:
        raise ValueError(f"even degree required, got d={d}")
    return math.comb(d // 2 + n - 1, n - 1)


def _as_symmetric(S, tol: float = _SYM_TOL) -> np.ndarray:
    S = S.entries if isinstance(S, GramMatrix) else np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {S.shape}")
    scale = max(1.0, float(np.max(np.abs(S))))
    if np.max(np.abs(S - S.T)) > tol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    return 0.5 * (S + S.T)


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Symmetric N x N matrix representing an SOS candidate."""

    n: int
    d: int
    entries: np.ndarray

    def __post_init__(self):
        N = gram_dimension(self.n, self.d)
        e = _as_symmetric(self.entries)
        if e.shape != (N, N):
            raise ValueError(
                f"entries have shape {e.shape}, expected ({N}, {N}) "
                f"for (n={self.n}, d={self.d})"
            )
        object.__setattr__(self, "entries", e)
        self.entries.setflags(write=False)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    eigenvalues: np.ndarray    # descending
    eigenvectors: np.ndarray   # orthonormal columns


@lru_cache(maxsize=None)
def _gram_map(n: int, d: int):
    """Index/weight arrays of the linear map entries(G) -> rescaled coeffs."""
    half = multi_index_table(n, d // 2)
    full = multi_index_table(n, d)
    N = half.size
    tidx = np.empty((N, N), dtype=np.int64)
    w = np.empty((N, N))
    for j in range(N):
        aj = half.indices[j]
        for k in range(N):
            ak = half.indices[k]
            t = full.index_of(tuple(a + b for a, b in zip(aj, ak)))
            tidx[j, k] = t
            w[j, k] = half.sqrt_mult[j] * half.sqrt_mult[k] / full.sqrt_mult[t]
    tidx.setflags(write=False)
    w.setflags(write=False)
    return tidx, w, full.size


def form_from_gram(G: GramMatrix) -> Form:
    """The degree-d form m(x)^t G m(x); linear in G."""
    tidx, w, T = _gram_map(G.n, G.d)
    coeffs = np.zeros(T)
    np.add.at(coeffs, tidx, G.entries * w)
    return Form(G.n, G.d, coeffs)


def gram_from_form_map(n: int, d: int, form_gradient: np.ndarray) -> np.ndarray:
    """Transpose of the Gram map: pull a coefficient-space gradient back to
    a symmetric matrix gradient."""
    tidx, w, T = _gram_map(n, d)
    if form_gradient.shape != (T,):
        raise ValueError(f"gradient has shape {form_gradient.shape}, expected ({T},)")
    return form_gradient[tidx] * w


def gram_from_squares(squares, n: int | None = None, half_d: int | None = None) -> GramMatrix:
    """Gram matrix sum_i s_i s_i^t of a sum of squares sum_i s_i(x)^2."""
    squares = list(squares)
    if squares:
        n, half_d = squares[0].n, squares[0].d
        if any((s.n, s.d) != (n, half_d) for s in squares):
            raise ValueError("all squares must share the same (n, degree)")
    elif n is None or half_d is None:
        raise ValueError("empty list needs explicit n and half_d")
    N = gram_dimension(n, 2 * half_d)
    G = np.zeros((N, N))
    for s in squares:
        G += np.outer(s.coeffs, s.coeffs)
    return GramMatrix(n, 2 * half_d, G)


def eigh(S, tol: float = 1e-14, max_sweeps: int = 100) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Deterministic: fixed sweep order, eigenvalues sorted descending,
    eigenvector signs fixed by their largest-magnitude component.
    """
    A = _as_symmetric(S).copy()
    N = A.shape[0]
    Q = np.eye(N)
    scale = max(1.0, float(np.max(np.abs(A))))
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.tril(A, -1) ** 2)))
        if off <= tol * scale:
            break
        for p in range(N - 1):
            for q in range(p + 1, N):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * A[:, p] - s * A[:, q]
                rot_q = s * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = rot_p, rot_q
                rot_p = c * A[p, :] - s * A[q, :]
                rot_q = s * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = rot_p, rot_q
                A[p, q] = A[q, p] = 0.0
                rot_p = c * Q[:, p] - s * Q[:, q]
                rot_q = s * Q[:, p] + c * Q[:, q]
                Q[:, p], Q[:, q] = rot_p, rot_q
    lam = np.diag(A).copy()
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    Q = Q[:, order]
    for j in range(N):
        i = int(np.argmax(np.abs(Q[:, j])))
        if Q[i, j] < 0:
            Q[:, j] = -Q[:, j]
    return EigenDecomposition(eigenvalues=lam, eigenvectors=Q)


def schatten_norm(G, p: float) -> float:
    """l^p norm of the eigenvalue vector of a symmetric matrix."""
    if p < 1:
        raise ValueError(f"need p >= 1, got p={p}")
    lam = eigh(G).eigenvalues
    return float(np.sum(np.abs(lam) ** p) ** (1.0 / p))


def spectral_norm(G) -> float:
    """Largest eigenvalue magnitude (Schatten-infinity)."""
    lam = eigh(G).eigenvalues
    return float(np.max(np.abs(lam)))


def simplex_projection(v: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Euclidean projection of v onto {w >= 0, sum w = radius}."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    k = np.arange(1, len(v) + 1)
    rho = np.nonzero(u * k > css - radius)[0][-1]
    theta = (css[rho] - radius) / (rho + 1.0)
    return np.clip(v - theta, 0.0, None)


def _project_eigenvalues(lam: np.ndarray, p) -> np.ndarray:
    lam = np.clip(lam, 0.0, None)
    if p == 1:
        if lam.sum() > 1.0:
            lam = simplex_projection(lam, 1.0)
    elif p == 2:
        nrm = np.linalg.norm(lam)
        if nrm > 1.0:
            lam = lam / nrm
    elif p in (math.inf, "inf"):
        lam = np.clip(lam, None, 1.0)
    else:
        raise ValueError(f"projection supports p in {{1, 2, inf}}, got {p}")
    return lam


def project_psd_schatten_ball(S, p) -> np.ndarray:
    """Euclidean-nearest matrix in {G PSD, ||G||_p <= 1}.

    Both constraint sets are spectral, so clamping negative eigenvalues and
    then projecting the nonnegative eigenvalue vector onto the p-ball is the
    exact joint projection.  Idempotent.
    """
    ed = eigh(S)
    lam = _project_eigenvalues(ed.eigenvalues, p)
    Q = ed.eigenvectors
    out = (Q * lam[None, :]) @ Q.T
    return 0.5 * (out + out.T)


def sos_decompose(G: GramMatrix, psd_tol: float = 1e-9):
    """Forms s_i with sum_i s_i^2 = m^t G m, from the spectral square root.

    G must be PSD up to a small relative tolerance; slightly negative
    eigenvalues (Monte-Carlo noise) are clamped, significantly indefinite
    input is rejected.
    """
    ed = eigh(G.entries)
    lam, Q = ed.eigenvalues, ed.eigenvectors
    lmax = max(float(lam[0]), 0.0)
    if lam[-1] < -psd_tol * max(lmax, 1.0):
        raise ValueError(
            f"matrix is not positive semidefinite: min eigenvalue {lam[-1]:.3e}"
        )
    lam = np.clip(lam, 0.0, None)
    half_d = G.d // 2
    out = []
    for j in range(len(lam)):
        if lam[j] > 1e-14 * max(lmax, 1.0):
            out.append(Form(G.n, half_d, math.sqrt(lam[j]) * Q[:, j]))
    return out


def induced_representation(rho, n: int, half_d: int) -> np.ndarray:
    """Orthogonal N x N matrix R of the substitution action on the
    half-degree rescaled basis, satisfying

        form_from_gram(R^t G R) = apply_orthogonal(form_from_gram(G), rho).
    """
    rho = check_orthogonal(rho, tol=1e-10)
    half = multi_index_table(n, half_d)
    N = half.size
    C = np.empty((N, N))
    for j in range(N):
        e = np.zeros(N)
        e[j] = 1.0
        C[:, j] = apply_orthogonal(Form(n, half_d, e), rho).coeffs
    # columns of C are the composed basis forms; the Gram conjugation
    # convention above needs the transpose
    return C.T
