"""Dense linear algebra used by the fitters.

Cholesky, triangular solves and SVD are thin wrappers over LAPACK (via
numpy/scipy) with the error reporting and the deterministic sign
convention the rest of the package relies on.  The coupled eigenproblem

    M beta = lambda L alpha,    M^T alpha = lambda N beta

with L, N symmetric positive definite is reduced by whitening: factor
L = R_L^T R_L and N = R_N^T R_N, form G = R_L^{-T} M R_N^{-1}, and read
the solution off the SVD of G.  This keeps every lambda real and >= 0 and
gives components orthonormal in the L- and N-metrics by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import get_lapack_funcs, solve_triangular

from .errors import InputError, NotPositiveDefiniteError, SingularRegularizationError


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower-triangular factor C with C @ C.T equal to the (jittered) input."""

    lower: np.ndarray

    @property
    def source_dim(self):
        return self.lower.shape[0]


@dataclass(frozen=True)
class SvdResult:
    U: np.ndarray
    s: np.ndarray
    V: np.ndarray


@dataclass(frozen=True)
class PairedEigSolution:
    alphas: np.ndarray
    betas: np.ndarray
    lambdas: np.ndarray


def cholesky(A, jitter=0.0):
    """Lower Cholesky factor of A + jitter*I.

    Raises NotPositiveDefiniteError with the failing pivot index when the
    input (after jitter) is not positive definite.
    """
    A = np.asarray(A, dtype=float)
    if jitter < 0:
        raise InputError("jitter must be >= 0")
    work = A.copy()
    if jitter:
        work[np.diag_indices_from(work)] += jitter
    (potrf,) = get_lapack_funcs(("potrf",), (work,))
    c, info = potrf(work, lower=1, clean=1, overwrite_a=1)
    if info > 0:
        raise NotPositiveDefiniteError(pivot=info - 1)
    if info < 0:
        raise InputError(f"illegal value in argument {-info} of potrf")
    return CholeskyFactor(lower=c)


def solve_lower_triangular(factor, B):
    """Solve lower @ X = B by forward substitution."""
    if np.any(np.diag(factor.lower) == 0.0):
        raise AssertionError("Cholesky factor has a zero diagonal entry")
    return solve_triangular(factor.lower, np.asarray(B, dtype=float), lower=True)


def solve_lower_transposed(factor, B):
    """Solve lower.T @ X = B by back substitution."""
    if np.any(np.diag(factor.lower) == 0.0):
        raise AssertionError("Cholesky factor has a zero diagonal entry")
    return solve_triangular(factor.lower, np.asarray(B, dtype=float), lower=True, trans="T")


def svd(A):
    """Thin SVD with a deterministic sign convention.

    In every left singular vector the entry of largest absolute value is
    made positive (ties broken by lowest index); the matching right vector
    is flipped along with it.  Two calls on the same input are therefore
    bit-identical.
    """
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise InputError("svd input contains non-finite entries")
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    V = Vt.T
    for k in range(U.shape[1]):
        i = int(np.argmax(np.abs(U[:, k])))
        if U[i, k] < 0:
            U[:, k] = -U[:, k]
            V[:, k] = -V[:, k]
    return SvdResult(U=U, s=s, V=V)


def _factor_with_retry(A, jitter, what):
    try:
        return cholesky(A, jitter)
    except NotPositiveDefiniteError:
        pass
    fallback = jitter + 1e-9 * max(float(np.mean(np.diag(A))), 0.0)
    try:
        return cholesky(A, fallback)
    except NotPositiveDefiniteError as exc:
        raise SingularRegularizationError(
            f"{what} is not positive definite even with jitter {fallback:g}; "
            "increase the regularization constant eta or the jitter"
        ) from exc


def solve_paired_eig(M, L, Nmat, d, jitter=0.0):
    """Top-d solution of M beta = lambda L alpha, M^T alpha = lambda N beta.

    Components are normalized alpha_k^T L alpha_k = beta_k^T N beta_k = 1
    and returned with lambdas descending.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if d > n:
        raise InputError(f"requested {d} components from an order-{n} problem")
    CL = _factor_with_retry(np.asarray(L, dtype=float), jitter, "left metric L")
    CN = _factor_with_retry(np.asarray(Nmat, dtype=float), jitter, "right metric N")
    # G = C_L^{-1} M C_N^{-T}
    Y = solve_lower_triangular(CL, M)
    G = solve_lower_triangular(CN, Y.T).T
    res = svd(G)
    alphas = solve_lower_transposed(CL, res.U[:, :d])
    betas = solve_lower_transposed(CN, res.V[:, :d])
    return PairedEigSolution(alphas=alphas, betas=betas, lambdas=res.s[:d].copy())
