"""Kernel functions, Gram matrices and empirical centering.

The Gaussian kernel follows the convention

    k(x1, x2) = exp(-||x1 - x2||^2 / (2 * sigma^2)),

i.e. the factor 2*sigma^2 in the denominator.  Some libraries use sigma^2
or a gamma parameterization instead; all code in this package assumes the
2*sigma^2 form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

VALID_KINDS = ("gaussian", "linear", "polynomial")


@dataclass(frozen=True)
class KernelSpec:
    """Declarative kernel choice.

    kind "gaussian" uses `sigma`; "polynomial" uses `degree` and `offset`;
    "linear" has no parameters.
    """

    kind: str
    sigma: float = 1.0
    degree: int = 2
    offset: float = 1.0

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise InputError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "gaussian" and not self.sigma > 0:
            raise InputError(f"gaussian kernel requires sigma > 0, got {self.sigma}")
        if self.kind == "polynomial":
            if int(self.degree) != self.degree or self.degree < 1:
                raise InputError(f"polynomial degree must be an integer >= 1, got {self.degree}")
            if self.offset < 0:
                raise InputError(f"polynomial offset must be >= 0, got {self.offset}")

    def to_string(self):
        if self.kind == "gaussian":
            return f"gaussian:sigma={self.sigma!r}"
        if self.kind == "polynomial":
            return f"poly:degree={self.degree},offset={self.offset!r}"
        return "linear"


@dataclass(frozen=True)
class GramMatrix:
    """N x N kernel matrix together with the spec that produced it."""

    entries: np.ndarray
    source_spec: KernelSpec

    @property
    def n(self):
        return self.entries.shape[0]


def parse_kernel_spec(text):
    """Parse the CLI grammar: gaussian:sigma=<float> | linear | poly:degree=<int>,offset=<float>."""
    head, _, rest = text.partition(":")
    if head == "linear":
        if rest:
            raise InputError(f"linear kernel takes no parameters, got {rest!r}")
        return KernelSpec("linear")
    if head == "gaussian":
        params = _parse_params(rest, {"sigma": float})
        if "sigma" not in params:
            raise InputError("gaussian kernel requires sigma=<float>")
        return KernelSpec("gaussian", sigma=params["sigma"])
    if head == "poly":
        params = _parse_params(rest, {"degree": int, "offset": float})
        return KernelSpec(
            "polynomial",
            degree=params.get("degree", 2),
            offset=params.get("offset", 1.0),
        )
    raise InputError(f"unknown kernel kind {head!r}")


def _parse_params(rest, schema):
    params = {}
    if not rest:
        return params
    for token in rest.split(","):
        key, eq, value = token.partition("=")
        if not eq or key not in schema:
            raise InputError(f"bad kernel parameter token {token!r}")
        try:
            params[key] = schema[key](value)
        except ValueError:
            raise InputError(f"bad kernel parameter token {token!r}") from None
    return params


def kernel_eval(spec, x1, x2):
    """Evaluate k(x1, x2) for a single pair of vectors."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != x2.shape:
        raise InputError(f"dimension mismatch: {x1.shape} vs {x2.shape}")
    if spec.kind == "gaussian":
        d = x1 - x2
        # same reduction as gram_matrix/cross_kernel so the entrywise
        # recomputation agrees to the last bit
        return float(np.exp(-np.sum(d * d) / (2.0 * spec.sigma**2)))
    if spec.kind == "linear":
        return float(np.dot(x1, x2))
    return float((np.dot(x1, x2) + spec.offset) ** spec.degree)


def cross_kernel(spec, A, B):
    """Kernel matrix between two sample sets: entry (i, j) = k(A_i, B_j)."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise InputError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    if spec.kind == "gaussian":
        K = np.empty((A.shape[0], B.shape[0]))
        for i in range(A.shape[0]):
            d = B - A[i]
            K[i] = np.exp(-np.sum(d * d, axis=1) / (2.0 * spec.sigma**2))
        return K
    P = A @ B.T
    if spec.kind == "linear":
        return P
    return (P + spec.offset) ** spec.degree


def gram_matrix(spec, X):
    """Build the N x N Gram matrix for the rows of X.

    Symmetry is structural: entries are computed for i <= j and mirrored,
    so K == K.T holds to machine equality.  Gaussian kernels compute
    pairwise row differences directly (never an expanded x^2 - 2xy + y^2
    form), so the result depends only on differences between rows.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    if n < 1:
        raise InputError("gram_matrix requires at least one sample")
    K = np.empty((n, n))
    if spec.kind == "gaussian":
        denom = 2.0 * spec.sigma**2
        for i in range(n):
            d = X[i:] - X[i]
            K[i, i:] = np.exp(-np.sum(d * d, axis=1) / denom)
            K[i:, i] = K[i, i:]
    else:
        for i in range(n):
            row = X[i:] @ X[i]
            if spec.kind == "polynomial":
                row = (row + spec.offset) ** spec.degree
            K[i, i:] = row
            K[i:, i] = row
    return GramMatrix(entries=K, source_spec=spec)


def centering_matrix(n):
    """Explicit J = I - (1/n) 11^T.  Kept for oracle tests; hot paths use center_columns."""
    if n < 1:
        raise InputError("centering_matrix requires n >= 1")
    return np.eye(n) - np.full((n, n), 1.0 / n)


def center_columns(K):
    """Subtract column means, i.e. J @ K, without materializing J."""
    K = np.asarray(K, dtype=float)
    return K - K.mean(axis=0, keepdims=True)
