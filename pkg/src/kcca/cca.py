"""Model fitting, projection and correlation-table evaluation.

Two fitters live here.  `fit_linear_cca` is the classical primal method:
whiten the (ridged) covariance blocks with Cholesky factors and take the
SVD of the whitened cross-covariance.  `fit_kcca` is the kernelized dual
method: with Gram matrices Kx, Ky and the centering operator J it builds

    M = (1/N) Kx^T J Ky
    L = (1/N) Kx^T J Kx + eta1 * Rx
    N = (1/N) Ky^T J Ky + eta2 * Ry

where the regularizer R is the Gram matrix itself ("rkhs" mode, penalizing
the feature-space norms ||a||^2, ||b||^2) or the identity ("dual_l2" mode,
penalizing the dual coefficient norms), and solves the coupled eigenproblem
M beta = lambda L alpha, M^T alpha = lambda N beta.

Projection of new points is the raw representer sum u(x*) = sum_i
alpha_ik k(x_i, x*), uncentered; correlation tables are Pearson
correlations centered by the means of whichever split is being evaluated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .datagen import PairedDataset
from .errors import (
    DegenerateFeatureError,
    InputError,
    NotPositiveDefiniteError,
    NumericalError,
)
from .kernels import (
    KernelSpec,
    cross_kernel,
    center_columns,
    gram_matrix,
    parse_kernel_spec,
)

MODEL_SCHEMA = "kcca-model/1"

REGULARIZERS = ("rkhs", "dual_l2")


@dataclass(frozen=True)
class KccaConfig:
    kernel_x: KernelSpec
    kernel_y: KernelSpec
    eta1: float = 1.0
    eta2: float = 1.0
    regularizer: str = "rkhs"
    d: int = 2
    jitter: float = 0.0

    def __post_init__(self):
        if self.regularizer not in REGULARIZERS:
            raise InputError(f"unknown regularizer {self.regularizer!r}")
        if self.eta1 < 0 or self.eta2 < 0:
            raise InputError("eta1 and eta2 must be >= 0")
        if self.regularizer == "rkhs" and (self.eta1 == 0 or self.eta2 == 0):
            raise InputError("rkhs regularizer requires eta1 > 0 and eta2 > 0")
        if self.d < 1:
            raise InputError("component count must be >= 1")
        if self.jitter < 0:
            raise InputError("jitter must be >= 0")


@dataclass(frozen=True)
class KccaModel:
    train_x: np.ndarray
    train_y: np.ndarray
    config: KccaConfig
    alphas: np.ndarray
    betas: np.ndarray
    lambdas: np.ndarray


@dataclass(frozen=True)
class LinearCcaModel:
    mean_x: np.ndarray
    mean_y: np.ndarray
    A: np.ndarray
    B: np.ndarray
    rhos: np.ndarray
    ridge: float = 0.0


@dataclass(frozen=True)
class CorrelationTable:
    values: np.ndarray
    split: str


def _mirror_upper(S):
    # structural symmetrization: keep i <= j, mirror below
    U = np.triu(S)
    return U + np.triu(S, 1).T


def build_mln(Kx, Ky, config):
    """Assemble the coupled-problem matrices (M, L, N) from two Grams."""
    kx = Kx.entries
    ky = Ky.entries
    n = kx.shape[0]
    if ky.shape[0] != n:
        raise InputError(f"Gram sizes differ: {n} vs {ky.shape[0]}")
    jkx = center_columns(kx)
    jky = center_columns(ky)
    M = kx.T @ jky / n
    L = _mirror_upper(kx.T @ jkx / n)
    Nmat = _mirror_upper(ky.T @ jky / n)
    if config.regularizer == "rkhs":
        L = L + config.eta1 * kx
        Nmat = Nmat + config.eta2 * ky
    else:
        L[np.diag_indices(n)] += config.eta1
        Nmat[np.diag_indices(n)] += config.eta2
    return M, L, Nmat


def fit_kcca(data, config):
    """Fit the dual model on a paired dataset.  Deterministic given inputs."""
    if data.n < 2:
        raise InputError("kernel CCA needs at least 2 samples (centering is degenerate)")
    if config.d > data.n:
        raise InputError(f"cannot extract {config.d} components from {data.n} samples")
    Kx = gram_matrix(config.kernel_x, data.x)
    Ky = gram_matrix(config.kernel_y, data.y)
    M, L, Nmat = build_mln(Kx, Ky, config)
    sol = linalg.solve_paired_eig(M, L, Nmat, config.d, config.jitter)
    return KccaModel(
        train_x=np.array(data.x, dtype=float),
        train_y=np.array(data.y, dtype=float),
        config=config,
        alphas=sol.alphas,
        betas=sol.betas,
        lambdas=sol.lambdas,
    )


def project(model, side, points):
    """Canonical features of new points on one side, via kernel sums."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if side == "x":
        train, spec, coef = model.train_x, model.config.kernel_x, model.alphas
    elif side == "y":
        train, spec, coef = model.train_y, model.config.kernel_y, model.betas
    else:
        raise InputError(f"side must be 'x' or 'y', got {side!r}")
    if points.shape[1] != train.shape[1]:
        raise InputError(
            f"point dimension {points.shape[1]} does not match training side {train.shape[1]}"
        )
    return cross_kernel(spec, points, train) @ coef


def correlation_table(u_feats, v_feats, split="train"):
    """d x d Pearson correlations between u and v columns of one split."""
    U = np.atleast_2d(np.asarray(u_feats, dtype=float))
    V = np.atleast_2d(np.asarray(v_feats, dtype=float))
    if U.shape[0] != V.shape[0]:
        raise InputError("u and v feature row counts differ")
    if U.shape[0] < 2:
        raise InputError("correlation needs at least 2 rows")
    Uc = U - U.mean(axis=0)
    Vc = V - V.mean(axis=0)
    su = np.sqrt(np.sum(Uc * Uc, axis=0))
    sv = np.sqrt(np.sum(Vc * Vc, axis=0))
    for name, feats, sd in (("u", U, su), ("v", V, sv)):
        scale = np.maximum(1.0, np.max(np.abs(feats), axis=0))
        bad = np.nonzero(sd <= 1e-12 * scale)[0]
        if bad.size:
            raise DegenerateFeatureError(
                column=int(bad[0]),
                message=f"{name} feature column {int(bad[0])} has zero variance",
            )
    T = (Uc.T @ Vc) / np.outer(su, sv)
    over = np.abs(T) - 1.0
    if np.any(over > 1e-12):
        j, k = np.unravel_index(int(np.argmax(over)), T.shape)
        raise NumericalError(f"correlation entry ({j},{k}) = {T[j, k]!r} is outside [-1, 1]")
    np.clip(T, -1.0, 1.0, out=T)
    return CorrelationTable(values=T, split=split)


def fit_linear_cca(data, d, ridge=0.0):
    """Classical CCA via Cholesky whitening of the covariance blocks."""
    if data.n < 2:
        raise InputError("linear CCA needs at least 2 samples")
    n_x, n_y = data.x.shape[1], data.y.shape[1]
    if d > min(n_x, n_y):
        raise InputError(f"cannot extract {d} components from dimensions ({n_x}, {n_y})")
    mean_x = data.x.mean(axis=0)
    mean_y = data.y.mean(axis=0)
    Xc = data.x - mean_x
    Yc = data.y - mean_y
    n = data.n
    Cxx = _mirror_upper(Xc.T @ Xc / n)
    Cyy = _mirror_upper(Yc.T @ Yc / n)
    Cxy = Xc.T @ Yc / n
    try:
        fx = linalg.cholesky(Cxx, ridge)
        fy = linalg.cholesky(Cyy, ridge)
    except NotPositiveDefiniteError as exc:
        raise NotPositiveDefiniteError(
            pivot=exc.pivot,
            message=f"covariance block is rank deficient (pivot {exc.pivot}); "
            "pass a positive ridge",
        ) from exc
    G = linalg.solve_lower_triangular(fy, linalg.solve_lower_triangular(fx, Cxy).T).T
    res = linalg.svd(G)
    A = linalg.solve_lower_transposed(fx, res.U[:, :d])
    B = linalg.solve_lower_transposed(fy, res.V[:, :d])
    rhos = np.clip(res.s[:d], 0.0, 1.0)
    return LinearCcaModel(mean_x=mean_x, mean_y=mean_y, A=A, B=B, rhos=rhos, ridge=ridge)


def project_linear(model, side, points):
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if side == "x":
        mean, W = model.mean_x, model.A
    elif side == "y":
        mean, W = model.mean_y, model.B
    else:
        raise InputError(f"side must be 'x' or 'y', got {side!r}")
    if points.shape[1] != mean.shape[0]:
        raise InputError(
            f"point dimension {points.shape[1]} does not match training side {mean.shape[0]}"
        )
    return (points - mean) @ W


# --- model serialization -------------------------------------------------
#
# Single JSON document.  Arrays are nested lists of decimal floats emitted
# by json (shortest round-trip repr), so deserialize -> project reproduces
# the original results exactly.


def _config_to_dict(config):
    return {
        "kernel_x": config.kernel_x.to_string(),
        "kernel_y": config.kernel_y.to_string(),
        "eta1": config.eta1,
        "eta2": config.eta2,
        "regularizer": config.regularizer,
        "components": config.d,
        "jitter": config.jitter,
    }


def config_from_dict(doc):
    return KccaConfig(
        kernel_x=parse_kernel_spec(doc["kernel_x"]),
        kernel_y=parse_kernel_spec(doc["kernel_y"]),
        eta1=doc["eta1"],
        eta2=doc["eta2"],
        regularizer=doc["regularizer"],
        d=doc["components"],
        jitter=doc["jitter"],
    )


def model_to_dict(model):
    if isinstance(model, KccaModel):
        return {
            "schema": MODEL_SCHEMA,
            "method": "kcca",
            "config": _config_to_dict(model.config),
            "train_x": model.train_x.tolist(),
            "train_y": model.train_y.tolist(),
            "alphas": model.alphas.tolist(),
            "betas": model.betas.tolist(),
            "lambdas": model.lambdas.tolist(),
        }
    if isinstance(model, LinearCcaModel):
        return {
            "schema": MODEL_SCHEMA,
            "method": "linear",
            "ridge": model.ridge,
            "mean_x": model.mean_x.tolist(),
            "mean_y": model.mean_y.tolist(),
            "A": model.A.tolist(),
            "B": model.B.tolist(),
            "rhos": model.rhos.tolist(),
        }
    raise InputError(f"cannot serialize {type(model).__name__}")


def model_from_dict(doc):
    schema = doc.get("schema")
    if schema != MODEL_SCHEMA:
        raise InputError(f"unsupported model schema {schema!r}")
    method = doc.get("method")
    if method == "kcca":
        return KccaModel(
            train_x=np.asarray(doc["train_x"], dtype=float),
            train_y=np.asarray(doc["train_y"], dtype=float),
            config=config_from_dict(doc["config"]),
            alphas=np.asarray(doc["alphas"], dtype=float),
            betas=np.asarray(doc["betas"], dtype=float),
            lambdas=np.asarray(doc["lambdas"], dtype=float),
        )
    if method == "linear":
        return LinearCcaModel(
            mean_x=np.asarray(doc["mean_x"], dtype=float),
            mean_y=np.asarray(doc["mean_y"], dtype=float),
            A=np.asarray(doc["A"], dtype=float),
            B=np.asarray(doc["B"], dtype=float),
            rhos=np.asarray(doc["rhos"], dtype=float),
            ridge=doc.get("ridge", 0.0),
        )
    raise InputError(f"unknown model method {method!r}")


def save_model(model, path):
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_model(path):
    with open(path) as fh:
        return model_from_dict(json.load(fh))
