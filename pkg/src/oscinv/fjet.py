"""FJet feature regression of small phase-space updates.

For a step eps the updates are modeled as

    du = h1(u, v; eps),   dv = h2(u, v; eps)

with h1, h2 linear combinations of a feature dictionary evaluated on
(u, v). Fitting several eps and extrapolating c(eps)/eps to eps -> 0
recovers the equation of motion.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .errors import RankDeficientError
from .trajectory import DeltaDataset

TARGETS = ("h1", "h2")


@dataclass(frozen=True)
class FeatureSet:
    names: tuple[str, ...]
    funcs: tuple[Callable, ...] = field(repr=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate feature names in {self.names}")
        if len(self.names) != len(self.funcs):
            raise ValueError("one function per feature name required")

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def evaluate(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return np.stack([np.broadcast_to(f(u, v), u.shape) for f in self.funcs], axis=-1)

    @classmethod
    def from_mapping(cls, mapping) -> "FeatureSet":
        return cls(tuple(mapping), tuple(mapping.values()))

    @classmethod
    def default(cls) -> "FeatureSet":
        """{u, v, u^2, uv, v^2}; the quadratic terms must vanish for linear dynamics."""
        return cls.from_mapping({
            "u": lambda u, v: u,
            "v": lambda u, v: v,
            "u^2": lambda u, v: u * u,
            "uv": lambda u, v: u * v,
            "v^2": lambda u, v: v * v,
        })

    @classmethod
    def linear(cls) -> "FeatureSet":
        return cls.from_mapping({"u": lambda u, v: u, "v": lambda u, v: v})


@dataclass(frozen=True)
class FJetModel:
    """Regression coefficients for one eps.

    ``coeffs`` and ``stderr`` have shape (dim, 2, n_features) indexed by
    axis, target (h1, h2) and feature; ``residual_rms`` has shape (dim, 2).
    """

    eps: float
    features: FeatureSet
    coeffs: np.ndarray
    stderr: np.ndarray
    residual_rms: np.ndarray
    condition: np.ndarray
    n_rows: int

    @property
    def coeffs_h1(self) -> np.ndarray:
        return self.coeffs[:, 0, :]

    @property
    def coeffs_h2(self) -> np.ndarray:
        return self.coeffs[:, 1, :]

    def coeff(self, target: str, feature: str, axis: int = 0) -> float:
        return float(self.coeffs[axis, TARGETS.index(target), self.features.index(feature)])

    def predict(self, u, v, axis: int = 0):
        """(h1, h2) at the given states."""
        x = self.features.evaluate(u, v)
        return x @ self.coeffs[axis, 0], x @ self.coeffs[axis, 1]


def _lstsq_pivoted(x: np.ndarray, y: np.ndarray, names: Sequence[str]):
    n, p = x.shape
    q, r, piv = scipy.linalg.qr(x, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = max(n, p) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    rank = int(np.sum(diag > tol)) if diag.size and diag[0] > 0 else 0
    if rank < p:
        dropped = [names[i] for i in piv[rank:]]
        raise RankDeficientError(
            f"design matrix has rank {rank} < {p}; collinear features: {', '.join(dropped)}")
    rinv = scipy.linalg.solve_triangular(r, np.eye(p))
    beta_piv = rinv @ (q.T @ y)
    beta = np.empty_like(beta_piv)
    beta[piv] = beta_piv
    resid = y - x @ beta
    dof = n - p
    sigma2 = np.sum(resid ** 2, axis=0) / dof if dof > 0 else np.full(y.shape[1], np.nan)
    var_piv = np.sum(rinv ** 2, axis=1)
    var = np.empty_like(var_piv)
    var[piv] = var_piv
    stderr = np.sqrt(np.outer(sigma2, var))
    rms = np.sqrt(np.mean(resid ** 2, axis=0))
    sv = np.linalg.svd(r, compute_uv=False)
    return beta.T, stderr, rms, float(sv[0] / sv[-1])


def fit_feature_regression(ds: DeltaDataset, fs: FeatureSet | None = None) -> FJetModel:
    """Least-squares fit of (du, dv) against features of (u, v), per axis."""
    fs = FeatureSet.default() if fs is None else fs
    n, dim = ds.u.shape
    if n < len(fs):
        raise ValueError(f"{n} rows cannot determine {len(fs)} features")
    coeffs = np.empty((dim, 2, len(fs)))
    stderr = np.empty_like(coeffs)
    rms = np.empty((dim, 2))
    cond = np.empty(dim)
    for k in range(dim):
        x = fs.evaluate(ds.u[:, k], ds.v[:, k])
        y = np.column_stack([ds.du[:, k], ds.dv[:, k]])
        coeffs[k], stderr[k], rms[k], cond[k] = _lstsq_pivoted(x, y, fs.names)
    return FJetModel(ds.eps, fs, coeffs, stderr, rms, cond, n)


@dataclass(frozen=True)
class DEEstimate:
    """eps -> 0 intercepts of c(eps)/eps and the recovered parameters.

    ``intercepts``/``intercept_stderr`` have shape (dim, 2, n_features).
    """

    features: FeatureSet
    eps: np.ndarray
    intercepts: np.ndarray
    intercept_stderr: np.ndarray
    omega0_sq_hat: np.ndarray
    two_gamma_hat: np.ndarray
    h1_v_hat: np.ndarray
    flags: tuple[str, ...] = ()

    def rhs(self, u, v, axis: int = 0):
        """Limits of (h1/eps, h2/eps) at the given states."""
        x = self.features.evaluate(u, v)
        return x @ self.intercepts[axis, 0], x @ self.intercepts[axis, 1]

    @property
    def ok(self) -> bool:
        return not self.flags


def extrapolate_to_zero(models: Sequence[FJetModel], degree: int = 2) -> DEEstimate:
    """Fit c(eps)/eps = c0 + c1 eps + c2 eps^2 per coefficient and keep c0."""
    if not models:
        raise ValueError("no models to extrapolate")
    eps = np.array([m.eps for m in models])
    if np.unique(eps).size < degree + 1:
        raise ValueError(f"need at least {degree + 1} distinct eps values, got {np.unique(eps).size}")
    fs = models[0].features
    if any(m.features.names != fs.names for m in models):
        raise ValueError("all models must share one feature set")
    for name in ("u", "v"):
        if name not in fs.names:
            raise ValueError(f"feature set must contain {name!r}")
    ratios = np.stack([m.coeffs / m.eps for m in models])  # (n_eps, dim, 2, F)
    design = np.vander(eps, degree + 1, increasing=True)
    flat = ratios.reshape(eps.size, -1)
    sol, *_ = np.linalg.lstsq(design, flat, rcond=None)
    c0 = sol[0].reshape(ratios.shape[1:])
    dof = eps.size - (degree + 1)
    if dof > 0:
        resid = flat - design @ sol
        sigma2 = np.sum(resid ** 2, axis=0) / dof
        cov00 = np.linalg.inv(design.T @ design)[0, 0]
        se = np.sqrt(sigma2 * cov00).reshape(c0.shape)
    else:
        se = np.full(c0.shape, np.nan)
    iu, iv = fs.index("u"), fs.index("v")
    w0sq = -c0[:, 1, iu]
    two_g = -c0[:, 1, iv]
    h1v = c0[:, 0, iv]
    flags = []
    for k in range(c0.shape[0]):
        if w0sq[k] <= 0:
            flags.append(f"axis {k}: non-positive recovered omega0^2 = {w0sq[k]:.6g}")
        if abs(h1v[k] - 1.0) > 1e-3:
            flags.append(f"axis {k}: h1 coefficient of v extrapolates to {h1v[k]:.6g}, not 1")
    return DEEstimate(fs, eps, c0, se, w0sq, two_g, h1v, tuple(flags))


def fit_report(models: Sequence[FJetModel], est: DEEstimate) -> dict:
    """JSON-ready summary of every fit and the extrapolation."""
    names = list(est.features.names)

    def by_feature(arr):
        return [{t: dict(zip(names, map(float, arr[k, i]))) for i, t in enumerate(TARGETS)}
                for k in range(arr.shape[0])]

    return {
        "features": names,
        "fits": [{
            "eps": m.eps,
            "n_rows": m.n_rows,
            "coefficients": by_feature(m.coeffs),
            "stderr": by_feature(m.stderr),
            "residual_rms": [dict(zip(TARGETS, map(float, r))) for r in m.residual_rms],
            "condition_number": [float(c) for c in m.condition],
        } for m in models],
        "intercepts": by_feature(est.intercepts),
        "intercept_stderr": by_feature(est.intercept_stderr),
        "omega0_sq_hat": [float(x) for x in est.omega0_sq_hat],
        "two_gamma_hat": [float(x) for x in est.two_gamma_hat],
        "h1_v_hat": [float(x) for x in est.h1_v_hat],
        "flags": list(est.flags),
    }


def dumps_report(report: dict) -> str:
    # NaN stderr values (too few eps for a dof) become null
    def clean(x):
        if isinstance(x, float) and not np.isfinite(x):
            return None
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, list):
            return [clean(v) for v in x]
        return x
    return json.dumps(clean(report), indent=2)
