"""Evaluation of 1D invariants on (u, v) grids for contour/heatmap plots."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OscParams, Regime, derived_frequency
from .errors import RegimeError
from .invariants1d import principal, TWO_PI

GRID_KINDS = ("under1d", "over1d", "crit1d")
DEFAULT_CLAMP = {"over1d": 1e-3, "crit1d": 1e-2}
KIND_REGIME = {"under1d": Regime.UNDERDAMPED, "over1d": Regime.OVERDAMPED,
               "crit1d": Regime.CRITICAL}


@dataclass(frozen=True)
class GridSpec:
    u_min: float = -5.0
    u_max: float = 5.0
    v_min: float = -5.0
    v_max: float = 5.0
    nu: int = 500
    nv: int = 500
    clamp_threshold: float | None = None
    sheet: int | None = None
    transform: str = "identity"

    def __post_init__(self):
        if self.nu < 2 or self.nv < 2:
            raise ValueError(f"grid resolution must be >= 2 per axis, got {self.nu}x{self.nv}")
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ValueError("grid window needs min < max on both axes")
        if self.transform not in ("identity", "exp"):
            raise ValueError(f"unknown transform {self.transform!r}")
        if self.clamp_threshold is not None and self.clamp_threshold <= 0:
            raise ValueError("clamp threshold must be > 0")

    def axes(self):
        return (np.linspace(self.u_min, self.u_max, self.nu),
                np.linspace(self.v_min, self.v_max, self.nv))


def _clamp(x, thr):
    # keep the sign, raise the magnitude to at least thr
    return np.where(x < 0, -1.0, 1.0) * np.maximum(np.abs(x), thr)


def evaluate_grid(kind: str, params: OscParams, spec: GridSpec, axis: int = 0):
    """Values of the invariant on the grid, shape (nv, nu), rows indexed by v.

    Singular lines are handled by clamping |zeta u +- w| (overdamped) or
    |w| (critical) to the threshold, defaulting to 1e-3 and 1e-2. The
    underdamped grid uses the sheet from ``spec.sheet`` (default 0); the
    origin is clamped to the smallest nonzero radius of the grid.
    """
    if kind not in GRID_KINDS:
        raise ValueError(f"unknown grid kind {kind!r}; expected one of {GRID_KINDS}")
    reg, f = derived_frequency(params, axis)
    if reg is not KIND_REGIME[kind]:
        raise RegimeError(f"grid kind {kind} needs a {KIND_REGIME[kind].value} axis, "
                          f"parameters are {reg.value}")
    if spec.sheet is not None and kind != "under1d":
        raise ValueError("sheet selection applies only to under1d grids")
    uu, vv = np.meshgrid(*spec.axes())
    g = params.gamma
    w = g * uu + vv
    thr = spec.clamp_threshold if spec.clamp_threshold is not None else DEFAULT_CLAMP.get(kind)
    with np.errstate(divide="ignore"):
        if kind == "under1d":
            den = (f * uu) ** 2 + w * w
            if thr is not None:
                den = np.maximum(den, thr * thr)
            else:
                den = np.where(den == 0, np.min(den[den > 0]), den)
            phi = principal(np.arctan2(w, f * uu)) - TWO_PI * (spec.sheet or 0)
            values = np.log(den) - 2 * g / f * phi
        elif kind == "over1d":
            plus = _clamp(f * uu + w, thr)
            minus = _clamp(f * uu - w, thr)
            values = -(f + g) * np.log(np.abs(plus)) - (f - g) * np.log(np.abs(minus))
        else:
            wc = _clamp(w, thr)
            values = np.log(np.abs(wc)) + g * uu / wc
    if spec.transform == "exp":
        values = np.exp(values)
    return values


def write_grid_csv(path, spec: GridSpec, values) -> None:
    """Long-format ``u,v,value``; v is the outer loop, u the inner."""
    u, v = spec.axes()
    lines = ["u,v,value"]
    for j in range(spec.nv):
        vj = repr(float(v[j]))
        lines.extend(f"{float(u[i])!r},{vj},{float(values[j, i])!r}" for i in range(spec.nu))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_grid_csv(path):
    """Inverse of :func:`write_grid_csv`: returns (u_axis, v_axis, values[nv, nu])."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    u = np.unique(data[:, 0])
    v = np.unique(data[:, 1])
    return u, v, data[:, 2].reshape(v.size, u.size)
