"""Time series generation, FJet difference datasets and trajectory CSV I/O."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import (OscParams, equation_of_motion, evaluate_exact,
                   exact_solution_from_initial)
from .errors import TrajectoryFormatError

SPACING_RTOL = 1e-12


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled phase-space trajectory.

    ``u`` and ``v`` have shape (n_samples, dim). ``params`` may be None for
    trajectories read from disk without a configuration.
    """

    params: OscParams | None
    dt: float
    t: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if u.ndim == 1:
            u = u[:, None]
        if v.ndim == 1:
            v = v[:, None]
        if t.ndim != 1 or u.shape != v.shape or u.shape[0] != t.size:
            raise ValueError("t, u, v have inconsistent shapes")
        if self.params is not None and u.shape[1] != self.params.dim:
            raise ValueError(f"state dimension {u.shape[1]} != params.dim {self.params.dim}")
        _check_uniform(t, self.dt)
        for name, arr in (("t", t), ("u", u), ("v", v)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return self.t.size

    @property
    def dim(self) -> int:
        return self.u.shape[1]


def _check_uniform(t: np.ndarray, dt: float):
    if t.size == 0:
        raise ValueError("trajectory has no samples")
    if t.size == 1:
        return
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if np.any(np.diff(t) <= 0):
        raise ValueError("timestamps are not strictly increasing")
    ideal = t[0] + dt * np.arange(t.size)
    scale = np.maximum(np.abs(t), dt)
    if np.any(np.abs(t - ideal) > SPACING_RTOL * scale):
        raise ValueError("timestamps are not uniformly spaced")


def sample_exact(params: OscParams, u0, v0, dt: float, n_steps: int,
                 noise_sigma: float = 0.0, seed=None) -> Trajectory:
    """Sample the closed-form solution at t = 0, dt, ..., n_steps*dt.

    With ``noise_sigma > 0`` independent Gaussian noise is added to every
    u and v entry (seeded by ``seed``).
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    sol = exact_solution_from_initial(params, u0, v0)
    t = dt * np.arange(n_steps + 1)
    u, v = evaluate_exact(sol, t)
    if noise_sigma:
        rng = np.random.default_rng(seed)
        u = u + rng.normal(0.0, noise_sigma, u.shape)
        v = v + rng.normal(0.0, noise_sigma, v.shape)
    return Trajectory(params, dt, t, u, v)


def integrate_rk4(params: OscParams, u0, v0, dt: float, n_steps: int) -> Trajectory:
    """Classical fixed-step RK4 on u' = v, v' = -omega0**2 u - 2 gamma v."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    u = np.empty((n_steps + 1, params.dim))
    v = np.empty_like(u)
    u[0] = np.atleast_1d(np.asarray(u0, dtype=float))
    v[0] = np.atleast_1d(np.asarray(v0, dtype=float))

    def f(x, y):
        return y, equation_of_motion(params, x, y)

    for i in range(n_steps):
        x, y = u[i], v[i]
        k1x, k1y = f(x, y)
        k2x, k2y = f(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y)
        k3x, k3y = f(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y)
        k4x, k4y = f(x + dt * k3x, y + dt * k3y)
        u[i + 1] = x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v[i + 1] = y + dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
    return Trajectory(params, dt, dt * np.arange(n_steps + 1), u, v)


@dataclass(frozen=True)
class DeltaDataset:
    """Rows (u, v, du, dv) over step eps; arrays have shape (rows, dim)."""

    eps: float
    u: np.ndarray
    v: np.ndarray
    du: np.ndarray
    dv: np.ndarray

    def __len__(self):
        return self.u.shape[0]


def build_delta_dataset(traj: Trajectory, stride: int) -> DeltaDataset:
    """Pair every sample with the one ``stride`` steps ahead.

    Time is dropped from the rows (autonomous dynamics).
    """
    n = len(traj)
    if int(stride) != stride or stride < 1 or stride >= n:
        raise ValueError(f"invalid window: stride {stride} with {n} samples")
    s = int(stride)
    return DeltaDataset(
        eps=s * traj.dt,
        u=traj.u[:-s].copy(),
        v=traj.v[:-s].copy(),
        du=traj.u[s:] - traj.u[:-s],
        dv=traj.v[s:] - traj.v[:-s],
    )


def _header(dim: int) -> str:
    cols = ["t"]
    for k in range(1, dim + 1):
        cols += [f"u{k}", f"v{k}"]
    return ",".join(cols)


def write_csv(traj: Trajectory, path) -> None:
    """Write ``t,u1,v1[,u2,v2,...]`` rows using shortest round-trip floats."""
    lines = [_header(traj.dim)]
    for i in range(len(traj)):
        row = [traj.t[i]]
        for k in range(traj.dim):
            row += [traj.u[i, k], traj.v[i, k]]
        lines.append(",".join(repr(float(x)) for x in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path, params: OscParams | None = None) -> Trajectory:
    text = Path(path).read_text()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].strip():
        raise TrajectoryFormatError("empty file", line=1)
    cols = lines[0].strip().split(",")
    if len(cols) < 3 or len(cols) % 2 == 0 or cols != _header((len(cols) - 1) // 2).split(","):
        raise TrajectoryFormatError(f"malformed header {lines[0]!r}", line=1)
    dim = (len(cols) - 1) // 2
    if params is not None and params.dim != dim:
        raise TrajectoryFormatError(
            f"header has {dim} axes but parameters describe {params.dim}", line=1)
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(cols):
            raise TrajectoryFormatError(
                f"expected {len(cols)} fields, got {len(fields)}", line=lineno)
        try:
            vals = [float(x) for x in fields]
        except ValueError as exc:
            raise TrajectoryFormatError(str(exc), line=lineno) from None
        if rows and vals[0] <= rows[-1][0]:
            raise TrajectoryFormatError("non-monotone t", line=lineno)
        rows.append(vals)
    if not rows:
        raise TrajectoryFormatError("no data rows", line=2)
    data = np.array(rows)
    t = data[:, 0]
    dt = (t[-1] - t[0]) / (t.size - 1) if t.size > 1 else 1.0
    try:
        return Trajectory(params, dt, t, data[:, 1::2], data[:, 2::2])
    except ValueError as exc:
        raise TrajectoryFormatError(str(exc)) from None


@dataclass(frozen=True)
class SimConfig:
    params: OscParams
    u0: np.ndarray
    v0: np.ndarray
    dt: float
    n_steps: int
    noise_sigma: float = 0.0
    seed: int | None = None


def load_config(path) -> SimConfig:
    """Read a simulation config JSON (omega0, gamma, u0, v0, dt, n_steps, ...)."""
    with open(path) as fh:
        raw = json.load(fh)
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> SimConfig:
    missing = {"omega0", "gamma", "u0", "v0", "dt", "n_steps"} - raw.keys()
    if missing:
        raise ValueError(f"config missing keys: {sorted(missing)}")
    params = OscParams(raw["omega0"], raw["gamma"])
    u0 = np.atleast_1d(np.asarray(raw["u0"], dtype=float))
    v0 = np.atleast_1d(np.asarray(raw["v0"], dtype=float))
    if u0.shape != (params.dim,) or v0.shape != (params.dim,):
        raise ValueError(f"u0 and v0 must have {params.dim} entries")
    dt = float(raw["dt"])
    n_steps = raw["n_steps"]
    if not dt > 0:
        raise ValueError("dt must be > 0")
    if not isinstance(n_steps, int) or n_steps < 0:
        raise ValueError("n_steps must be a non-negative integer")
    sigma = float(raw.get("noise_sigma", 0.0))
    if sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    return SimConfig(params, u0, v0, dt, n_steps, sigma, raw.get("seed"))


def simulate(cfg: SimConfig) -> Trajectory:
    return sample_exact(cfg.params, cfg.u0, cfg.v0, cfg.dt, cfg.n_steps,
                        noise_sigma=cfg.noise_sigma, seed=cfg.seed)
