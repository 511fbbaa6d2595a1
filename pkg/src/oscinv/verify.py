"""Numerical checks for constants of motion."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .core import OscParams, Regime, derived_frequency, equation_of_motion
from .errors import NaturalBoundaryError, OscinvError, SingularStateError
from .invariants1d import form_scale, integrating_factor, one_form
from .trajectory import Trajectory

FD_STEP = 1e-5


@dataclass(frozen=True)
class ConstancyReport:
    n_samples: int
    mean: float
    max_abs_deviation: float
    relative_spread: float
    first_violation_index: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def constancy(values, tol: float | None = None) -> ConstancyReport:
    """Spread of a series that should be constant.

    ``relative_spread`` is (max - min) / |mean| (absolute when the mean is
    zero). With ``tol`` set, ``first_violation_index`` is the first sample
    whose relative distance from the first sample exceeds ``tol``.
    """
    x = np.asarray(values, dtype=float).ravel()
    if x.size < 2:
        raise ValueError("constancy needs at least two values")
    bad = np.flatnonzero(~np.isfinite(x))
    if bad.size:
        raise ValueError(f"non-finite value at index {bad[0]}")
    mean = float(np.mean(x))
    scale = abs(mean) if mean != 0 else 1.0
    first = None
    if tol is not None:
        viol = np.flatnonzero(np.abs(x - x[0]) / scale > tol)
        first = int(viol[0]) if viol.size else None
    return ConstancyReport(
        n_samples=int(x.size),
        mean=mean,
        max_abs_deviation=float(np.max(np.abs(x - mean))),
        relative_spread=float(np.ptp(x) / scale),
        first_violation_index=first,
    )


def poisson_bracket(f: Callable, g: Callable, u, v, h: float = FD_STEP) -> float:
    """{f, g} = sum_k (df/du_k dg/dv_k - df/dv_k dg/du_k) by central differences.

    ``f`` and ``g`` take arrays ``(u, v)`` of shape (N,) and return a scalar.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))

    def grad(fn, name):
        du = np.empty(u.size)
        dv = np.empty(u.size)
        for k in range(u.size):
            e = np.zeros(u.size)
            e[k] = h
            try:
                du[k] = (fn(u + e, v) - fn(u - e, v)) / (2 * h)
                dv[k] = (fn(u, v + e) - fn(u, v - e)) / (2 * h)
            except OscinvError as exc:
                raise SingularStateError(
                    f"{name} not evaluable within the stencil at axis {k}: {exc}") from exc
        return du, dv

    fu, fv = grad(f, "f")
    gu, gv = grad(g, "g")
    return float(np.sum(fu * gv - fv * gu))


def hamiltonian(params: OscParams) -> Callable:
    """H_N = sum_k 1/2 (omega_k0^2 u_k^2 + v_k^2) as a state function."""
    w0sq = params.omega0_array ** 2

    def h(u, v):
        return float(0.5 * np.sum(w0sq * np.asarray(u) ** 2 + np.asarray(v) ** 2))
    return h


@dataclass(frozen=True)
class EnergyBudget:
    """Energy E, dissipated work W (both summed over axes) and the rate residual."""

    max_residual: float
    energy: np.ndarray
    work: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.energy + self.work


def energy_budget(traj: Trajectory, params: OscParams | None = None,
                  acceleration=None) -> EnergyBudget:
    """Check dE/dt + 2 gamma v^2 = 0 sample by sample and accumulate W.

    The rate residual |omega0^2 u v + v a + 2 gamma v^2| uses
    ``acceleration`` if given (e.g. the analytic second derivative of an
    exact solution), otherwise the equation of motion. It is normalized by
    (omega0^2 u^2 + v^2) max(omega0, gamma). W = int 2 gamma v^2 dt is
    accumulated by the trapezoid rule with the Euler-Maclaurin endpoint
    correction, which is fourth-order accurate.
    """
    params = traj.params if params is None else params
    if params is None:
        raise ValueError("energy_budget needs oscillator parameters")
    u, v = traj.u, traj.v
    w0 = params.omega0_array
    g = params.gamma
    a = equation_of_motion(params, u, v) if acceleration is None else np.asarray(acceleration)
    rate = w0 * w0 * u * v + v * a + 2 * g * v * v
    scale = (w0 * w0 * u * u + v * v) * np.maximum(w0, g)
    with np.errstate(invalid="ignore", divide="ignore"):
        norm = np.where(scale > 0, np.abs(rate) / scale, np.abs(rate))
    energy = 0.5 * np.sum(w0 * w0 * u * u + v * v, axis=1)
    power = np.sum(2 * g * v * v, axis=1)
    dpower = np.sum(4 * g * v * a, axis=1)
    dt = traj.dt
    work = np.zeros(len(traj))
    if len(traj) > 1:
        work[1:] = np.cumsum(0.5 * dt * (power[1:] + power[:-1]))
        work[1:] -= dt * dt / 12.0 * (dpower[1:] - dpower[0])
    return EnergyBudget(float(np.max(norm)), energy, work)


def _boundary_functions(params: OscParams, axis: int):
    reg, f = derived_frequency(params, axis)
    g = params.gamma
    if reg is Regime.OVERDAMPED:
        return [("zeta*u + (gamma*u + v)", lambda u, v: f * u + g * u + v),
                ("zeta*u - (gamma*u + v)", lambda u, v: f * u - g * u - v)]
    if reg is Regime.CRITICAL:
        return [("gamma*u + v", lambda u, v: g * u + v)]
    return []


def _segment_integral(params, a, b, rho, axis, tol, max_level=22):
    d = b - a
    if not np.any(d):
        return 0.0

    def midpoint(n):
        s = (np.arange(n) + 0.5) / n
        u = a[0] + s * d[0]
        v = a[1] + s * d[1]
        m, nn = one_form(params, u, v, axis)
        return float(np.sum(rho(params, u, v, axis) * (m * d[0] + nn * d[1])) / n)

    n = 8
    prev = midpoint(n)
    for _ in range(max_level):
        n *= 2
        cur = midpoint(n)
        if abs(cur - prev) < tol:
            # midpoint error falls by 4 per halving
            return cur + (cur - prev) / 3.0
        prev = cur
    raise OscinvError(f"path integral did not converge on segment {a} -> {b}")


def reconstruct_r_by_path_integral(params: OscParams, path, rho=None, r0: float = 0.0,
                                   axis: int = 0, scale: float | None = None,
                                   tol: float = 1e-9) -> float:
    """r at the end of a polyline from r0 plus the line integral of rho (M du + N dv).

    ``path`` has shape (P, 2) with rows (u, v), starting at the point whose
    value is ``r0``. ``scale`` multiplies the integral; by default it is the
    constant relating the 1-form to the closed-form r of the regime, so the
    result is directly comparable with :func:`~oscinv.invariants1d.closed_form_r`.
    """
    path = np.atleast_2d(np.asarray(path, dtype=float))
    if path.shape[1] != 2:
        raise ValueError("path must have shape (P, 2)")
    rho = integrating_factor if rho is None else rho
    scale = form_scale(params, axis) if scale is None else scale
    checks = _boundary_functions(params, axis)
    total = 0.0
    for i in range(path.shape[0] - 1):
        a, b = path[i], path[i + 1]
        for name, fn in checks:
            fa, fb = fn(*a), fn(*b)
            if fa * fb <= 0 and np.any(a != b):
                raise NaturalBoundaryError(f"segment {i} crosses or touches the boundary {name} = 0")
        if not checks:
            d = b - a
            dd = float(d @ d)
            s = 0.0 if dd == 0 else float(np.clip(-(a @ d) / dd, 0.0, 1.0))
            if not np.any(a + s * d):
                raise NaturalBoundaryError(f"segment {i} passes through the origin")
        total += _segment_integral(params, a, b, rho, axis, tol)
    return r0 + scale * total
