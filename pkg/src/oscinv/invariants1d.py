"""Constants of motion of the 1D damped oscillator.

Functions take ``u`` and ``v`` as scalars or equal-shape arrays for a
single axis (``axis`` selects the frequency in multi-axis parameters).
The combination ``w = gamma*u + v`` appears throughout.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import OscParams, Regime, derived_frequency
from .errors import RegimeError, SamplingError, SingularStateError

TWO_PI = 2.0 * np.pi


def _require(params: OscParams, axis: int, *allowed: Regime) -> float:
    reg, f = derived_frequency(params, axis)
    if reg not in allowed:
        names = "/".join(r.value for r in allowed)
        raise RegimeError(f"axis {axis} is {reg.value}, expected {names}")
    return f


def _arr(u, v):
    return np.asarray(u, dtype=float), np.asarray(v, dtype=float)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class UnwrappedPhase:
    """Principal phase in (-pi, pi] plus Riemann sheet number.

    The continuous phase is ``phi_raw - 2*pi*sheet``; the sheet grows by one
    each time the phase decreases through the branch cut at +-pi.
    """

    phi_raw: float
    sheet: int = 0

    @property
    def unwrapped(self) -> float:
        return self.phi_raw - TWO_PI * self.sheet


def principal(phi):
    """Map atan2 output onto (-pi, pi]."""
    return np.where(phi <= -np.pi, phi + TWO_PI, phi)


def phase_raw(params: OscParams, u, v, axis: int = 0):
    """atan2(gamma*u + v, omega*u) for an underdamped axis."""
    omega = _require(params, axis, Regime.UNDERDAMPED)
    u, v = _arr(u, v)
    if np.any((u == 0) & (v == 0)):
        raise SingularStateError("phase undefined at the origin")
    return _out(principal(np.arctan2(params.gamma * u + v, omega * u)))


def _sheet_steps(d):
    mag = np.abs(d)
    bad = (mag >= np.pi) & (mag <= 1.5 * np.pi)
    if np.any(bad):
        raise SamplingError(
            f"ambiguous phase jump of {float(d[bad].flat[0]):.4f} rad between samples; "
            "sample more finely")
    if np.any(mag > 2.5 * np.pi):
        raise SamplingError("phase jump exceeds one branch crossing; sample more finely")
    return np.where(d > 1.5 * np.pi, 1, np.where(d < -1.5 * np.pi, -1, 0))


def unwrap(prev: UnwrappedPhase, raw: float) -> UnwrappedPhase:
    """Advance one sample, choosing the sheet that keeps the phase continuous."""
    step = int(_sheet_steps(np.asarray(raw - prev.phi_raw)))
    return UnwrappedPhase(float(raw), prev.sheet + step)


def track_sheets(raw, initial_sheet=0) -> np.ndarray:
    """Sheet numbers for a sequence of raw phases along axis 0.

    Works column-wise for arrays of shape (T, ...).
    """
    raw = np.asarray(raw, dtype=float)
    steps = _sheet_steps(np.diff(raw, axis=0))
    first = np.broadcast_to(np.asarray(initial_sheet, dtype=int), raw.shape[1:])
    return np.concatenate([first[None], first[None] + np.cumsum(steps, axis=0)], axis=0)


def check_sampling(omega: float, dt: float):
    if omega * dt >= np.pi / 2:
        raise SamplingError(
            f"omega*dt = {omega * dt:.4g} >= pi/2; sheet tracking needs finer sampling")


def track_phase(params: OscParams, u, v, axis: int = 0, dt: float | None = None):
    """Raw phases and sheet numbers along a sampled trajectory.

    Returns ``(phi_raw, sheets)``. If ``dt`` is given the sampling
    constraint omega*dt < pi/2 is enforced.
    """
    raw = np.atleast_1d(phase_raw(params, u, v, axis))
    if dt is not None:
        check_sampling(derived_frequency(params, axis).value, dt)
    return raw, track_sheets(raw)


def r_underdamped(params: OscParams, u, v, sheet=0, axis: int = 0):
    """log[omega^2 u^2 + w^2] - 2 (gamma/omega) (phi - 2 pi n)."""
    omega = _require(params, axis, Regime.UNDERDAMPED)
    u, v = _arr(u, v)
    w = params.gamma * u + v
    if np.any((u == 0) & (v == 0)):
        raise SingularStateError("r undefined at the origin")
    phi = principal(np.arctan2(w, omega * u)) - TWO_PI * np.asarray(sheet)
    return _out(np.log((omega * u) ** 2 + w * w) - 2.0 * params.gamma / omega * phi)


def r_prime(params: OscParams, u, v, sheet=0, axis: int = 0):
    """exp(r) for the underdamped constant; equals 2E when gamma = 0."""
    return _out(np.exp(r_underdamped(params, u, v, sheet, axis)))


def r_underdamped_along(params: OscParams, u, v, axis: int = 0, dt: float | None = None):
    """Underdamped r along a trajectory with automatic sheet tracking."""
    _, sheets = track_phase(params, u, v, axis, dt)
    return r_underdamped(params, np.atleast_1d(u), np.atleast_1d(v), sheets, axis)


def energy(params: OscParams, u, v, axis: int = 0):
    w0 = params.omega0[axis]
    u, v = _arr(u, v)
    return _out(0.5 * (w0 * w0 * u * u + v * v))


def boundary_values(params: OscParams, u, v, axis: int = 0):
    """Signed distances-like values (zeta*u + w, zeta*u - w) of the overdamped boundaries."""
    zeta = _require(params, axis, Regime.OVERDAMPED)
    u, v = _arr(u, v)
    w = params.gamma * u + v
    return zeta * u + w, zeta * u - w


def r_overdamped(params: OscParams, u, v, axis: int = 0):
    """-(zeta+gamma) log|zeta u + w| - (zeta-gamma) log|zeta u - w|.

    The additive constant 2 zeta log(2 zeta) is dropped.
    """
    zeta = derived_frequency(params, axis).value
    plus, minus = boundary_values(params, u, v, axis)
    # within a few ulps of the line counts as on it
    tol = 8 * np.finfo(float).eps * (zeta * np.abs(u) + np.abs(params.gamma * u) + np.abs(v))
    if np.any(np.abs(plus) <= tol):
        raise SingularStateError("state on natural boundary zeta*u + (gamma*u + v) = 0")
    if np.any(np.abs(minus) <= tol):
        raise SingularStateError("state on natural boundary zeta*u - (gamma*u + v) = 0")
    g = params.gamma
    return _out(-(zeta + g) * np.log(np.abs(plus)) - (zeta - g) * np.log(np.abs(minus)))


class Region(enum.Enum):
    """Sign pattern of the overdamped eigen-coordinates (u~, v~)."""

    PP = "++"
    PM = "+-"
    MP = "-+"
    MM = "--"


def tilde_coordinates(params: OscParams, u, v, axis: int = 0):
    """Overdamped eigen-coordinates u~ = (zeta u + w)/(2 zeta), v~ = (zeta u - w)/(2 zeta)."""
    zeta = derived_frequency(params, axis).value
    plus, minus = boundary_values(params, u, v, axis)
    return _out(plus / (2 * zeta)), _out(minus / (2 * zeta))


def from_tilde(params: OscParams, ut, vt, axis: int = 0):
    """Inverse of :func:`tilde_coordinates`."""
    zeta = _require(params, axis, Regime.OVERDAMPED)
    ut, vt = _arr(ut, vt)
    u = ut + vt
    w = zeta * (ut - vt)
    return _out(u), _out(w - params.gamma * u)


def region(params: OscParams, u: float, v: float, axis: int = 0) -> Region:
    ut, vt = tilde_coordinates(params, u, v, axis)
    if ut == 0 or vt == 0:
        raise SingularStateError(f"state ({u}, {v}) lies on a region boundary")
    return Region(("+" if ut > 0 else "-") + ("+" if vt > 0 else "-"))


def r_critical(params: OscParams, u, v, axis: int = 0):
    """log|w| + gamma u / w at critical damping."""
    _require(params, axis, Regime.CRITICAL)
    u, v = _arr(u, v)
    w = params.gamma * u + v
    if np.any(w == 0):
        raise SingularStateError("state on singular line gamma*u + v = 0")
    return _out(np.log(np.abs(w)) + params.gamma * u / w)


def integrating_factor(params: OscParams, u, v, axis: int = 0):
    """rho = 1 / ((omega0^2 - gamma^2) u^2 + w^2), valid in every regime."""
    w0 = params.omega0[axis]
    g = params.gamma
    u, v = _arr(u, v)
    den = (w0 - g) * (w0 + g) * u * u + (g * u + v) ** 2
    if np.any(den == 0):
        raise SingularStateError("integrating factor undefined (zero denominator)")
    return _out(1.0 / den)


def one_form(params: OscParams, u, v, axis: int = 0):
    """Coefficients (M, N) of M du + N dv = (omega0^2 u + 2 gamma v) du + v dv."""
    w0 = params.omega0[axis]
    u, v = _arr(u, v)
    return _out(w0 * w0 * u + 2 * params.gamma * v), _out(v)


def r_alternative(params: OscParams, u, v, t, axis: int = 0):
    """Time-explicit constant 1/2 [(omega0^2 - gamma^2) u^2 + w^2] exp(2 gamma t).

    Valid in all three regimes.
    """
    w0 = params.omega0[axis]
    g = params.gamma
    u, v = _arr(u, v)
    t = np.asarray(t, dtype=float)
    return _out(0.5 * ((w0 - g) * (w0 + g) * u * u + (g * u + v) ** 2) * np.exp(2 * g * t))


def closed_form_r(params: OscParams, u, v, sheet=0, axis: int = 0):
    """Dispatch to the regime's closed-form constant."""
    reg = derived_frequency(params, axis).regime
    if reg is Regime.UNDERDAMPED:
        return r_underdamped(params, u, v, sheet, axis)
    if reg is Regime.OVERDAMPED:
        return r_overdamped(params, u, v, axis)
    return r_critical(params, u, v, axis)


def form_scale(params: OscParams, axis: int = 0) -> float:
    """Constant c with dr = c * rho * (M du + N dv) for the closed-form r."""
    reg, f = derived_frequency(params, axis)
    if reg is Regime.UNDERDAMPED:
        return 2.0
    if reg is Regime.OVERDAMPED:
        return -2.0 * f
    return 1.0
