"""Oscillator parameters, damping regimes and closed-form solutions.

Each axis k obeys the uncoupled equation of motion

    u_k'' + 2*gamma*u_k' + omega_k0**2 * u_k = 0

with a damping coefficient shared by all axes.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

# |gamma - omega_k0| at or below this fraction of omega_k0 counts as critical.
CRITICAL_RTOL = 1e-12


class Regime(enum.Enum):
    UNDERDAMPED = "underdamped"
    OVERDAMPED = "overdamped"
    CRITICAL = "critical"


@dataclass(frozen=True)
class OscParams:
    """Physical parameters of an N-dimensional damped oscillator.

    ``omega0`` may be a scalar (1D) or a sequence with one natural
    frequency per axis.
    """

    omega0: tuple[float, ...]
    gamma: float = 0.0

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.omega0, dtype=float))
        if w.ndim != 1 or w.size == 0:
            raise ValueError("omega0 must be a scalar or a non-empty 1D sequence")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError(f"every omega0 must be finite and > 0, got {w.tolist()}")
        g = float(self.gamma)
        if not np.isfinite(g) or g < 0:
            raise ValueError(f"gamma must be finite and >= 0, got {self.gamma}")
        object.__setattr__(self, "omega0", tuple(float(x) for x in w))
        object.__setattr__(self, "gamma", g)

    @property
    def dim(self) -> int:
        return len(self.omega0)

    @property
    def omega0_array(self) -> np.ndarray:
        return np.array(self.omega0)

    def regimes(self) -> tuple[Regime, ...]:
        return tuple(classify_regime(self, k) for k in range(self.dim))

    def system_matrix(self, axis: int = 0) -> np.ndarray:
        """Matrix M of d/dt (u, v) = M (u, v) for one axis."""
        w0 = self.omega0[axis]
        return np.array([[0.0, 1.0], [-w0 * w0, -2.0 * self.gamma]])


class DerivedFreq(NamedTuple):
    """Regime-dependent frequency: omega, zeta, or 0 at critical damping."""

    regime: Regime
    value: float


class State(NamedTuple):
    """Phase-space point(s); arrays have trailing axis of length ``dim``."""

    u: np.ndarray
    v: np.ndarray


def classify_regime(params: OscParams, axis: int = 0) -> Regime:
    w0 = params.omega0[axis]
    g = params.gamma
    if abs(g - w0) <= CRITICAL_RTOL * w0:
        return Regime.CRITICAL
    return Regime.UNDERDAMPED if g < w0 else Regime.OVERDAMPED


def derived_frequency(params: OscParams, axis: int = 0) -> DerivedFreq:
    regime = classify_regime(params, axis)
    w0 = params.omega0[axis]
    g = params.gamma
    if regime is Regime.UNDERDAMPED:
        return DerivedFreq(regime, float(np.sqrt((w0 - g) * (w0 + g))))
    if regime is Regime.OVERDAMPED:
        return DerivedFreq(regime, float(np.sqrt((g - w0) * (g + w0))))
    return DerivedFreq(regime, 0.0)


@dataclass(frozen=True)
class ExactSolution:
    """Closed-form solution, one coefficient pair per axis.

    Underdamped:  u = exp(-g t) [A cos(w t) + B sin(w t)]
    Overdamped:   u = A exp((-g + z) t) + B exp((-g - z) t)
    Critical:     u = (A + B t) exp(-g t)
    """

    params: OscParams
    regimes: tuple[Regime, ...]
    freqs: np.ndarray
    a: np.ndarray
    b: np.ndarray
    u0: np.ndarray = field(repr=False)
    v0: np.ndarray = field(repr=False)

    def amplitude_phase(self) -> tuple[np.ndarray, np.ndarray]:
        """Amplitude/phase form u = A_k exp(-g t) cos(w_k t - beta_k).

        Only defined on underdamped axes; other axes get NaN.
        """
        g = self.params.gamma
        amp = np.full(self.params.dim, np.nan)
        beta = np.full(self.params.dim, np.nan)
        for k, reg in enumerate(self.regimes):
            if reg is not Regime.UNDERDAMPED:
                continue
            w = self.freqs[k]
            wu = w * self.u0[k]
            s = g * self.u0[k] + self.v0[k]
            amp[k] = np.hypot(wu, s) / w
            beta[k] = np.arctan2(s, wu)
        return amp, beta


def exact_solution_from_initial(params: OscParams, u0, v0) -> ExactSolution:
    u0 = np.atleast_1d(np.asarray(u0, dtype=float))
    v0 = np.atleast_1d(np.asarray(v0, dtype=float))
    if u0.shape != (params.dim,) or v0.shape != (params.dim,):
        raise ValueError(
            f"u0 and v0 must have length {params.dim}, got {u0.shape} and {v0.shape}")
    g = params.gamma
    regimes = []
    freqs = np.zeros(params.dim)
    a = np.zeros(params.dim)
    b = np.zeros(params.dim)
    for k in range(params.dim):
        reg, f = derived_frequency(params, k)
        regimes.append(reg)
        freqs[k] = f
        w = g * u0[k] + v0[k]
        if reg is Regime.UNDERDAMPED:
            a[k], b[k] = u0[k], w / f
        elif reg is Regime.OVERDAMPED:
            a[k] = (f * u0[k] + w) / (2.0 * f)
            b[k] = (f * u0[k] - w) / (2.0 * f)
        else:
            a[k], b[k] = u0[k], w
    return ExactSolution(params, tuple(regimes), freqs, a, b, u0.copy(), v0.copy())


def _derivative_coeffs(reg, g, f, a, b):
    # coefficients of d/dt in the same basis as (a, b)
    if reg is Regime.UNDERDAMPED:
        return -g * a + f * b, -g * b - f * a
    if reg is Regime.OVERDAMPED:
        return (-g + f) * a, (-g - f) * b
    return b - g * a, -g * b


def _basis(reg, g, f, a, b, t):
    if reg is Regime.UNDERDAMPED:
        return np.exp(-g * t) * (a * np.cos(f * t) + b * np.sin(f * t))
    if reg is Regime.OVERDAMPED:
        return a * np.exp((-g + f) * t) + b * np.exp((-g - f) * t)
    return (a + b * t) * np.exp(-g * t)


def _evaluate(sol: ExactSolution, t, order: int) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape + (sol.params.dim,))
    g = sol.params.gamma
    for k, reg in enumerate(sol.regimes):
        a, b = sol.a[k], sol.b[k]
        for _ in range(order):
            a, b = _derivative_coeffs(reg, g, sol.freqs[k], a, b)
        out[..., k] = _basis(reg, g, sol.freqs[k], a, b, t)
    return out


def evaluate_exact(sol: ExactSolution, t) -> State:
    """Position and velocity at time(s) ``t``; velocity is analytic."""
    return State(_evaluate(sol, t, 0), _evaluate(sol, t, 1))


def exact_acceleration(sol: ExactSolution, t) -> np.ndarray:
    """Analytic second time derivative of the exact solution."""
    return _evaluate(sol, t, 2)


def equation_of_motion(params: OscParams, u, v) -> np.ndarray:
    """Acceleration -omega0**2 u - 2 gamma v, broadcasting over the axis dimension."""
    w0 = params.omega0_array
    return -(w0 * w0) * np.asarray(u) - 2.0 * params.gamma * np.asarray(v)
