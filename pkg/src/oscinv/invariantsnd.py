"""Constants of motion of the 2D and N-dimensional oscillator.

All axes must be underdamped (or undamped). Per-axis phases
phi_k = atan2(w_k, omega_k u_k) with w_k = gamma u_k + v_k are tracked on
their own Riemann sheets; every constant here is built from the
continuous phases phi_k - 2 pi n_k and the pseudo-energies
E~_k = 1/2 [(omega_k u_k)^2 + w_k^2].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import OscParams, Regime, derived_frequency
from .errors import RegimeError, SingularStateError
from .invariants1d import TWO_PI, UnwrappedPhase, check_sampling, principal, track_sheets

RATIO_RTOL = 1e-9


@dataclass(frozen=True)
class ModeQuantities:
    """Per-axis phase data for one state (shape (N,)) or a series (shape (T, N))."""

    omega0: np.ndarray
    gamma: float
    omega: np.ndarray
    u: np.ndarray
    v: np.ndarray
    phi_raw: np.ndarray
    sheet: np.ndarray
    pseudo_energy: np.ndarray

    @property
    def dim(self) -> int:
        return self.omega.size

    @property
    def w(self) -> np.ndarray:
        return self.gamma * self.u + self.v

    @property
    def phase(self) -> np.ndarray:
        """Continuous phases phi_k - 2 pi n_k."""
        return self.phi_raw - TWO_PI * self.sheet

    def phases(self) -> list[UnwrappedPhase]:
        """Per-axis :class:`UnwrappedPhase` of the last state."""
        raw = np.atleast_2d(self.phi_raw)[-1]
        sh = np.atleast_2d(self.sheet)[-1]
        return [UnwrappedPhase(float(p), int(n)) for p, n in zip(raw, sh)]


def _frequencies(params: OscParams) -> np.ndarray:
    out = []
    for k in range(params.dim):
        reg, f = derived_frequency(params, k)
        if reg is not Regime.UNDERDAMPED:
            raise RegimeError(
                f"axis {k} is {reg.value}; mixed or non-underdamped axes are not supported")
        out.append(f)
    return np.array(out)


def _raw_modes(params, u, v):
    omega = _frequencies(params)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.shape[-1:] != (params.dim,):
        raise ValueError(f"u and v must have trailing dimension {params.dim}")
    origin = (u == 0) & (v == 0)
    if np.any(origin):
        ax = int(np.argwhere(origin)[0][-1])
        raise SingularStateError(f"axis {ax} is at the origin; phase undefined")
    w = params.gamma * u + v
    raw = principal(np.arctan2(w, omega * u))
    e = 0.5 * ((omega * u) ** 2 + w * w)
    return omega, u, v, raw, e


def mode_quantities(params: OscParams, u, v, prev_phases=None) -> ModeQuantities:
    """Mode data for a single state, unwrapping against ``prev_phases``.

    ``prev_phases`` is None (start on sheet 0), a :class:`ModeQuantities`, or a
    sequence of :class:`UnwrappedPhase`, one per axis.
    """
    omega, u, v, raw, e = _raw_modes(params, u, v)
    if prev_phases is None:
        sheet = np.zeros(params.dim, dtype=int)
    else:
        if isinstance(prev_phases, ModeQuantities):
            prev_phases = prev_phases.phases()
        prev_raw = np.array([p.phi_raw for p in prev_phases])
        prev_sheet = np.array([p.sheet for p in prev_phases])
        sheet = track_sheets(np.stack([prev_raw, raw]), prev_sheet)[1]
    return ModeQuantities(params.omega0_array, params.gamma, omega, u, v, raw, sheet, e)


def track_modes(params: OscParams, u, v, dt: float | None = None) -> ModeQuantities:
    """Mode data along a trajectory; ``u``, ``v`` have shape (T, N)."""
    omega, u, v, raw, e = _raw_modes(params, u, v)
    if dt is not None:
        check_sampling(float(omega.max()), dt)
    return ModeQuantities(params.omega0_array, params.gamma, omega, u, v, raw,
                          track_sheets(raw), e)


def _pair(modes: ModeQuantities, i: int, j: int, omega_i=None, omega_j=None):
    wi = modes.omega[i] if omega_i is None else omega_i
    wj = modes.omega[j] if omega_j is None else omega_j
    ph = modes.phase
    return wi * ph[..., j] - wj * ph[..., i]


def _require_undamped(modes: ModeQuantities):
    if modes.gamma != 0:
        raise RegimeError(f"undamped constant requested but gamma = {modes.gamma}")


def _require_positive(e):
    if np.any(e <= 0):
        raise SingularStateError("zero (pseudo-)energy on an axis")


def c_r_undamped(modes: ModeQuantities, omega10=None, omega20=None):
    """omega10 phi2 - omega20 phi1 - 2 pi (n2 omega10 - n1 omega20)."""
    _require_undamped(modes)
    return _pair(modes, 0, 1, omega10, omega20)


def c_i_undamped(modes: ModeQuantities, omega10=None, omega20=None):
    """-omega20 log sqrt(2 E1) - omega10 log sqrt(2 E2)."""
    _require_undamped(modes)
    e = modes.pseudo_energy
    _require_positive(e[..., :2])
    w1 = modes.omega[0] if omega10 is None else omega10
    w2 = modes.omega[1] if omega20 is None else omega20
    return -0.5 * (w2 * np.log(2 * e[..., 0]) + w1 * np.log(2 * e[..., 1]))


def c_a_damped(modes: ModeQuantities):
    """gamma log(E~2 / E~1)."""
    e = modes.pseudo_energy
    _require_positive(e[..., :2])
    return modes.gamma * np.log(e[..., 1] / e[..., 0])


def c_b_damped(modes: ModeQuantities):
    """omega1 phi2 - omega2 phi1 with unwrapped phases; equals C_R at gamma = 0."""
    return _pair(modes, 0, 1)


def product_identity(modes: ModeQuantities, i: int = 0, j: int = 1):
    """Both sides of 4 E~i E~j = (wi wj ui uj + Wi Wj)^2 + (wi ui Wj - wj uj Wi)^2.

    Here W = gamma u + v. For equal frequencies the second square is
    omega^2 (ui vj - uj vi)^2. Returns ``(lhs, rhs)``.
    """
    e = modes.pseudo_energy
    wi, wj = modes.omega[i], modes.omega[j]
    ui, uj = modes.u[..., i], modes.u[..., j]
    Wi, Wj = modes.w[..., i], modes.w[..., j]
    lhs = 4 * e[..., i] * e[..., j]
    rhs = (wi * wj * ui * uj + Wi * Wj) ** 2 + (wi * ui * Wj - wj * uj * Wi) ** 2
    return lhs, rhs


class IsoProjections(NamedTuple):
    """sin/cos of C/omega via the phase difference and via state polynomials."""

    sin_phase: np.ndarray
    cos_phase: np.ndarray
    sin_poly: np.ndarray
    cos_poly: np.ndarray

    def max_disagreement(self) -> float:
        return float(max(np.max(np.abs(self.sin_phase - self.sin_poly)),
                         np.max(np.abs(self.cos_phase - self.cos_poly))))


def iso_projections(modes: ModeQuantities, c=None) -> IsoProjections:
    """Isotropic projections of C_R^iso (gamma = 0) or C_B (gamma > 0).

    Polynomial route: sin = omega L / (2 sqrt(E~1 E~2)),
    cos = (omega^2 u1 u2 + W1 W2) / (2 sqrt(E~1 E~2)).
    """
    w1, w2 = modes.omega[0], modes.omega[1]
    if abs(w1 - w2) > RATIO_RTOL * max(w1, w2):
        raise RegimeError(f"isotropic projection needs omega1 == omega2, got {w1}, {w2}")
    e = modes.pseudo_energy
    _require_positive(e[..., :2])
    if c is None:
        c = c_b_damped(modes)
    u1, u2 = modes.u[..., 0], modes.u[..., 1]
    v1, v2 = modes.v[..., 0], modes.v[..., 1]
    W1, W2 = modes.w[..., 0], modes.w[..., 1]
    norm = 2 * np.sqrt(e[..., 0] * e[..., 1])
    sin_poly = w1 * (u1 * v2 - u2 * v1) / norm
    cos_poly = (w1 * w1 * u1 * u2 + W1 * W2) / norm
    return IsoProjections(np.sin(c / w1), np.cos(c / w1), sin_poly, cos_poly)


class CommensurateInvariant(NamedTuple):
    phase: np.ndarray
    poly: np.ndarray | None


def commensurate_invariant(modes: ModeQuantities, a: int, b: int, omega_bar: float):
    """sin(C/omega_bar) for omega1 : omega2 = a : b.

    ``phase`` is sin(a phi2 - b phi1) from the unwrapped phases. For
    (a, b) = (1, 2) ``poly`` is the state polynomial
    [wb^2 u1^2 W2 - W1^2 W2 - 4 wb^2 u1 u2 W1] / sqrt(8 E~1^2 E~2)
    with W = gamma u + v (W = v when undamped); otherwise None.
    """
    if a < 1 or b < 1 or math.gcd(int(a), int(b)) != 1:
        raise ValueError(f"(a, b) = ({a}, {b}) must be coprime positive integers")
    w1, w2 = modes.omega[0], modes.omega[1]
    for name, got, want in (("omega1", w1, omega_bar * a), ("omega2", w2, omega_bar * b)):
        if abs(got - want) > RATIO_RTOL * want:
            raise ValueError(f"{name} = {got} is not {omega_bar} * its integer multiple")
    e = modes.pseudo_energy
    _require_positive(e[..., :2])
    ph = modes.phase
    phase_route = np.sin(a * ph[..., 1] - b * ph[..., 0])
    poly = None
    if (a, b) == (1, 2):
        u1, u2 = modes.u[..., 0], modes.u[..., 1]
        W1, W2 = modes.w[..., 0], modes.w[..., 1]
        wb2 = omega_bar * omega_bar
        num = wb2 * u1 * u1 * W2 - W1 * W1 * W2 - 4 * wb2 * u1 * u2 * W1
        poly = num / np.sqrt(8 * e[..., 0] ** 2 * e[..., 1])
    return CommensurateInvariant(phase_route, poly)


def angular_momentum(u, v):
    """L = u1 v2 - u2 v1."""
    u = np.asarray(u)
    v = np.asarray(v)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def generalized_angular_momentum(modes: ModeQuantities, omega10=None):
    """C' = (2/omega10) sqrt(E1 E2) sin(Phi), Phi = C_R / omega10.

    Constant for every frequency ratio; equals L at isotropy.
    """
    _require_undamped(modes)
    e = modes.pseudo_energy
    _require_positive(e[..., :2])
    w1 = modes.omega[0] if omega10 is None else omega10
    big_phi = c_r_undamped(modes, w1) / w1
    return 2.0 / w1 * np.sqrt(e[..., 0] * e[..., 1]) * np.sin(big_phi)


def gam_polynomial(modes: ModeQuantities):
    """Polynomial form of C' for omega10/omega20 = 1 or 1/2.

    Ratio 1:   u1 v2 - u2 v1.
    Ratio 1/2: (w10^2 u1^2 v2 - v1^2 v2 - 4 w10^2 u1 u2 v1) / (w10 sqrt(2 E1)).
    """
    _require_undamped(modes)
    w1, w2 = modes.omega[0], modes.omega[1]
    u1, u2 = modes.u[..., 0], modes.u[..., 1]
    v1, v2 = modes.v[..., 0], modes.v[..., 1]
    if abs(w1 - w2) <= RATIO_RTOL * w2:
        return u1 * v2 - u2 * v1
    if abs(2 * w1 - w2) <= RATIO_RTOL * w2:
        e1 = modes.pseudo_energy[..., 0]
        _require_positive(e1)
        num = w1 * w1 * u1 * u1 * v2 - v1 * v1 * v2 - 4 * w1 * w1 * u1 * u2 * v1
        return num / (w1 * np.sqrt(2 * e1))
    raise ValueError(f"no polynomial form for omega10/omega20 = {w1 / w2}")


def phase_rate(modes: ModeQuantities):
    """d phi_k / dt from the state and the equation of motion (-omega_k on shell)."""
    u, v, w = modes.u, modes.v, modes.w
    om = modes.omega
    wdot = -(modes.omega0 ** 2) * u - modes.gamma * v
    return om * (u * wdot - w * v) / ((om * u) ** 2 + w * w)


@dataclass(frozen=True)
class WedgeConstants:
    """Antisymmetric table C(i, j) = omega_i phi_j - omega_j phi_i."""

    table: np.ndarray
    omega: np.ndarray
    phase: np.ndarray

    def independent(self) -> np.ndarray:
        """The N(N-1)/2 entries above the diagonal, shape (..., N(N-1)/2)."""
        iu = np.triu_indices(self.omega.size, k=1)
        return self.table[..., iu[0], iu[1]]


def wedge(a, b):
    """Exterior product table a_i b_j - a_j b_i over the last axis."""
    a = np.asarray(a)
    b = np.asarray(b)
    a, b = np.broadcast_arrays(a, b)
    return a[..., :, None] * b[..., None, :] - a[..., None, :] * b[..., :, None]


def wedge_constants(modes: ModeQuantities) -> WedgeConstants:
    """C = omega ^ phi over all axis pairs."""
    return WedgeConstants(wedge(modes.omega, modes.phase), modes.omega, modes.phase)


def wedge_onshell(modes: ModeQuantities):
    """The on-shell form phi ^ phi_dot, with phi_dot from the equation of motion."""
    return wedge(modes.phase, phase_rate(modes))
