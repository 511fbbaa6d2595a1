import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from oscinv.core import (OscParams, Regime, classify_regime, derived_frequency,
                         evaluate_exact, exact_acceleration, exact_solution_from_initial)


@pytest.mark.parametrize("gamma, regime", [
    (0.1, Regime.UNDERDAMPED),
    (1.1, Regime.OVERDAMPED),
    (1.0, Regime.CRITICAL),
    (0.0, Regime.UNDERDAMPED),
    (1.0 + 1e-13, Regime.CRITICAL),
    (1.0 + 1e-9, Regime.OVERDAMPED),
])
def test_classify_regime(gamma, regime):
    assert classify_regime(OscParams(1.0, gamma)) is regime


def test_regime_per_axis():
    p = OscParams([0.5, 1.0, 2.0], 1.0)
    assert p.regimes() == (Regime.OVERDAMPED, Regime.CRITICAL, Regime.UNDERDAMPED)


@pytest.mark.parametrize("bad", [dict(omega0=0.0), dict(omega0=[1.0, -1.0]),
                                 dict(omega0=1.0, gamma=-0.1), dict(omega0=[]),
                                 dict(omega0=np.nan)])
def test_params_invariants(bad):
    with pytest.raises(ValueError):
        OscParams(**bad)


def test_derived_frequency_values():
    assert derived_frequency(OscParams(1.0, 0.0)).value == 1.0
    assert derived_frequency(OscParams(1.0, 0.1)).value == pytest.approx(np.sqrt(0.99), rel=1e-15)
    f = derived_frequency(OscParams(1.0, 1.1))
    assert f.regime is Regime.OVERDAMPED
    assert f.value == pytest.approx(np.sqrt(1.21 - 1.0), rel=1e-14)
    assert derived_frequency(OscParams(1.0, 1.0)).value == 0.0


@given(w0=st.floats(0.05, 20), ratio=st.floats(0, 3))
def test_derived_frequency_identity(w0, ratio):
    p = OscParams(w0, w0 * ratio)
    reg, f = derived_frequency(p)
    sign = {Regime.UNDERDAMPED: 1, Regime.OVERDAMPED: -1, Regime.CRITICAL: 0}[reg]
    assert f >= 0
    if sign:
        scale = max(w0 * w0, p.gamma ** 2)
        assert abs(f * f + sign * p.gamma ** 2 - sign * w0 * w0) <= 1e-14 * scale


def test_coefficients_examples():
    sol = exact_solution_from_initial(OscParams(1.0, 0.0), [1.0], [0.0])
    assert (sol.a[0], sol.b[0]) == (1.0, 0.0)
    sol = exact_solution_from_initial(OscParams(1.0, 0.1), [1.5], [-2.5827])
    assert sol.a[0] == 1.5
    assert sol.b[0] == pytest.approx((-2.5827 + 0.15) / np.sqrt(0.99), rel=1e-14)
    assert sol.b[0] == pytest.approx(-2.44495, abs=1e-5)
    sol = exact_solution_from_initial(OscParams(1.0, 1.0), [-1.58], [-3.99])
    assert sol.a[0] == -1.58
    assert sol.b[0] == pytest.approx(-5.57, rel=1e-14)


def test_evaluate_examples():
    p = OscParams(1.0, 0.1)
    s = evaluate_exact(exact_solution_from_initial(p, [1.5], [-2.5827]), 0.0)
    assert s.u[0] == pytest.approx(1.5, rel=1e-14)
    assert s.v[0] == pytest.approx(-2.5827, rel=1e-14)
    pc = OscParams(1.0, 1.0)
    s = evaluate_exact(exact_solution_from_initial(pc, [-1.58], [-3.99]), 1.0)
    assert s.u[0] + s.v[0] == pytest.approx(-5.57 / np.e, rel=1e-13)
    assert -5.57 / np.e == pytest.approx(-2.04909, abs=1e-5)
    s = evaluate_exact(exact_solution_from_initial(OscParams(1.0), [1.0], [0.0]), np.pi / 2)
    assert s.u[0] == pytest.approx(0.0, abs=1e-15)
    assert s.v[0] == pytest.approx(-1.0, rel=1e-15)


state = st.floats(-5, 5).filter(lambda x: abs(x) > 1e-3)


@settings(max_examples=200)
@given(w0=st.floats(0.1, 5), ratio=st.sampled_from([0.0, 0.3, 0.9, 1.0, 1.2, 3.0]),
       u0=state, v0=state)
def test_initial_condition_recovered(w0, ratio, u0, v0):
    sol = exact_solution_from_initial(OscParams(w0, w0 * ratio), [u0], [v0])
    s = evaluate_exact(sol, 0.0)
    assert s.u[0] == pytest.approx(u0, rel=1e-12, abs=1e-12 * abs(v0) / w0)
    assert s.v[0] == pytest.approx(v0, rel=1e-12, abs=1e-12 * w0 * abs(u0))


@pytest.mark.parametrize("gamma", [0.0, 0.1, 1.0, 1.1, 2.5])
def test_matches_matrix_exponential(gamma):
    # independent oracle: propagate with expm of the system matrix
    p = OscParams(1.3, gamma)
    x0 = np.array([0.7, -1.9])
    sol = exact_solution_from_initial(p, x0[:1], x0[1:])
    for t in (0.37, 2.0, 6.5):
        u, v = evaluate_exact(sol, t)
        ref = scipy.linalg.expm(p.system_matrix() * t) @ x0
        assert np.allclose([u[0], v[0]], ref, rtol=1e-11, atol=1e-13)


@pytest.mark.parametrize("omega0, gamma", [(1.0, 0.1), (1.0, 1.1), (1.0, 1.0), ([1.0, 2.0, 0.5], 0.7)])
def test_equation_of_motion_residual(omega0, gamma):
    p = OscParams(omega0, gamma)
    rng = np.random.default_rng(1)
    sol = exact_solution_from_initial(p, rng.normal(size=p.dim), rng.normal(size=p.dim))
    t = np.linspace(0, 10, 1001)
    u, v = evaluate_exact(sol, t)
    a = exact_acceleration(sol, t)
    w0sq = p.omega0_array ** 2
    resid = a + 2 * gamma * v + w0sq * u
    assert np.max(np.abs(resid)) < 1e-10 * np.max(np.abs(w0sq * u))


def test_amplitude_phase_form_and_onshell_phase():
    p = OscParams(1.0, 0.1)
    sol = exact_solution_from_initial(p, [1.5], [-2.5827])
    amp, beta = sol.amplitude_phase()
    w = derived_frequency(p).value
    t = np.linspace(0, 60, 1000)
    u, v = evaluate_exact(sol, t)
    assert np.allclose(u[:, 0], amp[0] * np.exp(-0.1 * t) * np.cos(w * t - beta[0]),
                       atol=1e-13)
    phase = np.unwrap(np.arctan2(0.1 * u[:, 0] + v[:, 0], w * u[:, 0]))
    offset = phase - (-w * t + beta[0])
    assert np.ptp(offset) < 1e-10
    assert abs(offset[0]) < 1e-12
