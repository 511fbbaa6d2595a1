import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oscinv import invariants1d as inv
from oscinv.core import OscParams, exact_acceleration, exact_solution_from_initial
from oscinv.errors import NaturalBoundaryError, SingularStateError
from oscinv.trajectory import sample_exact
from oscinv.verify import (constancy, energy_budget, hamiltonian, poisson_bracket,
                           reconstruct_r_by_path_integral)

from conftest import UNDER_CASE

UNDER = OscParams(1.0, 0.1)
OVER = OscParams(1.0, 1.1)
CRIT = OscParams(1.0, 1.0)


def test_constancy_flat():
    rep = constancy([5, 5, 5])
    assert rep.relative_spread == 0
    assert rep.n_samples == 3 and rep.mean == 5


def test_constancy_sample_case():
    tr = sample_exact(**UNDER_CASE)
    r = inv.r_underdamped_along(UNDER, tr.u[:, 0], tr.v[:, 0], dt=UNDER_CASE["dt"])
    assert constancy(r).relative_spread < 1e-10


def test_constancy_errors():
    with pytest.raises(ValueError, match="index 2"):
        constancy([1.0, 1.0, np.nan, 1.0])
    with pytest.raises(ValueError):
        constancy([1.0])


def test_constancy_violation_index_and_json():
    rep = constancy([1.0, 1.0, 1.2, 1.0], tol=0.1)
    assert rep.first_violation_index == 2
    assert json.loads(json.dumps(rep.to_dict()))["first_violation_index"] == 2


def test_poisson_bracket_trivial():
    h = hamiltonian(OscParams([1.0, 1.5]))
    u, v = np.array([0.3, -0.7]), np.array([1.1, 0.4])
    assert abs(poisson_bracket(h, h, u, v)) < 1e-10
    assert poisson_bracket(lambda u, v: u[0], lambda u, v: v[0], u, v) == pytest.approx(1, abs=1e-8)


@settings(max_examples=30)
@given(st.lists(st.floats(-2, 2), min_size=4, max_size=4), st.floats(-3, 3))
def test_poisson_bracket_antisymmetric_bilinear(x, a):
    u, v = np.array(x[:2]), np.array(x[2:])

    def f(u, v):
        return float(np.sin(u[0]) * v[1] + u[1] ** 2)

    def g(u, v):
        return float(np.cos(v[0]) + u[0] * u[1] * v[1])

    def k(u, v):
        return float(u[1] * v[0] ** 2)

    fg = poisson_bracket(f, g, u, v)
    assert fg == pytest.approx(-poisson_bracket(g, f, u, v), abs=1e-6)
    combo = poisson_bracket(lambda u, v: f(u, v) + a * k(u, v), g, u, v)
    assert combo == pytest.approx(fg + a * poisson_bracket(k, g, u, v), abs=1e-6)


def test_poisson_bracket_stencil_failure():
    h = hamiltonian(OscParams(1.0))

    def r0(u, v):
        # undefined at the origin, which lies inside the stencil around (0, h)
        return float(inv.r_underdamped(OscParams(1.0), u[0], v[0]))

    with pytest.raises(SingularStateError, match="stencil"):
        poisson_bracket(r0, h, [0.0], [1e-5])


@pytest.mark.parametrize("params,u0,v0", [
    (UNDER, [1.5], [-2.5827]),
    (OVER, [-1.75], [-3.99]),
    (CRIT, [-1.58], [-3.99]),
    (OscParams([1.0, 2.3], 0.2), [0.4, -1.0], [1.0, 0.3]),
])
def test_energy_budget_residual(params, u0, v0):
    tr = sample_exact(params, u0, v0, 0.01, 2000)
    sol = exact_solution_from_initial(params, u0, v0)
    acc = exact_acceleration(sol, tr.t)
    assert energy_budget(tr, acceleration=acc).max_residual < 1e-12
    assert energy_budget(tr).max_residual < 1e-12


def test_energy_plus_work_constant():
    tr = sample_exact(UNDER, [1.5], [-2.5827], 1e-3, 20000)
    b = energy_budget(tr)
    assert np.ptp(b.total) / b.total[0] < 1e-8
    assert b.work[-1] > 0


def test_energy_budget_undamped():
    tr = sample_exact(OscParams(1.3), [1.0], [0.5], 0.01, 1000)
    b = energy_budget(tr)
    assert np.all(b.work == 0)
    assert np.ptp(b.energy) / b.energy[0] < 1e-12


def test_path_integral_degenerate():
    assert reconstruct_r_by_path_integral(UNDER, [[1.0, 0.5]]) == 0.0
    assert reconstruct_r_by_path_integral(UNDER, [[1.0, 0.5], [1.0, 0.5]]) == 0.0


def test_path_integral_radial_undamped():
    got = reconstruct_r_by_path_integral(OscParams(1.0), [[1.0, 0.0], [2.0, 0.0]])
    assert got == pytest.approx(np.log(4.0), abs=1e-9)


@pytest.mark.parametrize("params,u0,v0", [
    (UNDER, [1.5], [-2.5827]), (OVER, [-1.75], [-3.99]), (CRIT, [-1.58], [-3.99])])
def test_path_integral_along_trajectory(params, u0, v0):
    tr = sample_exact(params, u0, v0, 1e-3, 1000)
    path = np.column_stack([tr.u[:, 0], tr.v[:, 0]])
    assert abs(reconstruct_r_by_path_integral(params, path)) < 1e-6


def _random_path(params, rng):
    if params is OVER:
        # the ++ region is convex in (u~, v~), hence in (u, v)
        ut, vt = rng.uniform(0.2, 2.0, (2, 4))
        u, v = inv.from_tilde(OVER, ut, vt)
    elif params is CRIT:
        # half plane w > 0
        u = rng.uniform(-2, 2, 4)
        v = rng.uniform(0.3, 3.0, 4) - params.gamma * u
    else:
        # half plane u > 0 avoids the origin and the branch cut
        u = rng.uniform(0.2, 3.0, 4)
        v = rng.uniform(-3, 3, 4)
    return np.column_stack([u, v])


@pytest.mark.parametrize("params", [UNDER, OVER, CRIT], ids=["under", "over", "crit"])
def test_path_integral_matches_closed_form(params, rng):
    for _ in range(100):
        path = _random_path(params, rng)
        got = reconstruct_r_by_path_integral(params, path)
        want = inv.closed_form_r(params, *path[-1]) - inv.closed_form_r(params, *path[0])
        assert got == pytest.approx(want, abs=1e-6)


def test_path_integral_boundary_errors():
    with pytest.raises(NaturalBoundaryError, match="segment 1"):
        reconstruct_r_by_path_integral(CRIT, [[0.0, 1.0], [0.0, 2.0], [0.0, -2.0]])
    u, v = inv.from_tilde(OVER, [1.0, 1.0], [1.0, -1.0])
    with pytest.raises(NaturalBoundaryError, match="segment 0"):
        reconstruct_r_by_path_integral(OVER, np.column_stack([u, v]))
    with pytest.raises(NaturalBoundaryError, match="origin"):
        reconstruct_r_by_path_integral(UNDER, [[-1.0, 0.0], [1.0, 0.0]])
