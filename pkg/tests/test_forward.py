import numpy as np
import pytest

from beamload.errors import DivergenceError
from beamload.forward import (check_apriori_estimates, energy_residual,
                              newmark_integrate, solve_forward)
from beamload.measurements import manufactured_case
from beamload.model import CoefficientSet, LoadField, SpaceTimeGrid


def test_newmark_scalar_oscillator_oracle():
    # M u'' + K u = 1 from rest with M = K = 1: u(t) = 1 - cos t
    T, n = 2 * np.pi, 2000
    dt = T / n
    forces = np.ones((n + 1, 1))
    u, v, a = newmark_integrate(np.eye(1), np.zeros((1, 1)), np.eye(1),
                                forces, dt)
    t = np.linspace(0, T, n + 1)
    assert np.max(np.abs(u[0] - (1 - np.cos(t)))) < 1e-4
    assert np.max(np.abs(v[0] - np.sin(t))) < 1e-4
    assert u[0, 0] == 0.0 and v[0, 0] == 0.0


def test_newmark_rejects_non_finite_input():
    forces = np.ones((10, 1))
    forces[3, 0] = np.nan
    with pytest.raises(DivergenceError):
        newmark_integrate(np.eye(1), np.zeros((1, 1)), np.eye(1),
                          forces, 0.1)


def mfd_setup(n_el, n_st):
    g = SpaceTimeGrid(length=1.0, final_time=1.0, n_elements=n_el,
                      n_steps=n_st)
    c = CoefficientSet.constant(g, rho_A=1.0, mu=0.1, T_r=0.2, r=1.0,
                                kappa=0.05)
    return g, c


def mfd_error(n_el, n_st):
    g, c = mfd_setup(n_el, n_st)
    load, exact_u, _ = manufactured_case(g, c)
    traj = solve_forward(c, load, g)
    w = traj.full_deflection()
    return float(np.max(np.abs(w - exact_u)) / np.max(np.abs(exact_u)))


def test_manufactured_solution_accuracy_and_convergence():
    coarse = mfd_error(16, 128)
    fine = mfd_error(32, 256)
    assert fine < 2e-3
    assert coarse / fine >= 3.5    # second order in space-time


def test_manufactured_outputs_match_end_slopes():
    g, c = mfd_setup(32, 256)
    load, _, exact = manufactured_case(g, c)
    traj = solve_forward(c, load, g)
    scale = np.max(np.abs(exact.theta0))
    assert np.max(np.abs(traj.outputs.theta0 - exact.theta0)) / scale < 5e-3
    assert np.max(np.abs(traj.outputs.thetaL - exact.thetaL)) / scale < 5e-3


def test_zero_load_gives_zero_trajectory(small_grid, small_coeffs):
    traj = solve_forward(small_coeffs, LoadField.zero(small_grid),
                         small_grid)
    assert np.all(traj.u == 0.0)
    assert np.all(traj.outputs.theta0 == 0.0)


def test_forward_solver_is_linear(small_grid, small_coeffs):
    rng = np.random.default_rng(7)
    shape = (small_grid.n_nodes, small_grid.n_times)
    F1 = LoadField(rng.normal(size=shape), small_grid)
    F2 = LoadField(rng.normal(size=shape), small_grid)
    u1 = solve_forward(small_coeffs, F1, small_grid).u
    u2 = solve_forward(small_coeffs, F2, small_grid).u
    u12 = solve_forward(small_coeffs, F1 + F2, small_grid).u
    scale = np.max(np.abs(u12))
    assert np.max(np.abs(u1 + u2 - u12)) / scale < 1e-10


def test_energy_identity_residual_shrinks_under_refinement():
    residuals = []
    for n_el, n_st in ((16, 128), (32, 256)):
        g, c = mfd_setup(n_el, n_st)
        load, _, _ = manufactured_case(g, c)
        traj = solve_forward(c, load, g)
        residuals.append(float(np.max(energy_residual(traj, c, load))))
    assert residuals[0] < 1e-3
    assert residuals[1] < residuals[0] / 2


def test_apriori_estimates_hold(small_grid, small_coeffs):
    x = small_grid.nodes[:, None]
    t = small_grid.times[None, :]
    load = LoadField(np.sin(np.pi * x) * np.sin(np.pi * t)
                     + 0.3 * np.sin(2 * np.pi * x) * t, small_grid)
    traj = solve_forward(small_coeffs, load, small_grid)
    checks = check_apriori_estimates(traj, small_coeffs, load)
    assert len(checks) == 10
    failed = [c.name for c in checks if not c.passes()]
    assert failed == []


def test_free_vibration_dissipates_energy():
    g = SpaceTimeGrid(length=1.0, final_time=2.0, n_elements=16,
                      n_steps=400)
    c = CoefficientSet.constant(g, rho_A=1.0, mu=0.2, T_r=0.0, r=1.0,
                                kappa=0.02)
    x = g.nodes[:, None]
    t = g.times[None, :]
    gate = np.where(t < 1.0, np.sin(np.pi * t) ** 2, 0.0)
    load = LoadField(np.sin(np.pi * x) * gate, g)
    traj = solve_forward(c, load, g)
    sys_ = traj.system
    stored = (np.einsum("ik,ij,jk->k", traj.v, sys_.M, traj.v)
              + np.einsum("ik,ij,jk->k", traj.u, sys_.K_r, traj.u)
              + np.einsum("ik,ij,jk->k", traj.u, sys_.K_T, traj.u))
    free = stored[t[0] > 1.0]
    assert np.all(np.diff(free) <= 1e-12 * stored.max())
