"""Input-output operators, misfit functional and its adjoint gradient."""

from dataclasses import dataclass

import numpy as np

from .adjoint import solve_adjoint
from .forward import EPS_FLOOR, solve_forward
from .model import trapezoid_weights


def spacetime_inner(a, b, grid):
    """Trapezoidal L2(Omega_T) inner product of nodal (node, time) arrays."""
    wx = trapezoid_weights(grid.n_nodes, grid.h)
    wt = trapezoid_weights(grid.n_times, grid.dt)
    return float(wx @ (a * b) @ wt)


def time_inner(a, b, grid):
    wt = trapezoid_weights(grid.n_times, grid.dt)
    return float(wt @ (np.asarray(a) * np.asarray(b)))


@dataclass(frozen=True)
class ObjectiveEvaluation:
    """Misfit value with the residual series feeding the adjoint."""

    J: float
    p: np.ndarray          # u_x(0,.;F) - theta_0
    q: np.ndarray          # u_x(l,.;F) - theta_l
    misfit0: float
    misfitL: float
    trajectory: object


@dataclass(frozen=True)
class GradientField:
    """J'(F) = phi(x, t; F) sampled on the load grid."""

    values: np.ndarray
    grid: object

    @property
    def norm(self):
        return np.sqrt(spacetime_inner(self.values, self.values, self.grid))


def apply_io_operators(load, coeffs, grid, system=None):
    """Evaluate the maps F -> u_x(0, .; F) and F -> u_x(l, .; F)."""
    traj = solve_forward(coeffs, load, grid, system=system)
    return traj.outputs.theta0, traj.outputs.thetaL


def evaluate_objective(load, measurements, coeffs, grid, system=None):
    """Tikhonov misfit J(F) with trapezoidal time quadrature."""
    if measurements.n_times != grid.n_times:
        raise ValueError("measurements do not match the time grid")
    traj = solve_forward(coeffs, load, grid, system=system)
    p = traj.outputs.theta0 - measurements.theta0
    q = traj.outputs.thetaL - measurements.thetaL
    m0 = 0.5 * time_inner(p, p, grid)
    mL = 0.5 * time_inner(q, q, grid)
    return ObjectiveEvaluation(J=m0 + mL, p=p, q=q, misfit0=m0, misfitL=mL,
                               trajectory=traj)


def compute_gradient(load, measurements, coeffs, grid, system=None,
                     evaluation=None):
    """Adjoint gradient of the misfit: one forward and one backward solve.

    Raw (unsmoothed) noisy measurements are accepted but the gradient may
    be polluted; smooth them to H1 first.
    """
    if evaluation is None:
        evaluation = evaluate_objective(load, measurements, coeffs, grid,
                                        system=system)
    if system is None:
        system = evaluation.trajectory.system
    adj = solve_adjoint(coeffs, evaluation.p, evaluation.q, grid,
                        system=system)
    return GradientField(values=adj.full_values(), grid=grid), evaluation


def duality_residual(delta_load, coeffs, grid, p, q, system=None):
    """Relative mismatch of the forward/backward duality identity.

    Compares <p, du_x(0,.)> + <q, du_x(l,.)> against <dF, phi> where du
    solves the forward problem with load dF and phi the backward problem
    with moment data (p, q).
    """
    traj = solve_forward(coeffs, delta_load, grid, system=system)
    adj = solve_adjoint(coeffs, p, q, grid, system=traj.system)
    lhs = (time_inner(p, traj.outputs.theta0, grid)
           + time_inner(q, traj.outputs.thetaL, grid))
    rhs = spacetime_inner(delta_load.values, adj.full_values(), grid)
    return abs(lhs - rhs) / (abs(rhs) + EPS_FLOOR)
