"""Randomized verification harness for every theorem-backed inequality.

Each check compares a discretely evaluated left-hand norm against its
closed-form bound, with a small slack for quadrature error.  Violations
are report content, not errors; all inequalities are theorems, so any
violation indicates an implementation bug.
"""

from dataclasses import dataclass

import numpy as np

from .adjoint import check_adjoint_estimates, solve_adjoint
from .assembly import assemble
from .constants import compute_constants
from .forward import check_apriori_estimates, solve_forward
from .model import LoadField, l2_norm_spacetime, series_l2_norm
from .objective import (compute_gradient, evaluate_objective,
                        spacetime_inner, time_inner)

DEFAULT_SLACK = 0.05


@dataclass(frozen=True)
class CheckRow:
    check: str
    scenario: str
    lhs: float
    rhs: float
    ok: bool

    def as_tuple(self):
        return (self.check, self.scenario, self.lhs, self.rhs, self.ok)


@dataclass(frozen=True)
class SuiteReport:
    rows: tuple

    @property
    def violations(self):
        return [r for r in self.rows if not r.ok]

    @property
    def ok(self):
        return not self.violations

    def summary(self):
        return (f"{len(self.rows)} checks, "
                f"{len(self.violations)} violations")


def random_load(grid, rng, n_modes=4, scale=1.0):
    """Smooth random admissible load built from low space-time modes."""
    x = grid.nodes[:, None]
    t = grid.times[None, :]
    values = np.zeros((grid.n_nodes, grid.n_times))
    for k in range(1, n_modes + 1):
        a, b = rng.normal(size=2)
        values += (np.sin(k * np.pi * x / grid.length)
                   * (a * np.sin(k * np.pi * t / grid.final_time)
                      + b * np.cos((k - 1) * np.pi * t / grid.final_time)))
    return LoadField(scale * values, grid)


def random_smooth_series(grid, rng, n_modes=3):
    """Random smooth time series with its analytic derivative, vanishing
    at t=0 as the adjoint trace argument requires."""
    t = grid.times
    T = grid.final_time
    y = np.zeros_like(t)
    dy = np.zeros_like(t)
    for j in range(1, n_modes + 1):
        a = rng.normal()
        w = j * np.pi / T
        y += a * np.sin(w * t)
        dy += a * w * np.cos(w * t)
    return y, dy


def verify_inequality_suite(grid, coeffs, n_scenarios=20, seed=0,
                            C_F=None, slack=DEFAULT_SLACK,
                            ct_variant="literal"):
    """Run every inequality check over randomized admissible inputs.

    Returns a SuiteReport; an empty scenario set yields an empty report.
    """
    rng = np.random.default_rng(seed)
    system = assemble(grid, coeffs)
    rows = []
    for s in range(n_scenarios):
        tag = f"s{s:02d}"
        load = random_load(grid, rng)
        F_norm_sq = l2_norm_spacetime(load) ** 2
        CF = C_F if C_F is not None else max(1.0, 10.0 * F_norm_sq)
        traj = solve_forward(coeffs, load, grid, system=system)

        # a-priori bounds: six volume norms and four boundary traces
        for chk in check_apriori_estimates(traj, coeffs, load, slack=slack):
            rows.append(CheckRow("apriori_" + chk.name, tag, chk.lhs,
                                 chk.rhs, chk.passes(slack)))

        # Rolle-type inequality, closed forms on a random sine sum
        amps = rng.normal(size=3)
        l = grid.length
        lhs_p = sum(a ** 2 * (k * np.pi / l) ** 2 * l / 2
                    for k, a in enumerate(amps, start=1))
        rhs_p = (l ** 2 / 2) * sum(a ** 2 * (k * np.pi / l) ** 4 * l / 2
                                   for k, a in enumerate(amps, start=1))
        rows.append(CheckRow("poincare", tag, lhs_p, rhs_p,
                             lhs_p <= rhs_p * (1 + slack)))

        # Lipschitz continuity of the input-output maps
        consts = compute_constants(grid.length, grid.final_time,
                                   coeffs.bounds, C_F=CF,
                                   ct_variant=ct_variant)
        load2 = random_load(grid, rng)
        traj2 = solve_forward(coeffs, load2, grid, system=system)
        dF = l2_norm_spacetime(load - load2)
        for name, o1, o2 in (("io_lipschitz_theta0", traj.outputs.theta0,
                              traj2.outputs.theta0),
                             ("io_lipschitz_thetaL", traj.outputs.thetaL,
                              traj2.outputs.thetaL)):
            lhs = series_l2_norm(o1 - o2, grid.dt)
            rows.append(CheckRow(name, tag, lhs, consts.C_L * dF,
                                 lhs <= consts.C_L * dF * (1 + slack)))

        # Lipschitz continuity of the misfit functional
        truth = random_load(grid, rng)
        meas = solve_forward(coeffs, truth, grid, system=system).outputs
        th0n = series_l2_norm(meas.theta0, grid.dt)
        thLn = series_l2_norm(meas.thetaL, grid.dt)
        consts_J = compute_constants(grid.length, grid.final_time,
                                     coeffs.bounds, C_F=CF,
                                     theta0_norm=th0n, thetaL_norm=thLn,
                                     ct_variant=ct_variant)
        J1 = evaluate_objective(load, meas, coeffs, grid, system=system).J
        J2 = evaluate_objective(load2, meas, coeffs, grid, system=system).J
        rows.append(CheckRow("misfit_lipschitz", tag, abs(J1 - J2),
                             consts_J.C_J * dF,
                             abs(J1 - J2) <= consts_J.C_J * dF * (1 + slack)))

        # adjoint solution estimates
        p, dp = random_smooth_series(grid, rng)
        q, dq = random_smooth_series(grid, rng)
        adj = solve_adjoint(coeffs, p, q, grid, system=system, dp=dp, dq=dq)
        for chk in check_adjoint_estimates(adj, coeffs, slack=slack,
                                           ct_variant=ct_variant):
            rows.append(CheckRow("adjoint_" + chk.name, tag, chk.lhs,
                                 chk.rhs, chk.passes(slack)))

        # Lipschitz continuity of the gradient
        g1, _ = compute_gradient(load, meas, coeffs, grid, system=system)
        g2, _ = compute_gradient(load2, meas, coeffs, grid, system=system)
        diff = g1.values - g2.values
        lhs_g = np.sqrt(spacetime_inner(diff, diff, grid))
        rows.append(CheckRow("gradient_lipschitz", tag, lhs_g,
                             consts.L_G * dF,
                             lhs_g <= consts.L_G * dF * (1 + slack)))
    return SuiteReport(tuple(rows))


def duality_checks(grid, coeffs, n_triples=5, seed=0, tol=1e-3,
                   adjoint_sign=1.0):
    """Duality-identity residuals for random (dF, p, q) triples.

    `adjoint_sign` = -1 corrupts the adjoint data sign (negative control).
    """
    rng = np.random.default_rng(seed)
    system = assemble(grid, coeffs)
    rows = []
    for s in range(n_triples):
        dF = random_load(grid, rng)
        p, _ = random_smooth_series(grid, rng)
        q, _ = random_smooth_series(grid, rng)
        traj = solve_forward(coeffs, dF, grid, system=system)
        adj = solve_adjoint(coeffs, adjoint_sign * p, adjoint_sign * q,
                            grid, system=system)
        lhs = (time_inner(p, traj.outputs.theta0, grid)
               + time_inner(q, traj.outputs.thetaL, grid))
        rhs = spacetime_inner(dF.values, adj.full_values(), grid)
        denom = abs(rhs) + 1e-14
        residual = abs(lhs - rhs) / denom
        rows.append(CheckRow("duality", f"s{s:02d}", residual, tol,
                             residual <= tol))
    return SuiteReport(tuple(rows))


def gradient_fd_checks(grid, coeffs, n_directions=5, seed=0, tol=5e-3):
    """Adjoint gradient against central finite differences of the misfit."""
    rng = np.random.default_rng(seed)
    system = assemble(grid, coeffs)
    truth = random_load(grid, rng)
    meas = solve_forward(coeffs, truth, grid, system=system).outputs
    F = random_load(grid, rng)
    grad, _ = compute_gradient(F, meas, coeffs, grid, system=system)
    F_norm = l2_norm_spacetime(F)
    rows = []
    for s in range(n_directions):
        D = random_load(grid, rng)
        D_norm = l2_norm_spacetime(D)
        eps = 1e-4 * (F_norm / D_norm if F_norm > 0 else 1.0)
        Jp = evaluate_objective(LoadField(F.values + eps * D.values, grid),
                                meas, coeffs, grid, system=system).J
        Jm = evaluate_objective(LoadField(F.values - eps * D.values, grid),
                                meas, coeffs, grid, system=system).J
        fd = (Jp - Jm) / (2 * eps)
        an = spacetime_inner(grad.values, D.values, grid)
        rel = abs(fd - an) / max(abs(fd), 1e-14)
        rows.append(CheckRow("gradient_fd", f"s{s:02d}", rel, tol,
                             rel <= tol))
    return SuiteReport(tuple(rows))
