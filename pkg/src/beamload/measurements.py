"""Synthetic measurement generation, noise injection and H1 smoothing.

The adjoint problem needs differentiable moment data, so raw (noisy)
series are fitted with a cubic smoothing spline before inversion.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import make_smoothing_spline

from .errors import ConfigError
from .forward import solve_forward
from .model import LoadField, MeasurementSeries, series_l2_norm


@dataclass(frozen=True)
class NoiseSpec:
    """Zero-mean Gaussian perturbation, scaled to a relative L2 level."""

    delta_rel: float
    seed: int = 0

    def __post_init__(self):
        if self.delta_rel < 0:
            raise ValueError("delta_rel must be nonnegative")


def add_noise(series, spec, dt):
    """Perturb each channel so its realized L2 perturbation norm is
    exactly delta_rel * ||channel||.

    The realized absolute perturbation (both channels combined) is stored
    on the returned series for discrepancy-based stopping.
    """
    if spec.delta_rel == 0.0:
        return series
    rng = np.random.default_rng(spec.seed)
    deltas = []
    noisy = []
    for clean in (series.theta0, series.thetaL):
        e = rng.standard_normal(len(clean))
        e_norm = series_l2_norm(e, dt)
        target = spec.delta_rel * series_l2_norm(clean, dt)
        if e_norm > 0:
            e *= target / e_norm
        deltas.append(target)
        noisy.append(clean + e)
    realized = float(np.hypot(*deltas))
    return MeasurementSeries(theta0=noisy[0], thetaL=noisy[1], tag="raw",
                             noise_delta=realized)


def _fit_channel(times, values, lam):
    spline = make_smoothing_spline(times, values, lam=float(lam))
    return spline(times), spline.derivative()(times)


def smooth_to_h1(series, times, lam=None):
    """Cubic smoothing-spline fit per channel, tagged H1-smoothed.

    `lam` is the curvature penalty weight; None picks it per channel by a
    discrepancy criterion when a recorded noise level is available, and
    falls back to near-interpolation otherwise.  The spline's analytic
    first derivative is sampled alongside.
    """
    if lam is not None and lam < 0:
        raise ValueError("smoothing parameter must be nonnegative")
    dt = times[1] - times[0]
    smoothed, derivs = [], []
    for i, values in enumerate((series.theta0, series.thetaL)):
        if lam is None:
            target = None
            if series.noise_delta is not None:
                # per-channel share of the recorded absolute noise
                target = series.noise_delta / np.sqrt(2.0)
            lam_i = _pick_lambda(times, values, target)
        else:
            lam_i = lam
        y, dy = _fit_channel(times, values, lam_i)
        smoothed.append(y)
        derivs.append(dy)
    return MeasurementSeries(theta0=smoothed[0], thetaL=smoothed[1],
                             tag="h1", dtheta0=derivs[0], dthetaL=derivs[1],
                             noise_delta=series.noise_delta)


def _pick_lambda(times, values, target):
    """Bisect log-lambda until the smoothing residual matches the noise
    level (Morozov on the smoothing misfit)."""
    if target is None or target == 0.0:
        return 0.0
    dt = times[1] - times[0]

    def residual(lam):
        y, _ = _fit_channel(times, values, lam)
        return series_l2_norm(y - values, dt)

    lo, hi = 1e-14, 1e6
    if residual(lo) > target:
        return lo
    if residual(hi) < target:
        return hi
    for _ in range(60):
        mid = np.sqrt(lo * hi)
        if residual(mid) < target:
            lo = mid
        else:
            hi = mid
    return np.sqrt(lo * hi)


@dataclass(frozen=True)
class MovingGaussian:
    """Gaussian load profile of amplitude A travelling at speed v.

    F(x, t) = A * exp(-(x - v t)^2 / (2 sigma^2)).
    """

    amplitude: float
    speed: float
    sigma: float

    def field(self, grid):
        x = grid.nodes[:, None]
        t = grid.times[None, :]
        z = (x - self.speed * t) / self.sigma
        return LoadField(self.amplitude * np.exp(-0.5 * z * z), grid)

    def jacobian(self, grid):
        """Analytic partial derivatives of the field wrt (A, v, sigma)."""
        x = grid.nodes[:, None]
        t = grid.times[None, :]
        d = x - self.speed * t
        g = np.exp(-0.5 * (d / self.sigma) ** 2)
        dA = g
        dv = self.amplitude * g * d * t / self.sigma ** 2
        dsig = self.amplitude * g * d ** 2 / self.sigma ** 3
        return [LoadField(dA, grid), LoadField(dv, grid),
                LoadField(dsig, grid)]

    @property
    def parameters(self):
        return np.array([self.amplitude, self.speed, self.sigma])

    @staticmethod
    def from_parameters(params):
        return MovingGaussian(*map(float, params))


@dataclass(frozen=True)
class ModalLoad:
    """Separable low-mode load sum_k c_k sin(k pi x / l) g_k(t) with
    g_k(t) = sin(k pi t / T)."""

    coefficients: tuple

    def field(self, grid):
        values = np.zeros((grid.n_nodes, grid.n_times))
        for k, c in enumerate(self.coefficients, start=1):
            values += c * self._mode(grid, k)
        return LoadField(values, grid)

    def jacobian(self, grid):
        return [LoadField(self._mode(grid, k), grid)
                for k in range(1, len(self.coefficients) + 1)]

    @staticmethod
    def _mode(grid, k):
        x = grid.nodes[:, None]
        t = grid.times[None, :]
        return (np.sin(k * np.pi * x / grid.length)
                * np.sin(k * np.pi * t / grid.final_time))

    @property
    def parameters(self):
        return np.array(self.coefficients, dtype=float)

    @staticmethod
    def from_parameters(params):
        return ModalLoad(tuple(float(c) for c in params))


def manufactured_case(grid, coeffs):
    """Constant-coefficient manufactured solution u = t^2 sin(pi x / l).

    Substituting u into the beam equation gives the exact load in closed
    form, so the triple (load, exact deflection, exact end slopes) serves
    as a solver oracle.  Coefficient fields must be constant; the nodal
    means are used.
    """
    l, T = grid.length, grid.final_time
    k = np.pi / l
    x = grid.nodes[:, None]
    t = grid.times[None, :]
    rho = float(np.mean(coeffs.rho_A))
    mu = float(np.mean(coeffs.mu))
    Tr = float(np.mean(coeffs.T_r))
    r = float(np.mean(coeffs.r))
    kap = float(np.mean(coeffs.kappa))
    shape = np.sin(k * x)
    forcing = (2.0 * rho + 2.0 * mu * t + 2.0 * kap * k ** 4 * t
               + (Tr * k ** 2 + r * k ** 4) * t ** 2)
    load = LoadField(forcing * shape, grid)
    exact_u = t ** 2 * shape
    tt = grid.times
    exact = MeasurementSeries(theta0=k * tt ** 2,
                              thetaL=k * np.cos(k * l) * tt ** 2)
    return load, exact_u, exact


def generate_scenario(kind, params, grid, coeffs):
    """Build a truth load of the given family and its clean measurements.

    kind is "moving_gaussian" (params: amplitude, speed, sigma) or
    "modal" (params: mode coefficients).  Returns (F_true, measurements).
    A moving Gaussian whose centre exits the domain is simply truncated
    at the boundary (the profile decays there anyway).
    """
    if kind == "moving_gaussian":
        family = MovingGaussian(params["amplitude"], params["speed"],
                                params["sigma"])
    elif kind == "modal":
        family = ModalLoad(tuple(params["coefficients"]))
    else:
        raise ConfigError(f"unknown scenario kind: {kind}")
    load = family.field(grid)
    traj = solve_forward(coeffs, load, grid)
    return load, traj.outputs
