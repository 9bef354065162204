"""CSV serialization of fields, measurements and reports.

All floating-point output uses 17 significant digits so round trips are
bit-exact.
"""

import hashlib

import numpy as np

from .errors import ConfigError, DimensionError
from .model import LoadField, MeasurementSeries

_FMT = "%.17g"


def _fmt(value):
    return _FMT % value


def save_coefficient(path, nodes, values):
    """Coefficient field as `x,value` rows."""
    with open(path, "w") as fh:
        fh.write("x,value\n")
        for x, v in zip(nodes, values):
            fh.write(f"{_fmt(x)},{_fmt(v)}\n")


def load_coefficient(path, nodes):
    """Read a coefficient CSV and check it matches the grid nodes."""
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    if data.ndim == 1:
        data = data[None, :]
    if data.shape[0] != len(nodes):
        raise DimensionError(
            f"{path}: {data.shape[0]} samples, grid has {len(nodes)} nodes")
    if not np.allclose(data[:, 0], nodes, rtol=1e-12, atol=1e-12):
        raise DimensionError(f"{path}: node coordinates do not match grid")
    return data[:, 1].copy()


def save_load(path, load):
    """Load field as `x,t,value` rows, x-major."""
    g = load.grid
    with open(path, "w") as fh:
        fh.write("x,t,value\n")
        for i, x in enumerate(g.nodes):
            for j, t in enumerate(g.times):
                fh.write(f"{_fmt(x)},{_fmt(t)},{_fmt(load.values[i, j])}\n")


def load_load(path, grid):
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    expected = grid.n_nodes * grid.n_times
    if data.shape[0] != expected:
        raise DimensionError(f"{path}: {data.shape[0]} rows, "
                             f"grid expects {expected}")
    values = data[:, 2].reshape(grid.n_nodes, grid.n_times)
    return LoadField(values, grid)


def save_field(path, nodes, times, values, name="u"):
    """Generic full-field dump as `x,t,<name>` rows."""
    with open(path, "w") as fh:
        fh.write(f"x,t,{name}\n")
        for i, x in enumerate(nodes):
            for j, t in enumerate(times):
                fh.write(f"{_fmt(x)},{_fmt(t)},{_fmt(values[i, j])}\n")


def save_measurements(path, times, series):
    with open(path, "w") as fh:
        fh.write("t,theta0,thetaL\n")
        for t, a, b in zip(times, series.theta0, series.thetaL):
            fh.write(f"{_fmt(t)},{_fmt(a)},{_fmt(b)}\n")


def load_measurements(path, grid):
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    if data.shape[0] != grid.n_times:
        raise DimensionError(f"{path}: {data.shape[0]} rows, "
                             f"grid expects {grid.n_times}")
    return MeasurementSeries(theta0=data[:, 1].copy(),
                             thetaL=data[:, 2].copy())


def save_sidecar(path, entries):
    """Plain `key=value` metadata file."""
    with open(path, "w") as fh:
        for key, value in entries.items():
            fh.write(f"{key}={value}\n")


def load_sidecar(path):
    entries = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and "=" in line:
                key, value = line.split("=", 1)
                entries[key.strip()] = value.strip()
    return entries


def save_iteration_log(path, state):
    with open(path, "w") as fh:
        fh.write("iter,J,grad_norm,discrepancy\n")
        for i, (J, gn, d) in enumerate(zip(state.J_history,
                                           state.grad_history,
                                           state.discrepancy_history)):
            fh.write(f"{i},{_fmt(J)},{_fmt(gn)},{_fmt(d)}\n")


def save_check_report(path, rows):
    """Inequality report rows as `check,scenario,lhs,rhs,pass`."""
    with open(path, "w") as fh:
        fh.write("check,scenario,lhs,rhs,pass\n")
        for name, scenario, lhs, rhs, ok in rows:
            fh.write(f"{name},{scenario},{_fmt(lhs)},{_fmt(rhs)},"
                     f"{'true' if ok else 'false'}\n")


def parse_config(path):
    """Parse a line-oriented `key = value` config with `#` comments."""
    entries = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, value = line.split("=", 1)
                entries[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return entries


def config_hash(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()
