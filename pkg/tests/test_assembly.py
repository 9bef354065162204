import numpy as np
import pytest
from scipy.linalg import eigh

from beamload.assembly import (assemble, assemble_unconstrained,
                               hermite_shapes, natural_bc_load)
from beamload.errors import ValidationError
from beamload.model import CoefficientBounds, CoefficientSet, SpaceTimeGrid


def grid_of(n_elements, length=1.0):
    return SpaceTimeGrid(length=length, final_time=1.0,
                         n_elements=n_elements, n_steps=8)


# classic closed-form element matrices of the cubic Hermite beam element
def bending_element(r, h):
    return (r / h ** 3) * np.array([
        [12, 6 * h, -12, 6 * h],
        [6 * h, 4 * h ** 2, -6 * h, 2 * h ** 2],
        [-12, -6 * h, 12, -6 * h],
        [6 * h, 2 * h ** 2, -6 * h, 4 * h ** 2]], dtype=float)


def tension_element(T, h):
    return (T / (30 * h)) * np.array([
        [36, 3 * h, -36, 3 * h],
        [3 * h, 4 * h ** 2, -3 * h, -h ** 2],
        [-36, -3 * h, 36, -3 * h],
        [3 * h, -h ** 2, -3 * h, 4 * h ** 2]], dtype=float)


def mass_element(rho, h):
    return (rho * h / 420) * np.array([
        [156, 22 * h, 54, -13 * h],
        [22 * h, 4 * h ** 2, 13 * h, -3 * h ** 2],
        [54, 13 * h, 156, -22 * h],
        [-13 * h, -3 * h ** 2, -22 * h, 4 * h ** 2]], dtype=float)


def test_hermite_shapes_interpolation_conditions():
    for h in (0.25, 1.0):
        N0, dN0, _ = hermite_shapes(np.array([0.0]), h)
        N1, dN1, _ = hermite_shapes(np.array([1.0]), h)
        assert np.allclose(N0[:, 0], [1, 0, 0, 0])
        assert np.allclose(N1[:, 0], [0, 0, 1, 0])
        assert np.allclose(dN0[:, 0], [0, 1, 0, 0])
        assert np.allclose(dN1[:, 0], [0, 0, 0, 1])


def test_single_element_matrices_match_closed_forms():
    g = grid_of(4, length=2.0)
    h = g.h
    rho, Tr, r = 1.3, 0.7, 2.1
    coeffs = CoefficientSet.constant(g, rho_A=rho, mu=0.0, T_r=Tr, r=r,
                                     kappa=0.01)
    mats, _ = assemble_unconstrained(g, coeffs)
    # rows of the first two DOFs receive contributions from the first
    # element only, so they expose the raw element matrix
    rows = slice(0, 2)
    cols = slice(0, 4)
    # bending and tension integrands are within the 3-point Gauss degree
    assert np.allclose(mats["K_r"][rows, cols],
                       bending_element(r, h)[rows, :], rtol=1e-13)
    assert mats["K_r"][0, 0] == pytest.approx(12 * r / h ** 3, rel=1e-13)
    assert np.allclose(mats["K_T"][rows, cols],
                       tension_element(Tr, h)[rows, :], rtol=1e-13)
    # the mass integrand is degree 6, one above the rule's exactness
    assert np.allclose(mats["M"][rows, cols], mass_element(rho, h)[rows, :],
                       rtol=2e-3, atol=2e-3 * rho * h)


def test_mass_partition_recovers_total_mass():
    g = grid_of(16, length=2.0)
    rho = 1.7
    coeffs = CoefficientSet.constant(g, rho_A=rho)
    mats, load_map = assemble_unconstrained(g, coeffs)
    # rigid translation: unit deflection, zero rotation at every node
    ones = np.zeros(2 * g.n_nodes)
    ones[0::2] = 1.0
    assert ones @ mats["M"] @ ones == pytest.approx(rho * g.length,
                                                    rel=1e-12)
    # consistent resultant of a uniform unit load is the beam length
    F = np.ones(g.n_nodes)
    assert ones @ (load_map @ F) == pytest.approx(g.length, rel=1e-12)


def test_simply_supported_eigenvalues():
    g = grid_of(64)
    coeffs = CoefficientSet.constant(g, rho_A=1.0, r=1.0, T_r=0.0)
    sys_ = assemble(g, coeffs)
    lam = eigh(sys_.K_r, sys_.M, eigvals_only=True)
    exact = np.array([(k * np.pi) ** 4 for k in range(1, 6)])
    assert np.allclose(np.sort(lam)[:5], exact, rtol=1e-3)


def test_symmetry_definiteness_and_bandwidth():
    g = grid_of(16)
    coeffs = CoefficientSet.constant(g, rho_A=1.0, mu=0.3, T_r=0.4,
                                     r=1.2, kappa=0.02)
    sys_ = assemble(g, coeffs)
    for A in (sys_.M, sys_.C_ext, sys_.K_T, sys_.K_r, sys_.K_kappa):
        assert np.allclose(A, A.T, atol=1e-14)
    assert np.all(np.linalg.eigvalsh(sys_.M) > 0)
    assert np.all(np.linalg.eigvalsh(sys_.K_r) > 0)
    # element-local coupling only: full-numbering bandwidth three
    mats, _ = assemble_unconstrained(g, coeffs)
    i, j = np.nonzero(mats["K_r"])
    assert np.max(np.abs(i - j)) <= 3


def test_assembly_is_linear_in_each_coefficient():
    g = grid_of(8)
    c1 = CoefficientSet.constant(g, r=1.0)
    c2 = CoefficientSet.constant(g, r=2.0)
    s1, s2 = assemble(g, c1), assemble(g, c2)
    assert np.allclose(2.0 * s1.K_r, s2.K_r, rtol=1e-14)
    assert np.allclose(s1.M, s2.M, rtol=1e-14)


def test_assemble_rejects_inadmissible_coefficients():
    g = grid_of(8)
    bounds = CoefficientBounds(1, 1, 0, 0, 0, 0, 2.0, 3.0, 0.01, 0.01)
    coeffs = CoefficientSet.constant(g, r=1.0, bounds=bounds)
    with pytest.raises(ValidationError):
        assemble(g, coeffs)


def test_output_dof_indexing():
    g = grid_of(8)
    sys_ = assemble(g, CoefficientSet.constant(g))
    # end deflections eliminated: rotation at node 0 is the first reduced
    # DOF, rotation at the last node is the final one
    assert sys_.theta0_dof == 0
    assert sys_.thetaL_dof == sys_.n_dofs - 1
    assert sys_.n_dofs == 2 * g.n_nodes - 2
    assert len(sys_.deflection_dofs) == g.n_nodes - 2


def test_natural_bc_load_placement():
    g = grid_of(8)
    p = np.linspace(0, 1, g.n_times)
    q = np.linspace(0, -2, g.n_times)
    out = natural_bc_load(p, q, g)
    assert out.shape == (g.n_times, 2 * g.n_nodes - 2)
    assert np.array_equal(out[:, 0], p)
    assert np.array_equal(out[:, -1], q)
    assert np.all(out[:, 1:-1] == 0.0)
    with pytest.raises(ValueError):
        natural_bc_load(p[:-1], q, g)
