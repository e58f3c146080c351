# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import numpy as np
import pytest

from nlwaves import KernelModel, TwoSidedExponential, WaveProblem, Nonlinearity, WeightedGrid, KernelBasisE0, \
                    CutoffNonlinearity, build_bordered, build_center_manifold, fixed_point_Phi, \
                    reduced_vector_field, linearization, reduced_flow_check, orbit_period, polar_sample, \
                    branch_field, branch_coordinates, original_coordinates, direct_newton, reduced_data, \
                    BorderedSingular, InversionFailed, NotContracting
from nlwaves.manifold import smooth_indicator, smooth_indicator_derivative


exp1 = KernelModel.scalar(TwoSidedExponential(1.))
quadratic_problem = WaveProblem(2., exp1, Nonlinearity.quadratic())
AMPLITUDE = 0.02


@pytest.fixture(scope='module')
def setup():
    return build_center_manifold(quadratic_problem, periods=8, N=1024, epsilon=0.5)


@pytest.fixture(scope='module')
def wave(setup):
    return direct_newton(quadratic_problem, AMPLITUDE, rd=setup.reduced)


@pytest.fixture(scope='module')
def matched(setup, wave):
    omega, coeffs = wave
    v0 = branch_coordinates(setup.basis, omega, coeffs)
    return v0, fixed_point_Phi(setup.bordered, setup.cutoff, v0)


# Grid and projection
# ===================

def test_weighted_grid():
    grid = WeightedGrid.for_frequency(1., periods=8, N=1024)
    assert np.isclose(grid.L, 16*np.pi)
    assert np.isclose(grid.norm(np.ones(1024)), np.exp(-0.2), rtol=1e-3)
    assert np.isclose(grid.quadrature.sum(), 2*grid.L)
    with pytest.raises(ValueError, match="at least 8 periods"):
        WeightedGrid.for_frequency(1., periods=4)
    with pytest.raises(ValueError, match="must be positive"):
        WeightedGrid(10., 100, eta=0.)


def test_projection_laws(setup):
    basis = setup.basis
    assert basis.projection_error() < 1e-12
    field = np.random.default_rng(3).standard_normal((setup.grid.N, 1))
    assert basis.projection_error(field) < 1e-12
    assert np.allclose(basis.coordinates(basis.embed([0.3, -0.2])), [0.3, -0.2], atol=1e-12)


def test_kernel_fields_solve_linear_part(setup):
    assert setup.bordered.kernel_residual() < 1e-6


@pytest.mark.parametrize("x", [0., 0.7, np.pi])
def test_shifted_coordinates(setup, x):
    basis = setup.basis
    e0 = basis.fields[..., 0]
    assert np.allclose(basis.shifted_coordinates(e0, x), [np.cos(x), -np.sin(x)], atol=1e-8)
    if x == 0:
        assert np.allclose(basis.shifted_coordinates(e0, x), basis.coordinates(e0), atol=1e-14)


def test_rotation_generator(setup):
    R = KernelBasisE0.rotation(0.3)
    assert np.allclose(R @ R.T, np.eye(2))
    assert np.allclose(KernelBasisE0.rotation(0.1) @ KernelBasisE0.rotation(0.2), R)


# Cutoff
# ======

def test_smooth_indicator():
    assert np.allclose(smooth_indicator([0., 0.5, 1., 1.5, 2., 3.]), [1., 1., 1., 0.5, 0., 0.])


@pytest.mark.parametrize('s', [1 - 1e-3, 1 + 1e-3, 2 - 1e-3, 2 + 1e-3])
def test_smooth_indicator_second_derivative(s):
    step = 1e-4
    second = (smooth_indicator(s + step) - 2*smooth_indicator(s) + smooth_indicator(s - step)) / step**2
    assert abs(second) < 1e-2
    assert abs(smooth_indicator_derivative(s)) < 1e-6


def test_cutoff_nonlinearity():
    _, g = quadratic_problem.v_form()
    g_eps = CutoffNonlinearity(g, 0.1)
    v = np.array([[0.05], [-0.08], [0.15], [0.3]])
    out = g_eps(v)
    assert np.array_equal(out[:2], g(v[:2]))
    assert np.abs(out[3]).max() == 0
    assert 0 < out[2, 0] < g(v[2:3])[0, 0]
    step = 1e-7
    fd = (g_eps(v + step) - g_eps(v - step)) / (2*step)
    assert np.allclose(g_eps.jacobian(v)[:, 0, 0], fd[:, 0], atol=1e-6)
    with pytest.raises(ValueError, match="must be positive"):
        CutoffNonlinearity(g, 0.)


def test_cutoff_vector_jacobian():
    A = np.array([[2., 0.3], [0., 0.5]])
    p = WaveProblem(A, KernelModel.scalar(TwoSidedExponential(1.), np.eye(2)), Nonlinearity.quadratic(1., 2))
    _, g = p.v_form()
    g_eps = CutoffNonlinearity(g, 0.1)
    v = np.array([0.12, -0.07])
    jac = g_eps.jacobian(v)
    for k in range(2):
        dv = np.zeros(2)
        dv[k] = 1e-7
        assert np.allclose(jac[:, k], (g_eps(v + dv) - g_eps(v - dv)) / 2e-7, atol=1e-6)


# Bordered system
# ===============

@pytest.fixture(scope='module')
def fine(setup):
    grid = WeightedGrid.for_frequency(setup.reduced.omega_star, periods=8, N=2048)
    return build_bordered(quadratic_problem, grid, KernelBasisE0.from_reduced(grid, setup.reduced))


def test_bordered_solve(setup):
    bs = setup.bordered
    zero, slack = bs.solve(np.zeros((setup.grid.N, 1)), np.zeros(2))
    assert not np.any(zero) and not np.any(slack)
    rhs = np.random.default_rng(5).standard_normal((setup.grid.N, 1))
    field, slack = bs.solve(rhs, [0.1, 0.2])
    assert bs.residual(field, slack, rhs, [0.1, 0.2]) < 1e-11


def test_bordered_reproduces_kernel(fine):
    assert fine.kernel_residual() < 2e-7
    field, _ = fine.solve(np.zeros((fine.grid.N, 1)), [1., 0.])
    window = fine.grid.window()
    assert np.abs(field[window] - fine.basis.fields[window, :, 0]).max() < 1e-6


def test_bordered_inverse_stable_under_refinement(setup, fine):
    norms = []
    for bs in [setup.bordered, fine]:
        forcing = np.exp(0.2*np.sqrt(1 + bs.grid.xi**2)) * np.cos(1.3*bs.grid.xi)
        norms.append(bs.inverse_norm(forcing[:, None]))
    assert abs(norms[1]/norms[0] - 1) < 0.01


def test_bordered_singular():
    rd = reduced_data(quadratic_problem)
    grid = WeightedGrid.for_frequency(rd.omega_star, periods=8, N=1024, eta=1.5)
    with pytest.raises(BorderedSingular, match="decay rate"):
        build_bordered(quadratic_problem, grid, KernelBasisE0.from_reduced(grid, rd))
    coarse = WeightedGrid.for_frequency(rd.omega_star, periods=8, N=64)
    with pytest.raises(BorderedSingular, match="too coarse"):
        build_bordered(quadratic_problem, coarse, KernelBasisE0.from_reduced(coarse, rd))


# Fixed point
# ===========

def test_fixed_point_at_origin(setup):
    point = fixed_point_Phi(setup.bordered, setup.cutoff, [0., 0.])
    assert not np.any(point.Phi) and not np.any(point.psi)
    assert point.iterations == 1


def test_fixed_point_tangency(setup):
    slopes = []
    for t in [1e-3, 5e-4]:
        point = fixed_point_Phi(setup.bordered, setup.cutoff, [t, 0.])
        assert np.allclose(setup.basis.coordinates(point.Phi), [t, 0.], atol=1e-13)
        slopes.append(setup.grid.norm(point.psi) / t)
    assert slopes[0] < 1e-3
    assert abs(slopes[1]/slopes[0] - 0.5) < 0.05


def test_fixed_point_checks(setup):
    with pytest.raises(ValueError, match="cutoff scale"):
        fixed_point_Phi(setup.bordered, setup.cutoff, [1., 0.])
    with pytest.raises(NotContracting):
        fixed_point_Phi(setup.bordered, setup.cutoff, [0.3, 0.], max_iter=2)


def test_fixed_point_matches_wave_train(setup, wave, matched):
    omega, coeffs = wave
    v0, point = matched
    assert np.isclose(v0[0], AMPLITUDE, rtol=0.05) and abs(v0[1]) < 1e-10
    assert 0 < point.contraction_ratio < 1
    window = setup.grid.window()
    u = branch_field(setup.grid, omega, coeffs)
    assert np.abs(point.Phi[window] - u[window]).max() < 1e-4


def test_cutoff_locality(setup, matched):
    v0, point = matched
    assert point.sup_norm < setup.cutoff.epsilon/2
    wider = setup.cutoff.with_epsilon(2*setup.cutoff.epsilon)
    assert np.array_equal(fixed_point_Phi(setup.bordered, wider, v0).Phi, point.Phi)


# Reduced vector field
# ====================

def test_reduced_field_at_origin(setup):
    assert not np.any(reduced_vector_field(setup.bordered, setup.cutoff, setup.basis, [0., 0.]))


def test_linearization(setup):
    jac = linearization(setup.bordered, setup.cutoff, setup.basis)
    omega_star = setup.reduced.omega_star
    assert np.allclose(jac, [[0., omega_star], [-omega_star, 0.]], atol=1e-5)
    eig = np.linalg.eigvals(jac)
    assert np.allclose(sorted(eig.imag), [-omega_star, omega_star], atol=1e-5)
    assert np.abs(eig.real).max() < 1e-5


def test_equivariance(setup):
    frame = polar_sample(setup.bordered, setup.cutoff, setup.basis, [1e-3], n_angles=4)
    assert len(frame) == 4
    assert frame['equivariance_error'].max() < 1e-6


def test_reduced_flow_check(setup, matched):
    v0, _ = matched
    check = reduced_flow_check(setup.bordered, setup.cutoff, setup.basis, v0)
    assert check.discrepancy < 1e-5
    assert list(check.frame.columns) == ['x', 'c0_flow', 'c1_flow', 'c0_shift', 'c1_shift', 'error']
    trivial = reduced_flow_check(setup.bordered, setup.cutoff, setup.basis, [0., 0.], samples=5)
    assert trivial.discrepancy == 0
    with pytest.raises(ValueError, match="x0 < x1"):
        reduced_flow_check(setup.bordered, setup.cutoff, setup.basis, v0, (1., 0.5))


def test_orbit_period(setup, wave, matched):
    omega, _ = wave
    v0, _ = matched
    period = orbit_period(setup.bordered, setup.cutoff, setup.basis, v0)
    assert abs(2*np.pi/period - omega) < 1e-4


# Change of coordinates
# =====================

def test_original_coordinates():
    f = Nonlinearity.quadratic()
    assert not np.any(original_coordinates(np.zeros(5), 'v_to_u', f))
    assert np.isclose(original_coordinates(np.array([0.01]), 'u_to_v', f)[0], 0.01 - 0.0001)
    v = 0.05*np.sin(np.linspace(0, 6, 50))
    u = original_coordinates(v, 'v_to_u', f)
    assert np.abs(original_coordinates(u, 'u_to_v', f) - v).max() < 1e-12
    with pytest.raises(InversionFailed, match="small-solution"):
        original_coordinates(np.array([0.5]), 'v_to_u', f)
    with pytest.raises(ValueError, match="direction"):
        original_coordinates(v, 'sideways', f)
