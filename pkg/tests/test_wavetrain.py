# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import numpy as np
import pytest

from nlwaves import KernelModel, Gaussian, TwoSidedExponential, ShiftedGaussianBump, CharacteristicFunction, \
                    NumericalWarning, WaveProblem, Nonlinearity, CosineGalerkin, ReducedData, find_omega_star, \
                    kernel_vectors, alpha_coefficient, reduced_data, solve_psi, reduced_R, reduced_terms, \
                    fixed_point_omega, direct_newton, grid_residual, continue_branch, uniqueness_probe, \
                    NoRoot, MultipleAxisRoots, NonSimpleRoot, ResonanceDetected, NumericalRankAmbiguous, \
                    AlphaVanishes, NewtonDiverged


exp1 = KernelModel.scalar(TwoSidedExponential(1.))
quadratic_problem = WaveProblem(2., exp1, Nonlinearity.quadratic())
OMEGA_GAUSS = np.sqrt(2*np.log(2))


@pytest.fixture(scope='module')
def rd():
    return reduced_data(quadratic_problem)


@pytest.fixture(scope='module')
def branch(rd):
    return continue_branch(quadratic_problem, a_max=0.05, steps=5, rd=rd)


# Problem and Galerkin layer
# ==========================

def test_nonlinearity():
    nl = Nonlinearity.polynomial([1., -2.])
    u = np.array([[0.5], [-1.]])
    assert np.allclose(nl(u), u**2 - 2*u**3)
    assert np.allclose(nl.jacobian(u)[:, 0, 0], 2*u[:, 0] - 6*u[:, 0]**2)
    assert Nonlinearity.from_dict({'form': 'cubic', 'coefficient': 3.}).to_dict() == \
           {'form': 'cubic', 'coefficient': 3.}
    with pytest.raises(ValueError, match="N'\\(0\\) = 0"):
        Nonlinearity(lambda u: u, lambda u: np.ones(u.shape + (1,)))
    with pytest.raises(ValueError, match="Unknown nonlinearity"):
        Nonlinearity.from_dict({'form': 'sine'})
    with pytest.raises(ValueError, match="no record form"):
        Nonlinearity(lambda u: u**2, lambda u: 2*u[..., None]).to_dict()


def test_wave_problem_checks():
    with pytest.raises(ValueError, match="must be even"):
        WaveProblem(2., KernelModel.scalar(ShiftedGaussianBump(1.)), Nonlinearity.quadratic())
    with pytest.raises(ValueError, match="not invertible"):
        WaveProblem(np.zeros((2, 2)), KernelModel.scalar(Gaussian(1.), np.eye(2)), Nonlinearity.quadratic(1., 2))
    with pytest.warns(NumericalWarning, match="ill-conditioned"):
        WaveProblem(np.diag([1., 1e-10]), KernelModel.scalar(Gaussian(1.), np.eye(2)), Nonlinearity.quadratic(1., 2))
    with pytest.raises(ValueError, match="do not match"):
        WaveProblem(2., exp1, Nonlinearity.quadratic(1., 2))
    assert quadratic_problem.to_dict()['modes'] == 32


def test_v_form():
    A = np.array([[2., 0.3], [0., 0.5]])
    p = WaveProblem(A, KernelModel.scalar(TwoSidedExponential(1.), np.eye(2)), Nonlinearity.quadratic(1., 2))
    K, g = p.v_form()
    assert np.allclose(K.evaluate(0.3), 0.5*np.exp(-0.3)*A)
    v = np.array([0.2, -0.4])
    assert np.allclose(g(v), np.linalg.solve(A, v**2))
    assert np.allclose(g.jacobian(v), np.linalg.solve(A, np.diag(2*v)))


def test_galerkin_transforms():
    gal = CosineGalerkin(8)
    c = np.zeros((9, 1))
    c[0], c[3] = 0.5, -1.
    samples = gal.synthesize(c)
    assert np.allclose(samples[:, 0], 0.5 - np.cos(3*gal.y))
    assert np.allclose(gal.analyze(samples), c)
    assert np.allclose(gal.synthesis_matrix @ c[:, 0], samples[:, 0])
    assert np.allclose(gal.analysis_matrix @ samples[:, 0], c[:, 0])
    assert abs(gal.sup_norm(c) - 1.5) < 1e-3
    assert np.allclose(gal.pi_shift(c)[3], 1.)


def test_galerkin_nonlinear_terms():
    gal = CosineGalerkin(8)
    c = np.zeros((9, 1))
    c[1] = 1.
    # cos² = (1 + cos 2y)/2
    squared = gal.nonlinear_coefficients(c, Nonlinearity.quadratic())
    assert np.allclose(squared[:, 0], [0.5, 0, 0.5] + [0]*6)
    c = np.random.default_rng(1).standard_normal((9, 1)) * 0.3**np.arange(9)[:, None]
    nl = Nonlinearity.polynomial([1., 0.5])
    jac = gal.nonlinear_jacobian(c, nl)
    step = 1e-6
    for k in [0, 2, 5]:
        dc = np.zeros_like(c)
        dc[k] = step
        fd = (gal.nonlinear_coefficients(c + dc, nl) - gal.nonlinear_coefficients(c - dc, nl)) / (2*step)
        assert np.allclose(jac[:, :, k, 0], fd, atol=1e-8)


# Linear data at ω*
# =================

@pytest.mark.parametrize("kernel, expected", [(exp1, 1.), (KernelModel.scalar(Gaussian(1.)), OMEGA_GAUSS)])
def test_find_omega_star(kernel, expected):
    p = WaveProblem(2., kernel, Nonlinearity.quadratic())
    assert abs(find_omega_star(p) - expected) < 1e-9


def test_find_omega_star_failures():
    with pytest.raises(NoRoot, match="No root"):
        find_omega_star(WaveProblem(0.5, exp1, Nonlinearity.quadratic()))
    # d(ν) = (ν² + 1)(ν² + 4)
    two_roots = CharacteristicFunction('polynomial', coefficients=[4., 0., 5., 0., 1.])
    with pytest.raises(MultipleAxisRoots, match="2 roots"):
        find_omega_star(two_roots)
    with pytest.raises(ResonanceDetected, match="mode 2"):
        find_omega_star(two_roots, (0.5, 1.5))
    double_root = CharacteristicFunction('polynomial', coefficients=[1., 0., 2., 0., 1.])
    with pytest.raises(NonSimpleRoot, match="multiplicity 2"):
        find_omega_star(double_root)


def test_kernel_vectors_scalar(rd):
    assert np.allclose(rd.v_star, [1.]) and np.allclose(rd.v_ad, [1.])
    assert abs(rd.omega_star - 1) < 1e-10


def test_kernel_vectors_blocks():
    kernel = KernelModel.scalar(TwoSidedExponential(1.), np.eye(2))
    p = WaveProblem(np.diag([2., 0.5]), kernel, Nonlinearity.quadratic(1., 2))
    omega = find_omega_star(p)
    v_star, v_ad = kernel_vectors(p, omega)
    assert np.allclose(v_star, [1., 0.]) and np.allclose(v_ad, [1., 0.])
    degenerate = WaveProblem(np.diag([2., 2.]), kernel, Nonlinearity.quadratic(1., 2))
    with pytest.raises(NumericalRankAmbiguous):
        kernel_vectors(degenerate, 1.)


def test_kernel_vectors_symmetric():
    A = np.array([[2., 0.5], [0.5, 1.]])
    p = WaveProblem(A, KernelModel.scalar(TwoSidedExponential(1.), np.eye(2)), Nonlinearity.quadratic(1., 2))
    omega = find_omega_star(p)
    lam = np.linalg.eigvalsh(A).max()
    assert abs(omega - np.sqrt(lam - 1)) < 1e-9
    v_star, v_ad = kernel_vectors(p, omega)
    assert np.allclose(v_star, v_ad, atol=1e-10)
    assert np.allclose(A @ v_star, lam*v_star, atol=1e-8)


def test_alpha_coefficient(rd):
    assert abs(rd.alpha + 1) < 1e-12
    gauss = reduced_data(WaveProblem(2., KernelModel.scalar(Gaussian(1.)), Nonlinearity.quadratic()))
    assert abs(gauss.alpha + OMEGA_GAUSS) < 1e-9
    with pytest.raises(AlphaVanishes):
        alpha_coefficient(quadratic_problem, ReducedData(0., np.ones(1), np.ones(1)))


# Lyapunov-Schmidt reduction
# ==========================

def test_solve_psi_zero_amplitude(rd):
    psi = solve_psi(quadratic_problem, rd, rd.omega_star, 0.)
    assert np.array_equal(psi, np.zeros((33, 1)))


def test_solve_psi_harmonics(rd):
    a = 0.01
    psi = solve_psi(quadratic_problem, rd, rd.omega_star, a)
    assert psi[1, 0] == 0
    # leading order: ψ₀ = -a²/2, ψ₂ = a²/6
    assert np.isclose(psi[0, 0], -a**2/2, rtol=0.1)
    assert np.isclose(psi[2, 0], a**2/6, rtol=0.1)
    assert np.abs(psi[3:]).max() < 1e-2*np.abs(psi[[0, 2]]).max()


def test_solve_psi_quadratic_scaling(rd):
    gal = CosineGalerkin(32)
    ratios = [gal.sup_norm(solve_psi(quadratic_problem, rd, rd.omega_star, a)) / a**2
              for a in [0.02, 0.01, 0.005]]
    assert max(ratios) / min(ratios) < 1.2


def test_reduced_R_small_amplitude(rd):
    assert reduced_R(quadratic_problem, rd, rd.omega_star, 0.) == 0
    r1 = reduced_R(quadratic_problem, rd, rd.omega_star, 0.01)
    r2 = reduced_R(quadratic_problem, rd, rd.omega_star, 0.005)
    assert abs(r1) < 0.01
    assert abs(r2/r1 - 0.25) < 0.05
    # R₂ = -5a²/12 at leading order
    assert np.isclose(r1, -5e-4/12, rtol=0.1)


def test_reduced_R_quadratic_in_omega(rd):
    values = [reduced_R(quadratic_problem, rd, rd.omega_star + delta, 0.) for delta in [1e-2, 5e-3]]
    assert abs(values[0]/values[1] - 4) < 0.2
    assert np.isclose(values[0], 0.5e-4, rtol=0.05)
    r1, r2, r3 = reduced_terms(quadratic_problem, rd, rd.omega_star + 1e-2, 0.)
    assert r1 == r2 == 0 and r3 == values[0]


def test_fixed_point_omega(rd):
    assert fixed_point_omega(quadratic_problem, rd, 0.).omega == rd.omega_star
    fp = fixed_point_omega(quadratic_problem, rd, 0.02)
    assert 0 <= fp.contraction_ratio < 1
    omega, coeffs = direct_newton(quadratic_problem, 0.02, rd=rd)
    assert abs(fp.omega - omega) < 1e-8
    assert np.abs(fp.psi[[0, 2]] - coeffs[[0, 2]]).max() < 1e-8
    with pytest.raises(ValueError, match="amplitude cap"):
        fixed_point_omega(quadratic_problem, rd, 1.)


def test_fixed_point_half_period_shift(rd):
    gal = CosineGalerkin(32)
    plus = fixed_point_omega(quadratic_problem, rd, 0.02)
    minus = fixed_point_omega(quadratic_problem, rd, -0.02)
    assert abs(plus.omega - minus.omega) < 1e-10
    assert np.abs(minus.psi - gal.pi_shift(plus.psi)).max() < 1e-10


def test_galerkin_mode_doubling(rd):
    fine = quadratic_problem.with_modes(64)
    omega = fixed_point_omega(quadratic_problem, rd, 0.05).omega
    omega_fine = fixed_point_omega(fine, rd, 0.05).omega
    assert abs(omega - omega_fine) < 1e-9


def test_direct_newton(rd):
    omega, coeffs = direct_newton(quadratic_problem, 0.05, rd=rd)
    assert np.isclose(coeffs[1, 0], 0.05)
    assert grid_residual(quadratic_problem, omega, coeffs) < 1e-6
    with pytest.raises(ValueError, match="a > 0"):
        direct_newton(quadratic_problem, 0., rd=rd)
    with pytest.raises(NewtonDiverged, match="iterations"):
        direct_newton(quadratic_problem, 0.05, rd=rd, max_iter=1)


# Branch
# ======

def test_continue_branch(rd, branch):
    assert len(branch) == 5 and not branch.truncated
    assert np.allclose(branch.amplitudes, [0.01, 0.02, 0.03, 0.04, 0.05])
    assert branch.max_residual < 1e-10
    assert all(pt.discrepancy < 1e-8 for pt in branch)
    assert all(pt.grid_residual < 1e-6 for pt in branch)
    assert all(pt.contraction_ratio < 1 for pt in branch)
    assert np.all(np.diff([pt.sup_norm for pt in branch]) > 0)
    shifts = np.abs([pt.omega - rd.omega_star for pt in branch])
    assert np.all(np.diff(shifts) > 0)
    assert all(pt.psi_norm < 0.1*pt.a for pt in branch)


def test_branch_export(rd, branch):
    frame = branch.to_frame()
    assert len(frame) == 6
    assert frame['a'].iloc[0] == 0 and frame['omega'].iloc[0] == rd.omega_star
    dump = branch.to_dict()
    assert dump['reduced']['alpha'] == rd.alpha
    assert len(dump['points'][0]['coeffs']) == 33


def test_branch_truncated(rd):
    with pytest.warns(NumericalWarning, match="truncated"):
        short = continue_branch(quadratic_problem, a_max=1., steps=4, rd=rd)
    assert short.truncated and len(short) == 0
    with pytest.raises(ValueError, match="at least one step"):
        continue_branch(quadratic_problem, steps=0, rd=rd)


def test_uniqueness_probe(branch):
    report = uniqueness_probe(quadratic_problem, branch, trials=50, noise=0.1, relative=True)
    assert report.fraction == 1
    assert len(report.records) == 50
    assert report.escapes.empty
    assert np.allclose(report.records['perturbation'], 0.1*report.records['a'], rtol=1e-10, atol=0)
    again = uniqueness_probe(quadratic_problem, branch, trials=50, noise=0.1, relative=True)
    assert np.array_equal(report.records['a'], again.records['a'])
    assert report.to_dict()['relative']


@pytest.mark.parametrize('noise', [1e-3, 0.1])
def test_uniqueness_probe_absolute_noise(branch, noise):
    report = uniqueness_probe(quadratic_problem, branch, trials=5, noise=noise)
    assert not report.relative
    assert np.allclose(report.records['perturbation'], noise, rtol=1e-10, atol=0)
    assert len(report.records) == 5


def test_uniqueness_probe_without_noise(branch):
    report = uniqueness_probe(quadratic_problem, branch, trials=5, noise=0.)
    assert report.fraction == 1
    assert report.records['distance'].max() < 1e-9
