# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import numpy as np
import pytest
from scipy.integrate import quad

from nlwaves import KernelModel, Gaussian, TwoSidedExponential, ShiftedGaussianBump, StripViolation


exp1 = KernelModel.scalar(TwoSidedExponential(1.))
gauss1 = KernelModel.scalar(Gaussian(1.))
bump = KernelModel.scalar(ShiftedGaussianBump(0.7))

lattice = [0., 0.3, 1j, 0.2 + 0.5j, -0.4 + 2j, 0.45 - 1.3j]


def test_evaluate():
    assert np.isclose(exp1.evaluate(0.)[0, 0], 0.5)
    assert np.isclose(gauss1.evaluate(0.)[0, 0], 1/np.sqrt(2*np.pi))
    assert np.isclose(exp1.evaluate(np.log(2))[0, 0], 0.25)
    x = np.linspace(-3, 3, 11)
    assert exp1.evaluate(x).shape == (11, 1, 1)


def test_symbol_closed_forms():
    assert np.isclose(exp1.symbol(0.)[0, 0], 1)
    assert np.isclose(exp1.symbol(1j)[0, 0], 0.5)
    assert np.isclose(gauss1.symbol(1j)[0, 0], np.exp(-0.5))
    assert np.isclose(exp1.symbol_derivative(1j)[0, 0], 0.5j)
    assert np.isclose(gauss1.symbol_derivative(0.5)[0, 0], 0.5*np.exp(1/8))
    assert np.allclose(exp1.symbol_derivative(0.), 0)


@pytest.mark.parametrize('kernel', [exp1, gauss1, bump], ids=['exp', 'gauss', 'bump'])
def test_symbol_against_quadrature(kernel):
    base = kernel.terms[0][1]
    lo, hi = base.support(1e-17)
    for nu in lattice:
        if abs(np.real(nu)) >= 0.5*kernel.decay_rate:
            continue
        re = quad(lambda x: float(base(x))*np.real(np.exp(-nu*x)), lo, hi, points=[0.], limit=400,
                  epsabs=1e-13, epsrel=1e-12)[0]
        im = quad(lambda x: float(base(x))*np.imag(np.exp(-nu*x)), lo, hi, points=[0.], limit=400,
                  epsabs=1e-13, epsrel=1e-12)[0]
        exact = kernel.symbol(nu)[0, 0]
        assert abs(exact - (re + 1j*im)) < 1e-8*max(1, abs(exact))


@pytest.mark.parametrize('kernel', [exp1, gauss1, bump], ids=['exp', 'gauss', 'bump'])
def test_symbol_derivative_against_differences(kernel):
    step = 1e-6
    for nu in lattice:
        if abs(np.real(nu)) >= 0.5*kernel.decay_rate:
            continue
        fd = (kernel.symbol(nu + step) - kernel.symbol(nu - step)) / (2*step)
        exact = kernel.symbol_derivative(nu)
        assert np.abs(exact - fd).max() < 1e-6*max(1, np.abs(exact).max())


def test_evenness():
    x = np.linspace(-5, 5, 101)
    for kernel in [exp1, gauss1]:
        assert kernel.is_even
        assert np.array_equal(kernel.evaluate(x), kernel.evaluate(-x))
        for nu in lattice:
            if abs(np.real(nu)) < kernel.decay_rate:
                assert np.allclose(kernel.symbol(nu), kernel.symbol(-nu), rtol=1e-14, atol=0)
    assert not bump.is_even


def test_strip_violation():
    with pytest.raises(StripViolation, match="strip"):
        exp1.symbol(1.0 + 0.5j)
    with pytest.raises(StripViolation):
        exp1.symbol_derivative(-1.2)
    gauss1.symbol(10. + 3j)


def test_moments():
    m = exp1.moments(3)
    assert np.isclose(m[0][0, 0], 1)
    assert np.isclose(m[1][0, 0], 0)
    assert np.isclose(m[2][0, 0], 2)
    assert np.isclose(gauss1.moments(2)[2][0, 0], 1)
    # ∫ x e^{-(x-c)²}/√π dx = c
    assert np.isclose(bump.moments(1)[1][0, 0], 0.7)
    with pytest.raises(ValueError, match="non-negative"):
        exp1.moments(-1)


def test_weighted_l1_norm():
    assert np.isclose(exp1.weighted_l1_norm(0.), 1, rtol=1e-8)
    assert np.isclose(exp1.weighted_l1_norm(0.5), 2, rtol=1e-8)
    assert np.isclose(gauss1.weighted_l1_norm(0.), 1, rtol=1e-8)
    with pytest.raises(StripViolation):
        exp1.weighted_l1_norm(1.)


@pytest.mark.parametrize('kernel', [exp1, gauss1], ids=['exp', 'gauss'])
@pytest.mark.parametrize('ell', [0., 1., 2.5, 4.])
def test_convolve_grid_modes(kernel, ell):
    h = 0.01
    x = np.arange(-50, 50 + h/2, h)
    u = np.cos(ell*x)
    out = kernel.convolve_grid(u, h)
    interior = np.abs(x) < 10
    expected = kernel.symbol(1j*ell)[0, 0].real * u
    assert np.abs(out[interior] - expected[interior]).max() < 1e-6


def test_convolve_grid_trivial():
    h = 0.05
    x = np.arange(-60, 60 + h/2, h)
    assert np.allclose(exp1.convolve_grid(np.zeros_like(x), h), 0)
    out = exp1.convolve_grid(3*np.ones_like(x), h)
    assert np.abs(out[np.abs(x) < 20] - 3).max() < 1e-6
    with pytest.raises(ValueError, match="positive"):
        exp1.convolve_grid(x, 0.)


def test_convolve_grid_derivative():
    h = 0.01
    x = np.arange(-40, 40 + h/2, h)
    u = np.exp(-x**2)
    # (K'*u) = (K*u)'
    ku = gauss1.convolve_grid(u, h)
    dku = gauss1.convolve_grid(u, h, derivative=True)
    interior = np.abs(x) < 5
    assert np.abs(dku[interior] - np.gradient(ku, h)[interior]).max() < 1e-3


def test_matrix_kernels():
    A = np.array([[2., 1.], [0., 0.5]])
    kernel = KernelModel([(np.eye(2), TwoSidedExponential(1.)), (np.diag([0., 1.]), Gaussian(0.5))])
    assert kernel.dimension == 2
    assert kernel.decay_rate == 1.
    assert np.allclose(kernel.times(A).symbol(0.3j), kernel.symbol(0.3j) @ A)
    assert np.allclose(kernel.rescaled(2.).symbol(0.3j), kernel.symbol(0.6j))
    assert np.isclose(kernel.rescaled(2.).decay_rate, 0.5)
    blocks = KernelModel.block_diagonal(exp1, gauss1)
    assert np.allclose(blocks.symbol(0.5j), np.diag([exp1.symbol(0.5j)[0, 0], gauss1.symbol(0.5j)[0, 0]]))
    with pytest.raises(ValueError, match="same dimension"):
        KernelModel([(np.eye(2), Gaussian()), (1., Gaussian())])


def test_kink_jumps():
    j1, j2 = exp1.kink_jumps()
    assert np.isclose(j1[0, 0], -1) and j2[0, 0] == 0
    j1, _ = exp1.rescaled(0.5).kink_jumps()
    assert np.isclose(j1[0, 0], -4)
    assert not np.any(gauss1.kink_jumps()[0])


def test_serialization():
    records = [{'family': 'two_sided_exponential', 'parameters': {'rate': 2.}, 'coefficient': [[1.5]]},
               {'family': 'gaussian', 'parameters': {'sigma': 0.5}, 'coefficient': 0.3, 'scale': 2.}]
    kernel = KernelModel.from_dict(records)
    again = KernelModel.from_dict(kernel.to_dict())
    x = np.linspace(-3, 3, 13)
    assert np.allclose(kernel.evaluate(x), again.evaluate(x))
    with pytest.raises(ValueError, match="Unknown kernel family"):
        KernelModel.from_dict({'family': 'lorentzian'})
