# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging
import time
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.integrate import quad

from ..general import NlwavesError
from ..tools import timestamp
from ..kernels import KernelModel, Gaussian, TwoSidedExponential, ShiftedGaussianBump, ScaledKernel
from ..symbol import CharacteristicFunction, Rectangle, count_roots, roots_in_rectangle
from ..flow import OperatorPath, crossing_number, fredholm_index
from ..oracle import InhomogeneousOperator, assemble, numerical_index, weyl_demo_principal, weyl_demo_infinity
from ..wavetrain import WaveProblem, Nonlinearity, CosineGalerkin, find_omega_star, reduced_data, \
                        continue_branch, fixed_point_omega, uniqueness_probe, direct_newton
from ..manifold import build_center_manifold, fixed_point_Phi, linearization, polar_sample, \
                       branch_coordinates, orbit_period, reduced_flow_check

log = logging.getLogger(__name__)

PATH_SEED = 7
FRONT_SHIFT = 0.3
FRONT_STRIP = 0.6
# weighted front kernel decays like e^{-0.3|ξ|}: at L = 40 its σ_min sits near 2e-6
FRONT_GAP_COARSE = 1e5


@dataclass
class CriterionResult:
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    runtime: float = 0.
    error: str = None

    def to_dict(self):
        return {'name': self.name, 'passed': self.passed, 'measured': self.measured,
                'tolerances': self.tolerances, 'runtime': self.runtime, 'error': self.error}


def _exp1():
    return KernelModel.scalar(TwoSidedExponential(1.))


def _lc_problem():
    return WaveProblem(2., _exp1(), Nonlinearity.quadratic())


def _front_cf(a):
    return CharacteristicFunction('principal_plus_kernel', -1., _exp1().scaled(a), shift=FRONT_SHIFT)


def _front_path(a0, a1, name='front'):
    return OperatorPath.homotopy(_front_cf(a0), _front_cf(a1), FRONT_STRIP, name=name)


# Criteria
# ========
# Each returns (passed, measured, tolerances).

def characteristic_roots():
    cf = CharacteristicFunction('steady_state', 2., _exp1())
    rect = Rectangle(-0.5, 0.5, -1.5, 1.5)
    count = count_roots(cf, rect)
    roots = sorted(roots_in_rectangle(cf, rect), key=lambda rr: rr.nu.imag)
    errors = [abs(rr.nu - exact) for rr, exact in zip(roots, [-1j, 1j])]
    error = max(errors) if len(roots) == 2 else np.inf
    return (count == 2 and error < 1e-10), {'winding': count, 'root_error': error}, \
           {'winding': 2, 'root_error': 1e-10}


def kawahara():
    alpha, c = 1., 2.
    omega = find_omega_star(CharacteristicFunction.kawahara(alpha, c), (0.01, 3.))
    oracle = np.sqrt((-1 + np.sqrt(1 + 4*alpha*c)) / (2*alpha))
    error = abs(omega - oracle)
    return error < 1e-10, {'omega_star': omega, 'error': error}, {'error': 1e-10}


def index_vs_oracle():
    front = InhomogeneousOperator.front(0.5, 2.)
    flow_index = fredholm_index(front.limit_path(FRONT_SHIFT, FRONT_STRIP))
    grid_index = numerical_index(assemble(front, 40., 800, eta=FRONT_SHIFT), gap_factor=FRONT_GAP_COARSE).index
    refined_index = numerical_index(assemble(front, 80., 1600, eta=FRONT_SHIFT)).index
    constant = InhomogeneousOperator.steady_state(0.5, _exp1())
    reports, sigma_min = [], []
    for L in [20., 40., 80.]:
        gop = assemble(constant, L, int(round(2*L/0.1)) + 1)
        reports.append(tuple(numerical_index(gop)))
        sigma_min.append(float(gop.singular_values()[-1]))
    constant_flow = fredholm_index(constant.limit_path(FRONT_SHIFT, FRONT_STRIP))
    spread = max(sigma_min) - min(sigma_min)
    passed = flow_index == grid_index == refined_index == 1 and all(rr == (0, 0, 0) for rr in reports) \
             and constant_flow == 0 and min(sigma_min) > 0.4 and spread < 0.05
    return passed, {'front_flow_index': flow_index, 'front_grid_index': grid_index,
                    'front_refined_index': refined_index,
                    'constant_reports': reports, 'constant_flow_index': constant_flow,
                    'sigma_min': sigma_min}, \
           {'front_index': 1, 'front_gap_coarse': FRONT_GAP_COARSE, 'constant_index': 0,
            'sigma_min_lower': 0.4, 'sigma_min_spread': 0.05}


def path_algebra():
    rng = np.random.default_rng(PATH_SEED)
    records = []
    for k in range(5):
        a0, a_back = rng.uniform(0.3, 0.8, 2)
        a1 = rng.uniform(1.1, 2.5)
        up = _front_path(a0, a1, f"up{k}")
        down = _front_path(a1, a_back, f"down{k}")
        c_up = crossing_number(up)[0]
        c_down = crossing_number(down)[0]
        beside = OperatorPath.block_diagonal(up, OperatorPath.constant(_front_cf(2.), FRONT_STRIP))
        twice = OperatorPath.block_diagonal(up, _front_path(a0, a1, f"copy{k}"))
        records.append({
            'a0': a0, 'a1': a1,
            'reversal': crossing_number(up.reversed())[0] == -c_up,
            'concatenation': crossing_number(up.concatenate(down))[0] == c_up + c_down,
            'block_diagonal': crossing_number(beside)[0] == c_up,
            'identical_blocks': crossing_number(twice)[0] == 2*c_up,
        })
    checks = pd.DataFrame(records).drop(columns=['a0', 'a1'])
    return bool(checks.values.all()), {'identities_holding': int(checks.values.sum()), 'paths': len(records)}, \
           {'identities_holding': checks.size}


def weyl():
    principal = weyl_demo_principal(InhomogeneousOperator(lambda xi: np.tanh(xi)**2, _exp1()))
    infinity = weyl_demo_infinity(InhomogeneousOperator.steady_state(2., _exp1()))
    measured = {}
    passed = True
    for name, table in [('principal', principal), ('infinity', infinity)]:
        decreasing = bool(np.all(np.diff(table['residual']) < 0))
        ratio = float(table['ratio'].iloc[-1])
        measured[name] = {'decreasing': decreasing, 'final_ratio': ratio}
        passed = passed and decreasing and ratio < 1e-2
    return passed, measured, {'final_ratio': 1e-2}


def lyapunov_center():
    p = _lc_problem()
    rd = reduced_data(p)
    branch = continue_branch(p, 0.05, 5, rd=rd)
    galerkin = CosineGalerkin(p.modes)
    amplitudes = [0.04, 0.02, 0.01, 0.005, 0.0025]
    psi_ratios = [galerkin.sup_norm(fixed_point_omega(p, rd, a).psi)/a for a in amplitudes]
    measured = {'omega_star_error': abs(rd.omega_star - 1), 'alpha_error': abs(rd.alpha + 1),
                'max_discrepancy': max(pt.discrepancy for pt in branch),
                'max_contraction_ratio': max(pt.contraction_ratio for pt in branch),
                'psi_ratios': psi_ratios, 'points': len(branch)}
    passed = measured['omega_star_error'] < 1e-10 and measured['alpha_error'] < 1e-10 \
             and len(branch) == 5 and measured['max_discrepancy'] < 1e-8 \
             and measured['max_contraction_ratio'] < 1 and bool(np.all(np.diff(psi_ratios) < 0))
    return passed, measured, {'omega_star': 1e-10, 'alpha': 1e-10, 'discrepancy': 1e-8, 'contraction_ratio': 1}


def uniqueness():
    p = _lc_problem()
    branch = continue_branch(p, 0.05, 5)
    report = uniqueness_probe(p, branch, trials=50, noise=0.1, seed=0, relative=True)
    return report.returned == 50, report.to_dict(), {'returned': 50, 'distance': 1e-6}


def center_manifold():
    p = _lc_problem()
    setup = build_center_manifold(p, periods=8, N=1024, epsilon=0.5)
    bs, g_eps, basis = setup.bordered, setup.cutoff, setup.basis
    omega_star = setup.reduced.omega_star
    t = 1e-3
    slope = setup.grid.norm(fixed_point_Phi(bs, g_eps, [t, 0.]).psi) / t
    eig = np.linalg.eigvals(linearization(bs, g_eps, basis))
    eig_error = float(np.abs(np.sort(eig.imag) - [-omega_star, omega_star]).max() + np.abs(eig.real).max())
    equivariance = float(polar_sample(bs, g_eps, basis, [t], 8)['equivariance_error'].max())
    omega, coeffs = direct_newton(p, 0.02, rd=setup.reduced)
    v0 = branch_coordinates(basis, omega, coeffs)
    period_error = abs(2*np.pi/orbit_period(bs, g_eps, basis, v0) - omega)
    discrepancy = reduced_flow_check(bs, g_eps, basis, v0).discrepancy
    measured = {'tangency_slope': slope, 'eigenvalue_error': eig_error, 'equivariance_error': equivariance,
                'period_error': period_error, 'flow_discrepancy': discrepancy}
    tolerances = {'tangency_slope': 1e-3, 'eigenvalue_error': 1e-4, 'equivariance_error': 1e-6,
                  'period_error': 1e-4, 'flow_discrepancy': 1e-5}
    return all(measured[kk] < tolerances[kk] for kk in tolerances), measured, tolerances


def _quadrature_symbol(base, nu):
    lo, hi = base.support(1e-17)

    def part(fn):
        return quad(lambda x: float(base(x))*fn(np.exp(-nu*x)), lo, hi, points=[0.], limit=400,
                    epsabs=1e-13, epsrel=1e-12)[0]

    return part(np.real) + 1j*part(np.imag)


def hygiene():
    kernels = [KernelModel.scalar(Gaussian(1.)), _exp1(), KernelModel.scalar(ShiftedGaussianBump(0.7)),
               KernelModel.scalar(ScaledKernel(TwoSidedExponential(2.), 1.5))]
    lattice = [0., 0.3, 1j, 0.2 + 0.5j, 0.45 - 1.3j]
    step = 1e-6
    symbol_error = derivative_error = 0.
    for kernel in kernels:
        base = kernel.terms[0][1]
        for nu in lattice:
            if abs(np.real(nu)) >= 0.5*kernel.decay_rate:
                continue
            exact = kernel.symbol(nu)[0, 0]
            symbol_error = max(symbol_error, abs(_quadrature_symbol(base, nu) - exact)/max(1, abs(exact)))
            fd = (kernel.symbol(nu + step) - kernel.symbol(nu - step))[0, 0] / (2*step)
            analytic = kernel.symbol_derivative(nu)[0, 0]
            derivative_error = max(derivative_error, abs(fd - analytic)/max(1, abs(analytic)))
        for x in [-1.3, 0.4, 2.1]:
            fd = (base(x + step) - base(x - step)) / (2*step)
            analytic = base.derivative(x)
            derivative_error = max(derivative_error, float(abs(fd - analytic))/max(1, float(abs(analytic))))
    cf = CharacteristicFunction('steady_state', 2., _exp1())
    for nu in [0.3 + 0.2j, 0.5j]:
        fd = (cf.eval_d(nu + step) - cf.eval_d(nu - step)) / (2*step)
        analytic = cf.eval_d_derivative(nu)
        derivative_error = max(derivative_error, abs(fd - analytic)/max(1, abs(analytic)))
    p = _lc_problem()
    rd = reduced_data(p)
    doubling = abs(fixed_point_omega(p, rd, 0.05).omega - fixed_point_omega(p.with_modes(64), rd, 0.05).omega)
    measured = {'symbol_error': float(symbol_error), 'derivative_error': float(derivative_error),
                'mode_doubling': doubling}
    tolerances = {'symbol_error': 1e-8, 'derivative_error': 1e-6, 'mode_doubling': 1e-9}
    return all(measured[kk] < tolerances[kk] for kk in tolerances), measured, tolerances


CRITERIA = {
    'characteristic-roots': characteristic_roots,
    'kawahara': kawahara,
    'index-vs-oracle': index_vs_oracle,
    'path-algebra': path_algebra,
    'weyl': weyl,
    'lyapunov-center': lyapunov_center,
    'uniqueness': uniqueness,
    'center-manifold': center_manifold,
    'hygiene': hygiene,
}


def run_criterion(name):
    """Run one criterion; errors are recorded as failures, never raised."""
    if name not in CRITERIA:
        raise KeyError(f"Unknown acceptance criterion {name!r}; expected one of {', '.join(CRITERIA)}.")
    start = time.perf_counter()
    try:
        passed, measured, tolerances = CRITERIA[name]()
        result = CriterionResult(name, bool(passed), measured, tolerances)
    except (NlwavesError, ArithmeticError, ValueError, RuntimeError, np.linalg.LinAlgError) as err:
        log.warning(f"Acceptance criterion {name} raised {type(err).__name__}: {err}")
        result = CriterionResult(name, False, error=f"{type(err).__name__}: {err}")
    result.runtime = time.perf_counter() - start
    log.info(f"Acceptance {name}: {'PASS' if result.passed else 'FAIL'} ({result.runtime:.1f} s)")
    return result


def run_acceptance(names=None):
    """Run the named criteria (all by default) and return the report dict."""
    if names in (None, 'all', ['all']):
        names = list(CRITERIA)
    elif isinstance(names, str):
        names = [names]
    results = [run_criterion(nn) for nn in names]
    return {'timestamp': timestamp(), 'passed': all(rr.passed for rr in results),
            'criteria': [rr.to_dict() for rr in results]}
