# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging

import numpy as np
import pandas as pd

from ..symbol import CharacteristicFunction, Rectangle, count_roots, roots_in_rectangle, hyperbolicity_check
from ..flow import crossing_number, continue_root, LeftStrip, RootCollision, ContinuationStalled
from ..oracle import InhomogeneousOperator, assemble, numerical_index, weyl_demo_principal, weyl_demo_infinity
from ..wavetrain import WaveProblem, continue_branch, uniqueness_probe, direct_newton
from ..manifold import build_center_manifold, polar_sample, branch_coordinates, reduced_flow_check, \
                       orbit_period, linearization
from .config import ConfigError, PROFILES

log = logging.getLogger(__name__)


def _positive(x):
    return x > 0


def _non_negative(x):
    return x >= 0


# Builders
# ========

def build_characteristic(sc):
    spec = sc.record.get('characteristic')
    if spec is not None:
        if 'kawahara' in spec:
            return CharacteristicFunction.kawahara(float(spec['kawahara']['alpha']), float(spec['kawahara']['c']))
        if 'coefficients' in spec:
            return CharacteristicFunction('polynomial', coefficients=spec['coefficients'],
                                          shift=spec.get('shift', 0.))
        raise ConfigError("characteristic: expected 'kawahara' or 'coefficients'.")
    form = sc.param('form', 'steady_state', kind=str, check=lambda f: f != 'polynomial',
                    message="the polynomial form needs a 'characteristic' block")
    return CharacteristicFunction(form, sc.A, sc.kernel, shift=sc.param('shift', 0.))


def build_operator(sc):
    spec = sc.record.get('operator', {'type': 'steady_state'})
    kind = spec['type']
    if kind == 'steady_state':
        return InhomogeneousOperator.steady_state(sc.A, sc.kernel, name=sc.name)
    if kind == 'constant':
        return InhomogeneousOperator.constant(sc.A, sc.kernel, name=sc.name)
    if kind == 'front':
        kernel = sc.kernel if 'kernel' in sc.record else None
        A = sc.A if 'A' in sc.record else -1.
        return InhomogeneousOperator.front(float(spec.get('a_minus', 0.5)), float(spec.get('a_plus', 2.)),
                                           A=A, kernel=kernel, name=sc.name)
    return InhomogeneousOperator(PROFILES[spec['profile']], sc.kernel, name=sc.name)


def build_problem(sc):
    modes = sc.param('modes', 32, kind=int, check=lambda m: m >= 4, message="need at least 4 modes")
    return WaveProblem(sc.A, sc.kernel, sc.nonlinearity, modes)


# Tasks
# =====

def run_symbol(sc, out):
    cf = build_characteristic(sc)
    ell_max = sc.param('ell_max', 10., check=_positive, message="must be positive")
    samples = sc.param('samples', 2001, kind=int, check=lambda n: n > 1, message="need at least 2 samples")
    ell = np.linspace(-ell_max, ell_max, samples)
    d = np.array([cf.eval_d(1j*ll) for ll in ell])
    frame = pd.DataFrame({'ell': ell, 're_d': d.real, 'im_d': d.imag, 'abs_d': np.abs(d)})
    out.table('symbol', frame)
    out.plot_script('symbol', 'symbol')
    i = int(np.argmin(frame['abs_d']))
    return {'min_abs_d': float(frame['abs_d'].iloc[i]), 'argmin_ell': float(ell[i])}


def run_roots(sc, out):
    cf = build_characteristic(sc)
    bounds = sc.param('rectangle', [-0.5, 0.5, -1.5, 1.5], kind=list,
                      check=lambda r: len(r) == 4, message="expected [re_min, re_max, im_min, im_max]")
    try:
        rect = Rectangle(*map(float, bounds))
    except ValueError as err:
        raise ConfigError(f"parameters.rectangle: {err}") from None
    tol = sc.param('tol', 1e-10, check=_positive, message="must be positive")
    count = count_roots(cf, rect)
    roots = roots_in_rectangle(cf, rect, tol)
    out.table('roots', pd.DataFrame([rr.to_dict() for rr in roots],
                                    columns=['re', 'im', 'multiplicity', 'residual']))
    return {'count': int(count), 'roots': [rr.to_dict() for rr in roots]}


def run_hyperbolicity(sc, out):
    report = hyperbolicity_check(build_characteristic(sc), sc.param('ell_max'))
    summary = dict(report._asdict())
    out.json('hyperbolicity', summary)
    return summary


def _trajectories(path, ledger, window):
    """Axis roots of every crossing continued over ρ ± window."""
    frames = []
    for k, event in enumerate(ledger.events):
        for j, root in enumerate(event.axis_roots):
            parts = []
            for target in (max(event.rho - window, path.rho_min), min(event.rho + window, path.rho_max)):
                try:
                    parts.append(continue_root(path, event.rho, root.nu, target).to_frame())
                except (LeftStrip, RootCollision, ContinuationStalled) as err:
                    log.warning(f"Trajectory of root {j} at crossing {k} stopped: {type(err).__name__}: {err}")
            if parts:
                frame = pd.concat(parts).drop_duplicates('rho').sort_values('rho')
                frame.insert(0, 'root', j)
                frame.insert(0, 'crossing', k)
                frames.append(frame)
    return pd.concat(frames, ignore_index=True) if frames else None


def _spectral_flow(sc, out):
    op = build_operator(sc)
    eta = sc.param('eta', 0.3, check=_non_negative, message="must be non-negative")
    strip = sc.param('strip_half_width')
    path = op.limit_path(eta, strip)
    cross, ledger = crossing_number(path)
    out.table('crossings', ledger.to_frame())
    out.json('ledger', ledger.to_dict())
    window = sc.param('window', 0.2, check=_positive, message="must be positive")
    trajectories = _trajectories(path, ledger, window)
    if trajectories is not None:
        out.table('trajectories', trajectories)
    return op, eta, -cross


def run_flow(sc, out):
    _, eta, index = _spectral_flow(sc, out)
    return {'eta': eta, 'spectral_flow_index': index}


def run_index(sc, out):
    op, eta, index = _spectral_flow(sc, out)
    L = sc.param('L', 80., check=_positive, message="must be positive")
    N = sc.param('N', 1600, kind=int, check=lambda n: n > 2, message="need more than 2 points")
    gap = sc.param('gap_factor', 1e6, check=lambda g: g > 1, message="must exceed 1")
    gop = assemble(op, L, N, eta=eta)
    report = numerical_index(gop, gap_factor=gap)
    out.table('spectrum', gop.spectrum_frame())
    return {'eta': eta, 'spectral_flow_index': index, 'grid_index': report.index, 'dim_ker': report.dim_ker,
            'dim_coker': report.dim_coker, 'agree': index == report.index}


def run_oracle(sc, out):
    op = build_operator(sc)
    eta = sc.param('eta', 0., check=_non_negative, message="must be non-negative")
    h = sc.param('h', 0.1, check=_positive, message="must be positive")
    lengths = sc.param('L', [20., 40., 80.], kind=list, check=lambda ls: len(ls) > 0 and min(ls) > 0,
                       message="expected a list of positive half-lengths")
    gap = sc.param('gap_factor', 1e6, check=lambda g: g > 1, message="must exceed 1")
    rows = []
    for L in map(float, lengths):
        N = int(round(2*L/h)) + 1
        gop = assemble(op, L, N, eta=eta)
        report = numerical_index(gop, gap_factor=gap)
        rows.append({'L': L, 'N': N, 'dim_ker': report.dim_ker, 'dim_coker': report.dim_coker,
                     'index': report.index, 'sigma_min': float(gop.singular_values()[-1])})
    frame = pd.DataFrame(rows)
    out.table('oracle', frame)
    return {'index': [int(ii) for ii in frame['index']], 'sigma_min': frame['sigma_min'].tolist()}


def run_weyl(sc, out):
    op = build_operator(sc)
    construction = sc.param('construction', 'principal', kind=str,
                            check=lambda c: c in ('principal', 'infinity'),
                            message="expected 'principal' or 'infinity'")
    table = weyl_demo_principal(op) if construction == 'principal' else weyl_demo_infinity(op)
    out.table('weyl', table)
    out.plot_script('weyl', 'decay')
    return {'construction': construction, 'final_ratio': float(table['ratio'].iloc[-1]),
            'decreasing': bool(np.all(np.diff(table['residual']) < 0))}


def run_wavetrain(sc, out):
    p = build_problem(sc)
    a_max = sc.param('a_max', 0.05, check=_positive, message="must be positive")
    steps = sc.param('steps', 10, kind=int, check=lambda s: s >= 1, message="need at least one step")
    branch = continue_branch(p, a_max, steps)
    out.table('branch', branch.to_frame())
    out.json('branch_coefficients', branch.to_dict())
    out.plot_script('branch', 'branch')
    summary = {'omega_star': branch.reduced.omega_star, 'alpha': branch.reduced.alpha, 'points': len(branch),
               'truncated': branch.truncated, 'max_residual': branch.max_residual}
    trials = sc.param('trials', 0, kind=int, check=_non_negative, message="must be non-negative")
    if trials and len(branch):
        noise = sc.param('noise', 0.1, check=_non_negative, message="must be non-negative")
        relative = sc.param('relative_noise', False, kind=None, check=lambda r: isinstance(r, bool),
                            message="expected true or false")
        report = uniqueness_probe(p, branch, trials, noise, sc.param('seed', 0, kind=int), relative=relative)
        out.table('uniqueness', report.records)
        summary['uniqueness'] = report.to_dict()
    return summary


def run_manifold(sc, out):
    p = build_problem(sc)
    setup = build_center_manifold(p, periods=sc.param('periods', 16, kind=int), N=sc.param('N', 4096, kind=int),
                                  eta=sc.param('eta', 0.2, check=_positive, message="must be positive"),
                                  epsilon=sc.param('epsilon'))
    bs, g_eps, basis = setup.bordered, setup.cutoff, setup.basis
    radii = sc.param('radii', [0.005, 0.01, 0.02], kind=list)
    polar = polar_sample(bs, g_eps, basis, [float(r) for r in radii], sc.param('n_angles', 8, kind=int))
    out.table('polar', polar)
    out.plot_script('polar', 'phase_portrait')
    eig = np.linalg.eigvals(linearization(bs, g_eps, basis))
    summary = {'omega_star': setup.reduced.omega_star, 'rcond': setup.bordered.rcond,
               'linearization_eigenvalues': [{'re': ee.real, 'im': ee.imag} for ee in eig],
               'equivariance_error': float(polar['equivariance_error'].max())}
    a = sc.param('amplitude', 0.02, check=_positive, message="must be positive")
    omega, coeffs = direct_newton(p, a, rd=setup.reduced)
    v0 = branch_coordinates(basis, omega, coeffs)
    check = reduced_flow_check(bs, g_eps, basis, v0)
    out.table('flow_check', check.frame)
    out.plot_script('flow_check', 'flow_check')
    period = orbit_period(bs, g_eps, basis, v0)
    summary.update(amplitude=a, omega_branch=omega, omega_orbit=2*np.pi/period,
                   flow_discrepancy=check.discrepancy)
    return summary


TASK_RUNNERS = {
    'symbol': run_symbol,
    'roots': run_roots,
    'hyperbolicity': run_hyperbolicity,
    'flow': run_flow,
    'index': run_index,
    'oracle': run_oracle,
    'weyl': run_weyl,
    'wavetrain': run_wavetrain,
    'manifold': run_manifold,
}
