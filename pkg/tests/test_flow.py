# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import numpy as np
import pytest
from scipy.optimize import brentq

from nlwaves import KernelModel, TwoSidedExponential, CharacteristicFunction, Rectangle, roots_in_rectangle, \
                    StripViolation, OperatorPath, smoothstep, weighted_limits, detect_crossings, \
                    crossing_number, fredholm_index, continue_root, EndpointNotHyperbolic, \
                    CrossingsNotIsolated, RootCollision, LeftStrip


exp1 = KernelModel.scalar(TwoSidedExponential(1.))


def front_cf(a, shift=0.3):
    # d(ν) = -1 + a/(1 - (ν + shift)²)
    return CharacteristicFunction('principal_plus_kernel', -1., exp1.scaled(a), shift=shift)


def front_path(a0=0.5, a1=2., eta=0.6, name='front'):
    return OperatorPath.homotopy(front_cf(a0), front_cf(a1), eta, name=name)


def rho_at(a, a0=0.5, a1=2.):
    return brentq(lambda rho: a0 + (a1 - a0)*smoothstep(rho) - a, 0., 1., xtol=1e-14)


def test_smoothstep():
    assert smoothstep(0.) == 0 and smoothstep(1.) == 1
    assert smoothstep(-3.) == 0 and smoothstep(2.) == 1
    assert np.isclose(smoothstep(0.5), 0.5)


def test_detect_crossings():
    brackets = detect_crossings(front_path())
    assert len(brackets) == 1
    lo, hi = brackets[0]
    assert hi - lo <= 1.01e-8
    assert abs(0.5*(lo + hi) - rho_at(0.91)) < 1e-6
    assert detect_crossings(OperatorPath.constant(front_cf(0.5), 0.6)) == []


def test_endpoint_not_hyperbolic():
    with pytest.raises(EndpointNotHyperbolic, match="not hyperbolic"):
        detect_crossings(front_path(0.5, 0.91))


def test_crossing_number_front():
    cross, ledger = crossing_number(front_path())
    assert cross == -1
    assert len(ledger) == 1
    event = ledger.events[0]
    assert (event.M_R_before, event.M_R_after) == (1, 0)
    assert event.M_R_before + event.M_L_before == event.M_R_after + event.M_L_after
    assert abs(event.axis_roots[0].nu) < 1e-6
    assert ledger.to_dict()['crossing_number'] == -1
    assert list(ledger.to_frame()['contribution']) == [-1]


def test_constant_path():
    path = OperatorPath.constant(CharacteristicFunction('steady_state', 0.5, exp1), 0.6)
    cross, ledger = crossing_number(path)
    assert cross == 0
    assert len(ledger) == 0
    assert fredholm_index(path) == 0


def test_reversal_antisymmetry():
    path = front_path()
    assert crossing_number(path.reversed())[0] == 1
    assert fredholm_index(path) == 1
    assert fredholm_index(path.reversed()) == -1


def test_concatenation_additivity():
    up = front_path(0.5, 2., name='up')
    down = front_path(2., 0.3, name='down')
    joined = up.concatenate(down)
    assert joined.rho_max == 2.
    cross, ledger = crossing_number(joined)
    assert cross == crossing_number(up)[0] + crossing_number(down)[0] == 0
    assert len(ledger) == 2


def test_block_diagonal_additivity():
    first = front_path(0.5, 2.)
    second = front_path(0.3, 1.1)
    stacked = OperatorPath.block_diagonal(first, second)
    assert crossing_number(stacked)[0] == crossing_number(first)[0] + crossing_number(second)[0] == -2
    assert fredholm_index(stacked) == 2
    with pytest.raises(CrossingsNotIsolated, match="closer than"):
        crossing_number(stacked, local_rect_height=0.05)


def test_identical_blocks():
    stacked = OperatorPath.block_diagonal(front_path(), front_path())
    cross, ledger = crossing_number(stacked)
    assert cross == -2
    assert ledger.events[0].M_R_before == 2
    assert fredholm_index(stacked) == 2


def test_limit_path():
    path = OperatorPath.limit_path(CharacteristicFunction('principal_plus_kernel', -1., exp1.scaled(0.5)),
                                   CharacteristicFunction('principal_plus_kernel', -1., exp1.scaled(2.)),
                                   0.3, 0.6)
    assert (path.rho_min, path.rho_max) == (0., 2.)
    assert np.isclose(path(0.).shift, -0.3) and np.isclose(path(2.).shift, 0.3)
    assert fredholm_index(path) == 1


def test_continue_root():
    nu0 = -0.3 + np.sqrt(0.5)
    rho1 = rho_at(0.89)
    traj = continue_root(front_path(), 0., nu0, rho1, max_step=0.05)
    assert abs(traj.end - (-0.3 + np.sqrt(0.11))) < 1e-9
    assert np.all(np.diff(traj.nu.real) < 0)
    assert np.allclose(traj.nu.imag, 0, atol=1e-12)
    assert list(traj.to_frame().columns) == ['rho', 're_nu', 'im_nu']


def test_crossing_speed():
    traj = continue_root(front_path(), 0., -0.3 + np.sqrt(0.5), rho_at(0.95), max_step=0.01)
    at_crossing = np.argmin(np.abs(traj.nu.real))
    assert traj.crossing_speed()[at_crossing] < 0


def test_continue_constant_path():
    path = OperatorPath.constant(front_cf(0.5), 0.6)
    traj = continue_root(path, 0., -0.3 + np.sqrt(0.5), 1.)
    assert np.allclose(traj.nu, -0.3 + np.sqrt(0.5), atol=1e-14)


def test_continue_root_errors():
    with pytest.raises(RootCollision):
        continue_root(OperatorPath.constant(front_cf(1.), 0.6), 0., -0.3, 1.)
    with pytest.raises(LeftStrip, match="left the strip"):
        continue_root(front_path(0.5, 0.05), 0., -0.3 + np.sqrt(0.5), 1.)


def test_weighted_limits():
    cf = CharacteristicFunction('steady_state', 2., exp1)
    minus, plus = weighted_limits(cf, 0.)
    assert minus.shift == plus.shift == 0
    minus, plus = weighted_limits(cf, 0.3)
    nu = 0.1 + 0.4j
    assert np.isclose(plus.eval_d(nu), -1 + 2/(1 - (nu + 0.3)**2))
    assert np.isclose(minus.eval_d(nu), -1 + 2/(1 - (nu - 0.3)**2))
    roots = roots_in_rectangle(plus, Rectangle(-0.6, 0., 0.5, 1.5))
    assert len(roots) == 1 and abs(roots[0].nu - (-0.3 + 1j)) < 1e-8
    with pytest.raises(StripViolation):
        weighted_limits(cf, 1.)
