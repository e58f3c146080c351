# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp

from ..general import NlwavesError
from ..wavetrain import CosineGalerkin, NotContracting, reduced_data
from ..wavetrain.reduction import default_a_cap
from .grid import WeightedGrid, KernelBasisE0
from .cutoff import CutoffNonlinearity
from .bordered import build_bordered

log = logging.getLogger(__name__)

PICARD_TOLERANCE = 1e-12
PICARD_MAX_ITER = 200
LINEARIZATION_STEP = 1e-4
FLOW_RTOL = 1e-10
FLOW_ATOL = 1e-12


class NoPeriodicOrbit(ArithmeticError, NlwavesError):
    pass

class ReducedFlowFailed(RuntimeError, NlwavesError):
    pass


@dataclass
class ManifoldPoint:
    """Φ(v0) = Z v0 + Ψ(v0) on the grid, Z the discrete kernel fields."""
    v0: np.ndarray
    Phi: np.ndarray
    psi: np.ndarray
    contraction_ratio: float
    iterations: int

    @property
    def sup_norm(self):
        return float(np.abs(self.Phi).max())


FlowCheck = namedtuple('FlowCheck', ['discrepancy', 'frame'])
ManifoldSetup = namedtuple('ManifoldSetup', ['grid', 'basis', 'bordered', 'cutoff', 'reduced'])


# Fixed point
# ===========

def fixed_point_Phi(bs, g_eps, v0, *, tol=PICARD_TOLERANCE, max_iter=PICARD_MAX_ITER, initial=None):
    """Picard iteration Φ ← T̃⁻¹(-K_h g^ε(Φ), v0) for the small bounded
    solution with Q Φ = v0.

    The nonlinear term is switched off at the two ghost end nodes.

    Returns:
        ManifoldPoint
    Raises:
        ValueError: if |v0| exceeds the cutoff scale.
        NotContracting: after three consecutive non-decreasing steps, or
            when max_iter is exhausted.
    """
    v0 = np.asarray(v0, dtype=float).reshape(2)
    if np.linalg.norm(v0) > g_eps.epsilon:
        raise ValueError(f"|v0| = {np.linalg.norm(v0):.4g} exceeds the cutoff scale ε = {g_eps.epsilon:g}.")
    grid = bs.grid
    linear = bs.kernel_fields @ v0
    Phi = linear if initial is None else np.asarray(initial, dtype=float)
    mask = bs.mask[:, None]
    floor = 1e3*np.finfo(float).eps
    ratios = []
    streak = 0
    previous = None
    for it in range(1, max_iter + 1):
        forcing = -bs.kernel.convolve_grid(mask*g_eps(Phi), grid.h)
        new, _ = bs.solve(forcing, v0)
        change = grid.norm(new - Phi)
        size = grid.norm(new)
        Phi = new
        if change <= tol*size:
            ratio = max(ratios) if ratios else 0.
            log.debug(f"Φ({v0.tolist()}) after {it} Picard steps, contraction ratio {ratio:.3g}")
            return ManifoldPoint(v0, Phi, Phi - linear, ratio, it)
        if previous is not None and previous > floor*size:
            ratio = change / previous
            ratios.append(ratio)
            streak = streak + 1 if ratio >= 1 else 0
            if streak >= 3:
                raise NotContracting(f"Picard iteration for Φ at |v0| = {np.linalg.norm(v0):.4g} expands "
                                   + f"(ratios {ratios[-3:]}); lower ε or |v0|.")
        previous = change
    raise NotContracting(f"No convergence of Φ at |v0| = {np.linalg.norm(v0):.4g} within {max_iter} steps.")


def trajectory_derivative(bs, g_eps, Phi):
    """Φ' from the smoothing form Φ = K*(Id + g^ε)(Φ).

    Differentiating under the convolution gives Φ' = K'*f with
    f = Φ + g^ε(Φ). On the grid, the jump of K' at the origin adds
    (h²/12)(J2 f - J1 f') with f' = (I + Dg^ε)Φ', a pointwise n×n solve.
    """
    grid = bs.grid
    h = grid.h
    n = bs.dimension
    mask = bs.mask
    f = Phi + mask[:, None]*g_eps(Phi)
    rhs = bs.kernel.convolve_grid(f, h, derivative=True)
    J1, J2 = bs.kernel.kink_jumps()
    if not (np.any(J1) or np.any(J2)):
        out = rhs
    else:
        rhs = rhs + h**2/12 * f @ J2.T
        Dg = g_eps.jacobian(Phi) * mask[:, None, None]
        lhs = np.eye(n) + h**2/12 * J1 @ (np.eye(n) + Dg)
        out = np.linalg.solve(lhs, rhs[..., None])[..., 0]
    out[~mask] = 0.
    return out


# Reduced vector field
# ====================

def reduced_vector_field(bs, g_eps, basis, v0, *, point=None):
    """h(v0) = Q Φ(v0)', the generator of the shift on the manifold."""
    point = point or fixed_point_Phi(bs, g_eps, v0)
    return basis.coordinates(trajectory_derivative(bs, g_eps, point.Phi))


def linearization(bs, g_eps, basis, delta=LINEARIZATION_STEP):
    """Dh(0) by central differences."""
    jac = np.empty((2, 2))
    for k in range(2):
        step = np.zeros(2)
        step[k] = delta
        jac[:, k] = (reduced_vector_field(bs, g_eps, basis, step)
                     - reduced_vector_field(bs, g_eps, basis, -step)) / (2*delta)
    return jac


def _field(bs, g_eps, basis):
    def rhs(x, v):
        return reduced_vector_field(bs, g_eps, basis, v)
    return rhs


def reduced_flow_check(bs, g_eps, basis, v0, x_range=None, *, samples=41, rtol=FLOW_RTOL, atol=FLOW_ATOL):
    """Integrate v' = h(v) from v0 and compare with Q τ_x Φ(v0).

    Both sides describe the same shifted solution, so the discrepancy
    measures the consistency of the manifold, its projection and h.

    Args:
        x_range (tuple, optional): (x0, x1) with 0 ≤ x0 < x1. Default one
            linear period (0, 2π/ω*).
    Returns:
        FlowCheck: (discrepancy, frame) with columns x, c0_flow, c1_flow,
        c0_shift, c1_shift, error.
    """
    x0, x1 = x_range if x_range is not None else (0., 2*np.pi/basis.omega_star)
    if not 0 <= x0 < x1:
        raise ValueError(f"Need 0 ≤ x0 < x1, got ({x0}, {x1}).")
    v0 = np.asarray(v0, dtype=float).reshape(2)
    xs = np.linspace(x0, x1, samples)
    point = fixed_point_Phi(bs, g_eps, v0)
    sol = solve_ivp(_field(bs, g_eps, basis), (0., x1), v0, method='DOP853', t_eval=xs,
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise ReducedFlowFailed(f"Integration of the reduced flow failed: {sol.message}")
    flow = sol.y.T
    shifted = np.array([basis.shifted_coordinates(point.Phi, x) for x in xs])
    error = np.linalg.norm(flow - shifted, axis=1)
    frame = pd.DataFrame({'x': xs, 'c0_flow': flow[:, 0], 'c1_flow': flow[:, 1],
                          'c0_shift': shifted[:, 0], 'c1_shift': shifted[:, 1], 'error': error})
    discrepancy = float(error.max())
    log.info(f"Reduced flow vs shift from |v0| = {np.linalg.norm(v0):.4g}: discrepancy {discrepancy:.3e}")
    return FlowCheck(discrepancy, frame)


def orbit_period(bs, g_eps, basis, v0, *, periods=2.5, rtol=FLOW_RTOL, atol=FLOW_ATOL):
    """Period of the h-orbit through v0, from two upward zero crossings of
    the second coordinate.

    Raises:
        NoPeriodicOrbit: if fewer than two crossings occur within 'periods'
            linear periods.
    """
    def crossing(x, v):
        return v[1]
    crossing.direction = 1

    span = periods*2*np.pi/basis.omega_star
    sol = solve_ivp(_field(bs, g_eps, basis), (0., span), np.asarray(v0, dtype=float).reshape(2),
                    method='DOP853', events=crossing, rtol=rtol, atol=atol)
    if not sol.success:
        raise ReducedFlowFailed(f"Integration of the reduced flow failed: {sol.message}")
    hits = sol.t_events[0]
    if len(hits) < 2:
        raise NoPeriodicOrbit(f"Only {len(hits)} section crossing(s) within x ≤ {span:.4g} "
                            + f"from v0 = {np.asarray(v0).tolist()}.")
    return float(hits[1] - hits[0])


def polar_sample(bs, g_eps, basis, radii, n_angles=8):
    """h on the polar grid v = R_θ(r, 0), with the equivariance defect
    |h(R_θ v) - R_θ h(v)| per point."""
    rows = []
    for r in np.atleast_1d(radii):
        h_ref = reduced_vector_field(bs, g_eps, basis, [r, 0.])
        for theta in 2*np.pi*np.arange(n_angles)/n_angles:
            R = basis.rotation(theta)
            v = R @ np.array([r, 0.])
            hv = reduced_vector_field(bs, g_eps, basis, v)
            rows.append({'r': float(r), 'theta': theta, 'c0': v[0], 'c1': v[1], 'h0': hv[0], 'h1': hv[1],
                         'equivariance_error': float(np.linalg.norm(hv - R @ h_ref))})
    return pd.DataFrame(rows, columns=['r', 'theta', 'c0', 'c1', 'h0', 'h1', 'equivariance_error'])


# Cross-validation with wave trains
# =================================

def branch_field(grid, omega, coeffs):
    """Samples on the grid of u(ξ) = Σ_j c_j cos(jωξ)."""
    coeffs = np.asarray(coeffs, dtype=float)
    return CosineGalerkin(len(coeffs) - 1).evaluate(coeffs, omega*grid.xi)


def branch_coordinates(basis, omega, coeffs):
    """Q of a sampled wave train."""
    return basis.coordinates(branch_field(basis.grid, omega, coeffs))


def build_center_manifold(p, *, periods=16, N=4096, eta=0.2, epsilon=None, rd=None):
    """Grid, basis, bordered system and cutoff for the v-form of 'p'.

    The default cutoff scale is ten times the default amplitude cap of the
    wave-train continuation.
    """
    rd = rd or reduced_data(p)
    grid = WeightedGrid.for_frequency(rd.omega_star, periods, N, eta)
    basis = KernelBasisE0.from_reduced(grid, rd)
    bordered = build_bordered(p, grid, basis)
    _, g = p.v_form()
    epsilon = 10*default_a_cap(p) if epsilon is None else epsilon
    cutoff = CutoffNonlinearity(g, epsilon)
    log.info(f"Center manifold setup on {grid!r}, ε = {epsilon:g}, rcond = {bordered.rcond:.3e}")
    return ManifoldSetup(grid, basis, bordered, cutoff, rd)
