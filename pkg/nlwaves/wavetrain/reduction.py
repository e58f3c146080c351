# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..general import NlwavesError
from ..symbol import CharacteristicFunction, Rectangle, roots_in_rectangle, choose_ell_max
from .problem import WaveProblem
from .galerkin import CosineGalerkin

log = logging.getLogger(__name__)

AXIS_TOLERANCE = 1e-6
RESONANCE_TOLERANCE = 1e-8
SIMPLE_ROOT_THRESHOLD = 1e-6
NEWTON_TOLERANCE = 1e-12
NEWTON_MAX_ITER = 25


class NoRoot(ValueError, NlwavesError):
    pass

class MultipleAxisRoots(ValueError, NlwavesError):
    pass

class NonSimpleRoot(ValueError, NlwavesError):
    pass

class ResonanceDetected(ValueError, NlwavesError):
    pass

class NumericalRankAmbiguous(ArithmeticError, NlwavesError):
    pass

class AlphaVanishes(ValueError, NlwavesError):
    pass

class NewtonDiverged(RuntimeError, NlwavesError):
    pass

class NotContracting(RuntimeError, NlwavesError):
    pass


@dataclass(frozen=True)
class ReducedData:
    omega_star: float
    v_star: np.ndarray
    v_ad: np.ndarray
    alpha: float = None

    def to_dict(self):
        return {'omega_star': self.omega_star, 'v_star': np.asarray(self.v_star).tolist(),
                'v_ad': np.asarray(self.v_ad).tolist(), 'alpha': self.alpha}


OmegaFixedPoint = namedtuple('OmegaFixedPoint', ['omega', 'psi', 'contraction_ratio', 'iterations'])


# Spectral pieces
# ===============

def symbol_on_modes(kernel, omega, modes):
    """Real k̂(iωj) for j = 0..M, shape (M+1, n, n)."""
    return np.real(kernel.symbol(1j*omega*np.arange(modes + 1)))

def symbol_on_modes_derivative(kernel, omega, modes):
    """d/dω k̂(iωj) = Re(i j k̂'(iωj)), shape (M+1, n, n)."""
    j = np.arange(modes + 1)
    return np.real(1j*j[:, None, None] * kernel.symbol_derivative(1j*omega*j))

def _omega_derivative(kernel, omega):
    return np.real(1j*kernel.symbol_derivative(1j*omega))


def galerkin_residual(p, galerkin, c, omega):
    """F_j = -c_j + k̂(iωj)(A c_j + N_j) for j = 0..M."""
    kh = symbol_on_modes(p.kernel, omega, galerkin.M)
    rhs = c @ p.A.T + galerkin.nonlinear_coefficients(c, p.nonlinearity)
    return -c + np.einsum('jab,jb->ja', kh, rhs)


def galerkin_jacobian(p, galerkin, c, omega):
    """∂F_j/∂c_k as an array [j, a, k, b]."""
    M, n = galerkin.M, p.dimension
    kh = symbol_on_modes(p.kernel, omega, M)
    lin = np.zeros((M + 1, n, M + 1, n))
    idx = np.arange(M + 1)
    lin[idx, :, idx, :] = p.A
    lin += galerkin.nonlinear_jacobian(c, p.nonlinearity)
    jac = np.einsum('jac,jckb->jakb', kh, lin)
    jac[idx, :, idx, :] -= np.eye(n)
    return jac


def galerkin_omega_derivative(p, galerkin, c, omega):
    dkh = symbol_on_modes_derivative(p.kernel, omega, galerkin.M)
    rhs = c @ p.A.T + galerkin.nonlinear_coefficients(c, p.nonlinearity)
    return np.einsum('jab,jb->ja', dkh, rhs)


# Linear data at ω*
# =================

def find_omega_star(problem, search=None, *, modes=None, tol=1e-10, width=0.05):
    """The frequency ω* > 0 of the unique simple root pair ±iω* of d.

    Roots are searched on the thin rectangle [-w, w] × search with the
    argument principle. The root must be simple and unique on the axis,
    and non-resonant: d(ijω*) ≠ 0 for j = 0 and 2 ≤ j ≤ M.

    Args:
        problem (WaveProblem or CharacteristicFunction): Steady-state data.
        search (tuple, optional): Interval of ω. Defaults to (0.01, ℓ_max)
            with ℓ_max beyond which the symbol tail is negligible.
        modes (int, optional): M for the resonance check. Defaults to the
            problem's modes, or 32.
    """
    if isinstance(problem, WaveProblem):
        cf = problem.characteristic
        modes = modes or problem.modes
    elif isinstance(problem, CharacteristicFunction):
        cf = problem
        modes = modes or 32
    else:
        raise TypeError(f"Expected a WaveProblem or CharacteristicFunction, got {type(problem).__name__}.")
    if search is None:
        search = (0.01, choose_ell_max(cf))
    rect = Rectangle(-width, width, float(search[0]), float(search[1]))
    roots = [rr for rr in roots_in_rectangle(cf, rect, tol=tol) if abs(rr.nu.real) < AXIS_TOLERANCE]
    if not roots:
        raise NoRoot(f"No root of d on i·[{search[0]:g}, {search[1]:g}].")
    if any(rr.multiplicity > 1 for rr in roots):
        raise NonSimpleRoot(f"Axis root cluster of multiplicity {max(rr.multiplicity for rr in roots)} "
                          + f"near {roots[0].nu:.8g}.")
    if len(roots) > 1:
        raise MultipleAxisRoots(f"{len(roots)} roots on the imaginary axis: "
                              + f"{[round(rr.nu.imag, 10) for rr in roots]}.")
    omega = float(roots[0].nu.imag)
    slope = abs(cf.eval_d_derivative(1j*omega))
    if slope < SIMPLE_ROOT_THRESHOLD:
        raise NonSimpleRoot(f"|d'(iω*)| = {slope:.3g} at ω* = {omega:.10g}.")
    for j in [0] + list(range(2, modes + 1)):
        value = abs(cf.eval_d(1j*j*omega))
        if value < RESONANCE_TOLERANCE:
            raise ResonanceDetected(f"d(i·{j}·ω*) = {value:.3g}: mode {j} resonates with ω* = {omega:.10g}.")
    log.info(f"ω* = {omega:.12g} (|d| = {roots[0].residual:.2e}, |d'| = {slope:.3g})")
    return omega


def _sign_normalized(v):
    v = np.real(v)
    return v if v[np.argmax(np.abs(v))] > 0 else -v


def kernel_vectors(p, omega_star):
    """Unit null vectors v*, v_ad of -I + k̂(iω*)A and of its transpose."""
    D = np.real(p.characteristic.matrix(1j*omega_star))
    U, s, Vh = np.linalg.svd(D)
    if len(s) > 1 and s[-2] <= 1e3*s[-1]:
        raise NumericalRankAmbiguous(f"Singular values {s[-2]:.3g} and {s[-1]:.3g} of D(iω*) do not "
                                   + "separate a one-dimensional kernel.")
    return _sign_normalized(Vh[-1]), _sign_normalized(U[:, -1])


def alpha_coefficient(p, rd):
    """α = ⟨ d/dω k̂(iω)|_{ω*} A v*, v_ad ⟩."""
    alpha = float(rd.v_ad @ _omega_derivative(p.kernel, rd.omega_star) @ p.A @ rd.v_star)
    if abs(alpha) < 1e-10:
        raise AlphaVanishes(f"α = {alpha:.3g} at ω* = {rd.omega_star:.10g}: the branch is not "
                          + "transversal.")
    return alpha


def reduced_data(p, search=None):
    """ReducedData (ω*, v*, v_ad, α) of a wave problem."""
    omega = find_omega_star(p, search)
    v_star, v_ad = kernel_vectors(p, omega)
    rd = ReducedData(omega, v_star, v_ad)
    return ReducedData(omega, v_star, v_ad, alpha_coefficient(p, rd))


# Lyapunov-Schmidt system
# =======================

def _complement(v):
    """Orthonormal basis of v⊥, shape (n, n-1)."""
    return scipy.linalg.null_space(np.atleast_2d(v))


def _newton(residual, jacobian, y, tol, max_iter, what, min_iter=0):
    previous = np.inf
    for it in range(max_iter + 1):
        res = residual(y)
        norm = np.abs(res).max() if res.size else 0.
        log.debug(f"{what}: iteration {it}, residual {norm:.3e}")
        if norm < tol and it >= min_iter:
            return y, it
        if it == max_iter:
            break
        step = np.linalg.solve(jacobian(y), -res)
        size = np.abs(step).max()
        if it > 2 and size > 10*previous:
            raise NewtonDiverged(f"{what}: Newton step grew from {previous:.3e} to {size:.3e}.")
        previous = size
        y = y + step
    raise NewtonDiverged(f"{what}: residual {norm:.3e} after {max_iter} iterations.")


def solve_psi(p, rd, omega, a, *, initial=None, tol=NEWTON_TOLERANCE, max_iter=NEWTON_MAX_ITER):
    """Range part ψ(ω, a) of the Lyapunov-Schmidt splitting u = a v* cos y + ψ.

    The unknowns are all modes j ≠ 1 and the v*-orthogonal part of mode 1;
    the equations are F_j = 0 for j ≠ 1 and the v_ad-orthogonal part of
    F_1. Newton iteration to a residual below 'tol'.

    Returns:
        array: ψ as cosine coefficients, shape (M+1, n).
    """
    galerkin = CosineGalerkin(p.modes)
    M, n = p.modes, p.dimension
    v_perp = _complement(rd.v_star)
    w_perp = _complement(rd.v_ad)
    others = [j for j in range(M + 1) if j != 1]

    def coefficients(y):
        c = np.zeros((M + 1, n))
        c[others] = y[:M*n].reshape(M, n)
        c[1] = a*rd.v_star + v_perp @ y[M*n:]
        return c

    def residual(y):
        F = galerkin_residual(p, galerkin, coefficients(y), omega)
        return np.concatenate([F[others].ravel(), w_perp.T @ F[1]])

    def jacobian(y):
        J = galerkin_jacobian(p, galerkin, coefficients(y), omega)
        cols = np.concatenate([J[:, :, others, :].reshape(M + 1, n, M*n),
                               np.einsum('jakb,bz->jaz', J[:, :, [1], :], v_perp)], axis=2)
        return np.concatenate([cols[others].reshape(M*n, -1), w_perp.T @ cols[1]], axis=0)

    y0 = np.zeros(M*n + n - 1)
    if initial is not None:
        initial = np.asarray(initial, dtype=float)
        y0[:M*n] = initial[others].ravel()
        y0[M*n:] = v_perp.T @ initial[1]
    # at least one step, also after a warm start
    y, _ = _newton(residual, jacobian, y0, tol, max_iter, f"ψ(ω={omega:.10g}, a={a:.3g})", min_iter=1)
    psi = coefficients(y)
    psi[1] -= a*rd.v_star
    return psi


def reduced_terms(p, rd, omega, a, psi=None):
    """The three parts of R(ω, a) = R₁ + R₂ + R₃:

        R₁ = -(1/αa) ⟨(k̂(iω) - k̂(iω*)) A ψ₁, v_ad⟩
        R₂ = -(1/αa) ⟨k̂(iω) N₁, v_ad⟩
        R₃ = -(1/α) [⟨(k̂(iω) - k̂(iω*)) A v*, v_ad⟩ - α(ω - ω*)]

    where the index 1 denotes the first cosine mode. At a = 0 the first two
    are replaced by their limit 0.
    """
    if rd.alpha is None:
        raise ValueError("ReducedData without α; use reduced_data() or alpha_coefficient() first.")
    kh = np.real(p.kernel.symbol(1j*omega))
    kh_star = np.real(p.kernel.symbol(1j*rd.omega_star))
    dk = kh - kh_star
    r3 = -(rd.v_ad @ dk @ p.A @ rd.v_star - rd.alpha*(omega - rd.omega_star)) / rd.alpha
    if a == 0:
        return 0., 0., float(r3)
    if psi is None:
        psi = solve_psi(p, rd, omega, a)
    galerkin = CosineGalerkin(p.modes)
    c = psi.copy()
    c[1] += a*rd.v_star
    n1 = galerkin.nonlinear_coefficients(c, p.nonlinearity)[1]
    r1 = -(rd.v_ad @ dk @ p.A @ psi[1]) / (rd.alpha*a)
    r2 = -(rd.v_ad @ kh @ n1) / (rd.alpha*a)
    return float(r1), float(r2), float(r3)


def reduced_R(p, rd, omega, a, psi=None):
    """R(ω, a) of the fixed-point form ω - ω* = R(ω, a) of the bifurcation
    equation."""
    return sum(reduced_terms(p, rd, omega, a, psi))


def default_a_cap(p):
    return 0.05*max(1., p.spectral_radius)


def fixed_point_omega(p, rd, a, tol=1e-12, *, a_cap=None, max_iter=100):
    """Iterate ω ← ω* + R(ω, a) from ω*.

    Returns:
        OmegaFixedPoint: (omega, psi, contraction_ratio, iterations); the
        ratio is the largest observed |Δω_{k+1}|/|Δω_k|.
    Raises:
        NotContracting: after three consecutive ratios ≥ 1.
    """
    a_cap = default_a_cap(p) if a_cap is None else a_cap
    if abs(a) > a_cap:
        raise ValueError(f"|a| = {abs(a):g} exceeds the amplitude cap {a_cap:g}.")
    omega = rd.omega_star
    psi = solve_psi(p, rd, omega, a)
    if a == 0:
        return OmegaFixedPoint(omega, psi, 0., 0)
    ratios = []
    streak = 0
    previous = None
    for it in range(1, max_iter + 1):
        new = rd.omega_star + reduced_R(p, rd, omega, a, psi)
        change = abs(new - omega)
        if previous is not None and previous > 1e3*np.finfo(float).eps*rd.omega_star:
            ratio = change / previous
            ratios.append(ratio)
            streak = streak + 1 if ratio >= 1 else 0
            if streak >= 3:
                raise NotContracting(f"ω ← ω* + R(ω, a) at a = {a:g} expands (ratios {ratios[-3:]}).")
        omega, previous = new, change
        psi = solve_psi(p, rd, omega, a, initial=psi)
        if change < tol:
            ratio = max(ratios) if ratios else 0.
            log.debug(f"ω({a:g}) = {omega:.14g} after {it} iterations, contraction ratio {ratio:.3g}")
            return OmegaFixedPoint(omega, psi, ratio, it)
    raise NotContracting(f"No convergence of ω at a = {a:g} within {max_iter} iterations.")


# Independent full Newton
# =======================

def direct_newton(p, a, initial_guess=None, *, rd=None, omega0=None, tol=NEWTON_TOLERANCE, max_iter=NEWTON_MAX_ITER):
    """Full Galerkin-Newton for (c, ω) with the amplitude constraint
    ⟨c₁, v*⟩ = a.

    Returns:
        tuple: (omega, coefficients of shape (M+1, n))
    """
    if not a > 0:
        raise ValueError(f"direct_newton needs a > 0 (the constraint degenerates at a = 0), got {a}.")
    rd = rd or reduced_data(p)
    galerkin = CosineGalerkin(p.modes)
    M, n = p.modes, p.dimension
    size = (M + 1)*n
    if initial_guess is None:
        initial_guess = np.zeros((M + 1, n))
        initial_guess[1] = a*rd.v_star
    y0 = np.concatenate([np.asarray(initial_guess, dtype=float).ravel(),
                         [rd.omega_star if omega0 is None else omega0]])

    def residual(y):
        c = y[:size].reshape(M + 1, n)
        F = galerkin_residual(p, galerkin, c, y[-1])
        return np.concatenate([F.ravel(), [rd.v_star @ c[1] - a]])

    def jacobian(y):
        c = y[:size].reshape(M + 1, n)
        J = np.zeros((size + 1, size + 1))
        J[:size, :size] = galerkin_jacobian(p, galerkin, c, y[-1]).reshape(size, size)
        J[:size, -1] = galerkin_omega_derivative(p, galerkin, c, y[-1]).ravel()
        J[-1, n:2*n] = rd.v_star
        return J

    y, _ = _newton(residual, jacobian, y0, tol, max_iter, f"direct Newton (a={a:.3g})")
    return float(y[-1]), y[:size].reshape(M + 1, n)


def grid_residual(p, omega, coefficients, *, h=2*np.pi/2048):
    """Sup-norm residual of -u + k_ω*(A u + N(u)) on one period, with the
    convolution by the rescaled kernel k_ω = (1/ω)k(·/ω) done on a grid."""
    kernel = p.kernel.rescaled(omega)
    galerkin = CosineGalerkin(p.modes)
    reach = max(abs(bb) for bb in kernel.support()) + 2*np.pi
    y = np.arange(-np.ceil(reach/h), np.ceil(reach/h) + 1)*h
    u = galerkin.evaluate(coefficients, y)
    conv = kernel.convolve_grid(u @ p.A.T + p.nonlinearity(u), h)
    period = np.abs(y) <= np.pi
    return float(np.abs(-u[period] + conv[period]).max())
