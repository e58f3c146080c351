# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..general import NlwavesError, NumericalWarning
from .galerkin import CosineGalerkin
from .reduction import reduced_data, fixed_point_omega, direct_newton, galerkin_residual, \
                       galerkin_jacobian, galerkin_omega_derivative, grid_residual, NewtonDiverged

log = logging.getLogger(__name__)

RETURN_DISTANCE = 1e-6
NOISE_MODES = 8


@dataclass
class BranchPoint:
    a: float
    omega: float
    omega_direct: float
    coeffs: np.ndarray
    coeffs_direct: np.ndarray
    residual: float
    residual_direct: float
    grid_residual: float
    discrepancy: float
    contraction_ratio: float
    sup_norm: float
    psi_norm: float

    def to_dict(self):
        return {'a': self.a, 'omega': self.omega, 'omega_direct': self.omega_direct,
                'coeffs': self.coeffs.tolist(), 'coeffs_direct': self.coeffs_direct.tolist()}


@dataclass
class WaveBranch:
    """Amplitude-ordered points of the periodic branch bifurcating at ω*."""
    reduced: object
    points: list = field(default_factory=list)
    truncated: bool = False

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def amplitudes(self):
        return np.array([pt.a for pt in self.points])

    @property
    def max_residual(self):
        return max((max(pt.residual, pt.residual_direct) for pt in self.points), default=0.)

    def to_frame(self):
        """Branch table with the bifurcation point (a = 0, ω*) as first row."""
        columns = ['a', 'omega', 'omega_direct', 'sup_norm', 'psi_norm', 'residual', 'residual_direct',
                   'grid_residual', 'discrepancy', 'contraction_ratio']
        origin = {cc: 0. for cc in columns}
        origin.update(omega=self.reduced.omega_star, omega_direct=self.reduced.omega_star)
        rows = [origin] + [{cc: getattr(pt, cc) for cc in columns} for pt in self.points]
        return pd.DataFrame(rows, columns=columns)

    def to_dict(self):
        return {'reduced': self.reduced.to_dict(), 'truncated': self.truncated,
                'points': [pt.to_dict() for pt in self.points]}


def _branch_point(p, rd, galerkin, a, previous):
    fp = fixed_point_omega(p, rd, a)
    coeffs = fp.psi.copy()
    coeffs[1] += a*rd.v_star
    if previous is None:
        omega_direct, coeffs_direct = direct_newton(p, a, rd=rd)
    else:
        # warm start scaled from the previous amplitude
        guess = previous.coeffs_direct.copy()
        guess[1] *= a/previous.a
        omega_direct, coeffs_direct = direct_newton(p, a, guess, rd=rd, omega0=previous.omega_direct)
    return BranchPoint(
        a=a, omega=fp.omega, omega_direct=omega_direct, coeffs=coeffs, coeffs_direct=coeffs_direct,
        residual=float(np.abs(galerkin_residual(p, galerkin, coeffs, fp.omega)).max()),
        residual_direct=float(np.abs(galerkin_residual(p, galerkin, coeffs_direct, omega_direct)).max()),
        grid_residual=grid_residual(p, omega_direct, coeffs_direct),
        discrepancy=float(np.abs(coeffs - coeffs_direct).max()),
        contraction_ratio=fp.contraction_ratio,
        sup_norm=galerkin.sup_norm(coeffs),
        psi_norm=galerkin.sup_norm(fp.psi),
    )


def continue_branch(p, a_max=0.05, steps=10, *, rd=None):
    """Continue the periodic branch over a = a_max·k/steps, k = 1..steps.

    Every point is computed twice: by the contraction ω ← ω* + R(ω, a)
    with the Lyapunov-Schmidt range part, and by the full Galerkin-Newton
    solve. The branch stops at the first failure; the points computed so
    far are returned with 'truncated' set.
    """
    if steps < 1 or not a_max > 0:
        raise ValueError(f"Need a_max > 0 and at least one step, got a_max={a_max}, steps={steps}.")
    rd = rd or reduced_data(p)
    galerkin = CosineGalerkin(p.modes)
    branch = WaveBranch(rd)
    previous = None
    for a in a_max*np.arange(1, steps + 1)/steps:
        try:
            point = _branch_point(p, rd, galerkin, float(a), previous)
        except NlwavesError as err:
            warnings.warn(f"Branch truncated at a = {a:.4g} after {len(branch)} points: "
                        + f"{type(err).__name__}: {err}", NumericalWarning)
            branch.truncated = True
            break
        except ValueError as err:
            warnings.warn(f"Branch truncated at a = {a:.4g}: {err}", NumericalWarning)
            branch.truncated = True
            break
        log.info(f"a = {point.a:.4g}: ω = {point.omega:.12g}, LS/direct {point.discrepancy:.2e}, "
               + f"residual {point.residual:.2e}")
        branch.points.append(point)
        previous = point
    return branch


# Uniqueness probe
# ================

@dataclass
class UniquenessReport:
    trials: int
    noise: float
    records: pd.DataFrame
    relative: bool = False

    @property
    def returned(self):
        return int(self.records['returned'].sum())

    @property
    def fraction(self):
        return self.returned / self.trials if self.trials else 1.

    @property
    def escapes(self):
        return self.records[~self.records['returned']]

    def to_dict(self):
        return {'trials': self.trials, 'noise': self.noise, 'relative': self.relative,
                'returned': self.returned, 'fraction': self.fraction}


def _gauss_newton(p, galerkin, c, omega, tol=1e-12, max_iter=50):
    """Minimum-norm Newton steps on F(c, ω) = 0 with ω free."""
    M, n = galerkin.M, p.dimension
    size = (M + 1)*n
    for _ in range(max_iter):
        F = galerkin_residual(p, galerkin, c, omega).ravel()
        if np.abs(F).max() < tol:
            return c, omega
        J = np.empty((size, size + 1))
        J[:, :size] = galerkin_jacobian(p, galerkin, c, omega).reshape(size, size)
        J[:, -1] = galerkin_omega_derivative(p, galerkin, c, omega).ravel()
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        if not np.all(np.isfinite(step)) or np.abs(step).max() > 1e3:
            break
        c = c + step[:size].reshape(M + 1, n)
        omega = omega + step[-1]
        if not omega > 0:
            break
    raise NewtonDiverged(f"Gauss-Newton with free ω did not converge from ω = {omega:.6g}.")


def uniqueness_probe(p, branch, trials=50, noise=0.1, seed=0, *, relative=False):
    """Perturb branch points and check that Newton with ω free returns to the branch.

    Each trial picks a branch point at amplitude a, adds even noise on the
    cosine modes up to 8 with sup norm 'noise' (noise·a when 'relative'),
    and runs Gauss-Newton. A
    converged solution with first-mode amplitude a' (made positive by the
    half-period shift) is compared to the branch point computed directly
    at a'. Failures are recorded, never raised.
    """
    if not branch.points:
        raise ValueError("The branch has no points to probe.")
    rd = branch.reduced
    galerkin = CosineGalerkin(p.modes)
    rng = np.random.default_rng(seed)
    top = min(NOISE_MODES, p.modes)
    records = []
    for trial in range(trials):
        point = branch.points[rng.integers(len(branch.points))]
        perturbation = np.zeros_like(point.coeffs_direct)
        perturbation[:top + 1] = rng.standard_normal((top + 1, p.dimension))
        size = galerkin.sup_norm(perturbation)
        target = noise*point.a if relative else noise
        if target > 0 and size > 0:
            perturbation *= target/size
        else:
            perturbation[:] = 0.
        record = {'trial': trial, 'a': point.a, 'perturbation': galerkin.sup_norm(perturbation),
                  'a_returned': np.nan, 'omega': np.nan, 'distance': np.nan,
                  'shifted': False, 'converged': False, 'returned': False}
        try:
            c, omega = _gauss_newton(p, galerkin, point.coeffs_direct + perturbation, point.omega_direct)
        except (NlwavesError, np.linalg.LinAlgError):
            records.append(record)
            continue
        record['converged'] = True
        a_new = float(rd.v_star @ c[1])
        if a_new < 0:
            c, a_new = galerkin.pi_shift(c), -a_new
            record['shifted'] = True
        record.update(a_returned=a_new, omega=omega)
        try:
            if a_new < RETURN_DISTANCE:
                distance = galerkin.sup_norm(c)
            else:
                omega_ref, c_ref = direct_newton(p, a_new, rd=rd)
                distance = max(float(np.abs(c - c_ref).max()), abs(omega - omega_ref))
        except (NlwavesError, ValueError) as err:
            log.debug(f"Trial {trial}: no branch reference at a = {a_new:.4g} ({err})")
            records.append(record)
            continue
        record['distance'] = distance
        record['returned'] = bool(distance < RETURN_DISTANCE)
        if not record['returned']:
            log.warning(f"Trial {trial} escaped the branch: distance {distance:.3e} at a = {a_new:.4g}")
        records.append(record)
    report = UniquenessReport(trials, noise, pd.DataFrame(records), relative)
    log.info(f"Uniqueness probe: {report.returned}/{trials} trials returned to the branch")
    return report
