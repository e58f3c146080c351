# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging
from collections import namedtuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..general import NlwavesError

log = logging.getLogger(__name__)

ELL_MAX_START = 8.
ELL_MAX_DOUBLINGS = 10
MAX_REFINED_MINIMA = 16


class TailNotDominated(ValueError, NlwavesError):
    pass


HyperbolicityReport = namedtuple('HyperbolicityReport',
                                 ['hyperbolic', 'min_abs_d', 'argmin_ell', 'ell_max'])


def tail_dominated(cf, ell):
    """Whether the symbol tail at ±ℓ is small enough that d cannot vanish
    for |Im ν| ≥ ℓ on the imaginary axis."""
    ell = abs(float(ell))
    probes = ell * np.array([1., 1.5, 2., 4.])
    nus = np.concatenate([1j*probes, -1j*probes])
    if cf.form == 'polynomial':
        z = nus + cf.shift
        coeffs = cf.coefficients
        deg = coeffs.size - 1
        leading = np.abs(coeffs[-1] * z**deg)
        rest = np.sum([np.abs(coeffs[k] * z**k) for k in range(deg)], axis=0)
        return bool(np.all(leading > 2*rest))
    K = cf.kernel.symbol(nus + cf.shift)
    k_norm = np.max(np.linalg.norm(K, ord=2, axis=(-2, -1)))
    if cf.form == 'principal_plus_kernel':
        sigma_min = np.linalg.svd(cf.A, compute_uv=False)[-1]
        return bool(k_norm < 0.5*sigma_min)
    return bool(k_norm * np.linalg.norm(cf.A, ord=2) < 0.5)


def choose_ell_max(cf, ell_max=None):
    """Half-length of the imaginary-axis window outside which the tail test
    holds. Starts at 8 and doubles when no value is given."""
    if ell_max is not None:
        if not tail_dominated(cf, ell_max):
            raise TailNotDominated(f"The symbol tail is not dominated at ℓ_max = {ell_max}.")
        return float(ell_max)
    ell = ELL_MAX_START
    for _ in range(ELL_MAX_DOUBLINGS + 1):
        if tail_dominated(cf, ell):
            return ell
        ell *= 2
    raise TailNotDominated(f"The symbol tail is not dominated up to ℓ = {ell/2:g}; "
                         + "the principal part may be singular or the symbol may not decay.")


def axis_minimum(cf, ell_max, n_samples=2001):
    """Minimum of |d(iℓ)| over [-ℓ_max, ℓ_max] and where it is attained.

    The window is sampled uniformly; the smallest local minima of the samples
    are then refined by golden-section search.
    """
    if n_samples < 3:
        raise ValueError(f"Need at least 3 samples, got {n_samples}.")
    ells = np.linspace(-ell_max, ell_max, n_samples)
    vals = np.abs(cf.eval_d(1j*ells))
    interior = np.flatnonzero((vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:])) + 1
    candidates = interior[np.argsort(vals[interior])][:MAX_REFINED_MINIMA]

    def f(ell):
        return float(np.abs(cf.eval_d(1j*ell)))

    best = int(np.argmin(vals))
    best_val, best_ell = float(vals[best]), float(ells[best])
    for idx in candidates:
        a, b, c = ells[idx - 1], ells[idx], ells[idx + 1]
        try:
            res = minimize_scalar(f, bracket=(a, b, c), method='golden', tol=1e-12)
            if not a <= res.x <= c:
                raise ValueError
        except ValueError:
            res = minimize_scalar(f, bounds=(a, c), method='bounded', options={'xatol': 1e-12})
        if res.fun < best_val:
            best_val, best_ell = float(res.fun), float(res.x)
    return best_val, best_ell


def hyperbolicity_check(cf, ell_max=None, n_samples=2001, tol=1e-8):
    """Check that d(iℓ) ≠ 0 for all real ℓ.

    Args:
        cf (CharacteristicFunction): The (limit) characteristic function.
        ell_max (float, optional): Half-length of the sampled window. The
            tail condition is verified at this value; if omitted, it is
            chosen automatically.
        n_samples (int): Uniform samples before refinement. Default 2001.
        tol (float): The operator counts as hyperbolic when the minimum
            of |d(iℓ)| exceeds 10·tol.
    Returns:
        HyperbolicityReport: (hyperbolic, min_abs_d, argmin_ell, ell_max)
    Raises:
        TailNotDominated: if no window makes the tail negligible.
    """
    ell_max = choose_ell_max(cf, ell_max)
    min_abs, argmin = axis_minimum(cf, ell_max, n_samples)
    report = HyperbolicityReport(bool(min_abs > 10*tol), min_abs, argmin, ell_max)
    log.debug(f"Hyperbolicity of {cf!r}: {report}")
    return report
