# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..general import NlwavesError

log = logging.getLogger(__name__)

MAX_CORRECTOR_ITERATIONS = 5
COLLISION_THRESHOLD = 1e-8


class RootCollision(ArithmeticError, NlwavesError):
    pass

class LeftStrip(ArithmeticError, NlwavesError):
    pass

class ContinuationStalled(RuntimeError, NlwavesError):
    pass


@dataclass
class RootTrajectory:
    rho: np.ndarray
    nu: np.ndarray

    def __len__(self):
        return len(self.rho)

    @property
    def end(self):
        return complex(self.nu[-1])

    def crossing_speed(self):
        """Finite-difference estimate of Re ν̇ along the trajectory."""
        return np.gradient(self.nu.real, self.rho)

    def to_frame(self):
        return pd.DataFrame({'rho': self.rho, 're_nu': self.nu.real, 'im_nu': self.nu.imag})


def _correct(cf, nu, tol):
    """Newton on d(ν) = 0. Returns (ν, iterations) or (None, iterations)
    when more than MAX_CORRECTOR_ITERATIONS steps would be needed."""
    for it in range(1, MAX_CORRECTOR_ITERATIONS + 1):
        dp = cf.eval_d_derivative(nu)
        if abs(dp) < COLLISION_THRESHOLD:
            raise RootCollision(f"|d'(ν)| = {abs(dp):.3g} at ν = {nu:.10g}: the continued root "
                              + "is colliding with another root.")
        step = cf.eval_d(nu) / dp
        nu = nu - step
        if abs(step) < tol*max(1., abs(nu)):
            return complex(nu), it
    return None, MAX_CORRECTOR_ITERATIONS


def continue_root(path, rho0, nu0, rho1, max_step=0.05, *, tol=1e-12, min_step=1e-10):
    """Follow a simple root of d^ρ from (ρ0, ν0) to ρ1.

    Secant predictor, Newton corrector; the step is halved whenever the
    corrector needs more than five iterations and regrown after success.

    Returns:
        RootTrajectory: Accepted (ρ, ν) samples, starting at the polished ν0.
    Raises:
        RootCollision: if |d'(ν)| < 1e-8 along the way.
        LeftStrip: if |Re ν| reaches the path's strip half-width η.
    """
    if not max_step > 0:
        raise ValueError(f"max_step must be positive, got {max_step}.")
    direction = np.sign(rho1 - rho0)
    nu, _ = _correct(path(rho0), complex(nu0), tol)
    if nu is None:
        raise ContinuationStalled(f"ν0 = {nu0} is not close enough to a root at ρ = {rho0}.")
    rhos, nus = [float(rho0)], [nu]
    step = max_step
    while direction != 0 and direction*(rho1 - rhos[-1]) > 0:
        h = min(step, abs(rho1 - rhos[-1]))
        rho = rhos[-1] + direction*h
        if len(rhos) > 1:
            slope = (nus[-1] - nus[-2]) / (rhos[-1] - rhos[-2])
            guess = nus[-1] + slope*(rho - rhos[-1])
        else:
            guess = nus[-1]
        corrected, _ = _correct(path(rho), guess, tol)
        if corrected is None:
            step = h/2
            log.debug(f"Corrector stalled at ρ = {rho:.8g}; step halved to {step:.3e}")
            if step < min_step:
                raise ContinuationStalled(f"Step fell below {min_step:g} at ρ = {rhos[-1]:.10g}.")
            continue
        if abs(corrected.real) >= path.strip_half_width:
            raise LeftStrip(f"Root {corrected:.8g} left the strip |Re ν| < {path.strip_half_width} "
                          + f"at ρ = {rho:.8g}.")
        rhos.append(rho)
        nus.append(corrected)
        step = min(2*h, max_step)
    return RootTrajectory(np.array(rhos), np.array(nus))
