# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging

import numpy as np

from ..general import NlwavesError
from ..tools import assert_callback
from ..symbol import CharacteristicFunction, hyperbolicity_check, choose_ell_max

log = logging.getLogger(__name__)


class EndpointNotHyperbolic(ValueError, NlwavesError):
    pass


def smoothstep(t):
    """C¹ ramp 3t² - 2t³ from 0 (t ≤ 0) to 1 (t ≥ 1)."""
    t = np.clip(np.asarray(t, dtype=float), 0., 1.)
    return t*t*(3. - 2.*t)


def weighted_limits(cf, eta):
    """Limits (ξ → -∞, ξ → +∞) of an operator conjugated with the weight
    e^{η√(1+ξ²)}: the symbol argument moves by -η and +η respectively."""
    if eta < 0:
        raise ValueError(f"The weight exponent must be non-negative, got {eta}.")
    return cf.shifted(-eta), cf.shifted(eta)


def _interpolate_kernels(k0, k1, s):
    return k0.scaled(1. - s) + k1.scaled(s)


class OperatorPath:
    """A continuous family ρ ↦ CharacteristicFunction on [ρ_min, ρ_max].

    Args:
        cf_of_rho (callable): Returns the CharacteristicFunction at ρ.
        rho_min (float): Start of the parameter interval. Default 0.
        rho_max (float): End of the parameter interval. Default 1.
        strip_half_width (float): η; local counting rectangles stay inside
            |Re ν| < η/2.
        name (str, optional): Label used in ledgers and logs.
    """

    def __init__(self, cf_of_rho, rho_min=0., rho_max=1., strip_half_width=0.5, *, name=None):
        assert_callback(cf_of_rho, 1, 'cf_of_rho')
        if not rho_min < rho_max:
            raise ValueError(f"Empty parameter interval [{rho_min}, {rho_max}].")
        if not strip_half_width > 0:
            raise ValueError(f"The strip half-width must be positive, got {strip_half_width}.")
        self._cf_of_rho = cf_of_rho
        self.rho_min = float(rho_min)
        self.rho_max = float(rho_max)
        self.strip_half_width = float(strip_half_width)
        self.name = name or 'path'
        self._ell_max = None

    def __call__(self, rho):
        if not self.rho_min - 1e-12 <= rho <= self.rho_max + 1e-12:
            raise ValueError(f"ρ = {rho} is outside [{self.rho_min}, {self.rho_max}].")
        cf = self._cf_of_rho(float(rho))
        if not isinstance(cf, CharacteristicFunction):
            raise TypeError(f"cf_of_rho must return a CharacteristicFunction, got {type(cf).__name__}.")
        return cf

    @property
    def span(self):
        return self.rho_max - self.rho_min

    @property
    def ell_max(self):
        """Axis window valid along the whole path."""
        if self._ell_max is None:
            rhos = np.linspace(self.rho_min, self.rho_max, 21)
            self._ell_max = max(choose_ell_max(self(rho)) for rho in rhos)
        return self._ell_max

    def check_endpoints(self, tol=1e-8):
        for rho in (self.rho_min, self.rho_max):
            report = hyperbolicity_check(self(rho), self.ell_max, tol=tol)
            if not report.hyperbolic:
                raise EndpointNotHyperbolic(f"{self.name}: endpoint ρ = {rho} is not hyperbolic "
                                          + f"(min |d(iℓ)| = {report.min_abs_d:.3g} at "
                                          + f"ℓ = {report.argmin_ell:.6g}).")

    # Path algebra
    # ============

    def reversed(self):
        lo, hi = self.rho_min, self.rho_max
        return OperatorPath(lambda rho: self._cf_of_rho(lo + hi - rho), lo, hi, self.strip_half_width,
                            name=f"reversed({self.name})")

    def concatenate(self, other):
        """This path followed by 'other', whose parameter is shifted to
        start at this path's ρ_max."""
        joint = self.rho_max
        offset = joint - other.rho_min

        def cf_of_rho(rho):
            if rho <= joint:
                return self._cf_of_rho(rho)
            return other._cf_of_rho(rho - offset)

        return OperatorPath(cf_of_rho, self.rho_min, other.rho_max + offset,
                            min(self.strip_half_width, other.strip_half_width),
                            name=f"{self.name}+{other.name}")

    @classmethod
    def block_diagonal(cls, *paths):
        """Direct sum of paths over a common parameter interval."""
        if len({(pp.rho_min, pp.rho_max) for pp in paths}) != 1:
            raise ValueError("Paths must share the parameter interval to be stacked.")
        return cls(lambda rho: CharacteristicFunction.block_diagonal(*[pp._cf_of_rho(rho) for pp in paths]),
                   paths[0].rho_min, paths[0].rho_max, min(pp.strip_half_width for pp in paths),
                   name='⊕'.join(pp.name for pp in paths))

    @classmethod
    def constant(cls, cf, strip_half_width=0.5, rho_min=0., rho_max=1., name=None):
        return cls(lambda rho: cf, rho_min, rho_max, strip_half_width, name=name or 'constant')

    @classmethod
    def homotopy(cls, cf0, cf1, strip_half_width=0.5, rho_min=0., rho_max=1., *, profile=smoothstep,
                 name=None):
        """Interpolate principal part and kernel coefficients between two
        characteristic functions of the same form and shift."""
        if cf0.form != cf1.form or cf0.shift != cf1.shift or cf0.form == 'polynomial':
            raise ValueError("Homotopies need two kernel-based characteristic functions "
                           + "with equal form and shift.")
        span = rho_max - rho_min

        def cf_of_rho(rho):
            s = float(profile((rho - rho_min)/span))
            return CharacteristicFunction(cf0.form, (1 - s)*cf0.A + s*cf1.A,
                                          _interpolate_kernels(cf0.kernel, cf1.kernel, s), shift=cf0.shift)

        return cls(cf_of_rho, rho_min, rho_max, strip_half_width, name=name or 'homotopy')

    @classmethod
    def shift_sweep(cls, cf, shift_start, shift_end, strip_half_width=0.5, rho_min=0., rho_max=1., *,
                    name=None):
        """Move the symbol argument shift linearly from shift_start to shift_end."""
        span = rho_max - rho_min

        def cf_of_rho(rho):
            t = (rho - rho_min)/span
            return cf.shifted((1 - t)*shift_start + t*shift_end)

        return cls(cf_of_rho, rho_min, rho_max, strip_half_width, name=name or 'shift_sweep')

    @classmethod
    def limit_path(cls, cf_minus, cf_plus, eta, strip_half_width=None, *, name=None):
        """Path joining the limits of an operator conjugated with the weight
        e^{η√(1+ξ²)}.

        Leg 1 (ρ ∈ [0, 1]) moves the shift from -η to +η at the ξ → -∞
        data; leg 2 (ρ ∈ [1, 2]) deforms the ξ → -∞ data into the ξ → +∞
        data at shift +η. Without a weight only leg 2 remains.
        """
        strip_half_width = strip_half_width or max(eta, 0.5*min(cf_minus.decay_rate, cf_plus.decay_rate, 1.))
        name = name or 'limit_path'
        leg2 = cls.homotopy(cf_minus.shifted(eta), cf_plus.shifted(eta), strip_half_width, 1., 2.,
                            name=f"{name}:data")
        if eta == 0:
            return leg2
        leg1 = cls.shift_sweep(cf_minus, -eta, eta, strip_half_width, 0., 1., name=f"{name}:weight")
        return leg1.concatenate(leg2)

    def to_dict(self):
        return {'name': self.name, 'rho_min': self.rho_min, 'rho_max': self.rho_max,
                'strip_half_width': self.strip_half_width,
                'start': self(self.rho_min).to_dict(), 'end': self(self.rho_max).to_dict()}

    def __repr__(self):
        return f"OperatorPath({self.name!r}, [{self.rho_min}, {self.rho_max}], η={self.strip_half_width})"
