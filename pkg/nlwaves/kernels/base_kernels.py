# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import numpy as np
from math import factorial, log, sqrt, pi


# Relative kernel weight below which grid convolutions are truncated
TRUNCATION_THRESHOLD = 1e-14


class BaseKernel:
    """Scalar kernel profile with a closed-form symbol

        k̂(ν) = ∫ k(x) e^{-νx} dx,

    analytic in the strip |Re ν| < decay_rate.
    """

    family = None

    def __call__(self, x):
        raise NotImplementedError

    def derivative(self, x):
        """k'(x); at a kink the average of both one-sided values."""
        raise NotImplementedError

    def symbol(self, nu):
        raise NotImplementedError

    def symbol_derivative(self, nu):
        raise NotImplementedError

    def taylor_coefficients(self, max_order):
        """Coefficients c_m of k̂(ν) = Σ c_m ν^m for m = 0..max_order."""
        raise NotImplementedError

    @property
    def decay_rate(self):
        return np.inf

    @property
    def is_even(self):
        return True

    @property
    def length_scale(self):
        raise NotImplementedError

    @property
    def peak(self):
        return float(self(np.array([self.peak_location]))[0])

    @property
    def peak_location(self):
        return 0.

    def support(self, threshold=TRUNCATION_THRESHOLD):
        """Interval outside which |k| < threshold·peak."""
        raise NotImplementedError

    def kink_jumps(self):
        """Jumps (J1, J2) of k' and k'' across x = 0, i.e. k'(0+) - k'(0-)."""
        return 0., 0.

    @property
    def parameters(self):
        raise NotImplementedError

    def to_dict(self):
        return {'family': self.family, 'parameters': dict(self.parameters)}

    def __eq__(self, other):
        return type(self) is type(other) and self.parameters == other.parameters

    def __hash__(self):
        return hash((self.family, tuple(sorted(self.parameters.items()))))

    def __repr__(self):
        args = ', '.join(f"{kk}={vv!r}" for kk, vv in self.parameters.items())
        return f"{type(self).__name__}({args})"


class Gaussian(BaseKernel):
    family = 'gaussian'

    def __init__(self, sigma=1.):
        if not sigma > 0:
            raise ValueError(f"Gaussian width must be positive, got {sigma}.")
        self.sigma = float(sigma)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        s2 = self.sigma**2
        return np.exp(-x**2/(2*s2)) / np.sqrt(2*pi*s2)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return -x/self.sigma**2 * self(x)

    def symbol(self, nu):
        nu = np.asarray(nu, dtype=complex)
        return np.exp(nu**2 * self.sigma**2 / 2)

    def symbol_derivative(self, nu):
        nu = np.asarray(nu, dtype=complex)
        return nu * self.sigma**2 * self.symbol(nu)

    def taylor_coefficients(self, max_order):
        coeffs = np.zeros(max_order + 1)
        half = self.sigma**2 / 2
        for m in range(0, max_order//2 + 1):
            coeffs[2*m] = half**m / factorial(m)
        return coeffs

    @property
    def length_scale(self):
        return self.sigma

    def support(self, threshold=TRUNCATION_THRESHOLD):
        radius = self.sigma * sqrt(-2*log(threshold))
        return -radius, radius

    @property
    def parameters(self):
        return {'sigma': self.sigma}


class TwoSidedExponential(BaseKernel):
    family = 'two_sided_exponential'

    def __init__(self, rate=1.):
        if not rate > 0:
            raise ValueError(f"Exponential rate must be positive, got {rate}.")
        self.rate = float(rate)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.rate/2 * np.exp(-self.rate*np.abs(x))

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return -self.rate * np.sign(x) * self(x)

    def symbol(self, nu):
        nu = np.asarray(nu, dtype=complex)
        lam2 = self.rate**2
        return lam2 / (lam2 - nu**2)

    def symbol_derivative(self, nu):
        nu = np.asarray(nu, dtype=complex)
        lam2 = self.rate**2
        return 2*lam2*nu / (lam2 - nu**2)**2

    def taylor_coefficients(self, max_order):
        coeffs = np.zeros(max_order + 1)
        coeffs[::2] = self.rate**(-np.arange(0, max_order + 1, 2, dtype=float))
        return coeffs

    @property
    def decay_rate(self):
        return self.rate

    @property
    def length_scale(self):
        return 1/self.rate

    def support(self, threshold=TRUNCATION_THRESHOLD):
        radius = -log(threshold) / self.rate
        return -radius, radius

    def kink_jumps(self):
        # k'(0±) = ∓λ²/2, k'' is continuous
        return -self.rate**2, 0.

    @property
    def parameters(self):
        return {'rate': self.rate}


class ShiftedGaussianBump(BaseKernel):
    """The localized bump (1/√π) e^{-(x - c)²}."""

    family = 'shifted_gaussian_bump'

    def __init__(self, center=0.):
        self.center = float(center)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-(x - self.center)**2) / sqrt(pi)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return -2*(x - self.center) * self(x)

    def symbol(self, nu):
        nu = np.asarray(nu, dtype=complex)
        return np.exp(-nu*self.center + nu**2/4)

    def symbol_derivative(self, nu):
        nu = np.asarray(nu, dtype=complex)
        return (-self.center + nu/2) * self.symbol(nu)

    def taylor_coefficients(self, max_order):
        shift = np.array([(-self.center)**p / factorial(p) for p in range(max_order + 1)])
        spread = np.zeros(max_order + 1)
        for q in range(0, max_order//2 + 1):
            spread[2*q] = 1 / (4**q * factorial(q))
        return np.convolve(shift, spread)[:max_order + 1]

    @property
    def is_even(self):
        return self.center == 0

    @property
    def length_scale(self):
        return 1/sqrt(2)

    @property
    def peak_location(self):
        return self.center

    def support(self, threshold=TRUNCATION_THRESHOLD):
        radius = sqrt(-log(threshold))
        return self.center - radius, self.center + radius

    @property
    def parameters(self):
        return {'center': self.center}


class ScaledKernel(BaseKernel):
    """The L¹-preserving rescaling (1/s) b(x/s) of a base kernel b."""

    family = 'scaled'

    def __init__(self, base, scale):
        if not scale > 0:
            raise ValueError(f"Scale must be positive, got {scale}.")
        if isinstance(base, ScaledKernel):
            scale = scale * base.scale
            base = base.base
        self.base = base
        self.scale = float(scale)

    def __call__(self, x):
        return self.base(np.asarray(x, dtype=float)/self.scale) / self.scale

    def derivative(self, x):
        return self.base.derivative(np.asarray(x, dtype=float)/self.scale) / self.scale**2

    def symbol(self, nu):
        return self.base.symbol(self.scale*np.asarray(nu, dtype=complex))

    def symbol_derivative(self, nu):
        return self.scale * self.base.symbol_derivative(self.scale*np.asarray(nu, dtype=complex))

    def taylor_coefficients(self, max_order):
        return self.base.taylor_coefficients(max_order) * self.scale**np.arange(max_order + 1)

    @property
    def decay_rate(self):
        return self.base.decay_rate / self.scale

    @property
    def is_even(self):
        return self.base.is_even

    @property
    def length_scale(self):
        return self.scale * self.base.length_scale

    @property
    def peak_location(self):
        return self.scale * self.base.peak_location

    def support(self, threshold=TRUNCATION_THRESHOLD):
        lo, hi = self.base.support(threshold)
        return self.scale*lo, self.scale*hi

    def kink_jumps(self):
        j1, j2 = self.base.kink_jumps()
        return j1/self.scale**2, j2/self.scale**3

    @property
    def parameters(self):
        return {'scale': self.scale, **self.base.parameters}

    def to_dict(self):
        return {'family': self.base.family, 'parameters': dict(self.base.parameters),
                'scale': self.scale}

    def __eq__(self, other):
        return isinstance(other, ScaledKernel) and self.base == other.base \
               and self.scale == other.scale

    def __hash__(self):
        return hash((self.family, self.base, self.scale))

    def __repr__(self):
        return f"ScaledKernel({self.base!r}, scale={self.scale!r})"


_families = {cls.family: cls for cls in (Gaussian, TwoSidedExponential, ShiftedGaussianBump)}


def base_kernel_from_dict(spec):
    """Build a base kernel from a {family, parameters[, scale]} record."""
    try:
        cls = _families[spec['family']]
    except KeyError:
        raise ValueError(f"Unknown kernel family {spec.get('family')!r}; "
                       + f"expected one of {sorted(_families)}.") from None
    base = cls(**spec.get('parameters', {}))
    if 'scale' in spec:
        base = ScaledKernel(base, spec['scale'])
    return base
