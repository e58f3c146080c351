# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging
import warnings

import numpy as np

from ..general import NumericalWarning
from ..tools import assert_callback
from ..kernels import KernelModel
from ..symbol import CharacteristicFunction

log = logging.getLogger(__name__)

DEFAULT_MODES = 32


class Nonlinearity:
    """Pointwise map N with its Jacobian, acting on fields of shape (..., n).

    Args:
        value (callable): u ↦ N(u), shape (..., n) to (..., n).
        jacobian (callable): u ↦ N'(u), shape (..., n) to (..., n, n).
        dimension (int): n.
        name (str): Label for configs and manifests.
    """

    def __init__(self, value, jacobian, dimension=1, *, name='custom', spec=None):
        assert_callback(value, 1, 'value')
        assert_callback(jacobian, 1, 'jacobian')
        self._value = value
        self._jacobian = jacobian
        self.dimension = int(dimension)
        self.name = name
        self._spec = spec
        zero = np.zeros(self.dimension)
        if np.abs(self(zero)).max() > 1e-14 or np.abs(self.jacobian(zero)).max() > 1e-14:
            raise ValueError("The nonlinearity must satisfy N(0) = 0 and N'(0) = 0.")

    def __call__(self, u):
        return np.asarray(self._value(np.asarray(u, dtype=float)), dtype=float)

    def jacobian(self, u):
        return np.asarray(self._jacobian(np.asarray(u, dtype=float)), dtype=float)

    @classmethod
    def polynomial(cls, coefficients, dimension=1):
        """Componentwise N(u) = Σ_k c_k u^k, coefficients listed from degree 2."""
        coeffs = np.asarray(coefficients, dtype=float)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("Give at least one coefficient (degree 2 upwards).")
        degrees = np.arange(2, 2 + coeffs.size)

        def value(u):
            return sum(cc * u**k for cc, k in zip(coeffs, degrees))

        def jacobian(u):
            diag = sum(cc * k * u**(k - 1) for cc, k in zip(coeffs, degrees))
            return diag[..., None] * np.eye(u.shape[-1])

        return cls(value, jacobian, dimension, name='polynomial',
                   spec={'form': 'polynomial', 'coefficients': coeffs.tolist()})

    @classmethod
    def quadratic(cls, coefficient=1., dimension=1):
        nl = cls.polynomial([coefficient], dimension)
        nl.name = 'quadratic'
        nl._spec = {'form': 'quadratic', 'coefficient': float(coefficient)}
        return nl

    @classmethod
    def cubic(cls, coefficient=1., dimension=1):
        nl = cls.polynomial([0., coefficient], dimension)
        nl.name = 'cubic'
        nl._spec = {'form': 'cubic', 'coefficient': float(coefficient)}
        return nl

    @classmethod
    def from_dict(cls, spec, dimension=1):
        form = spec.get('form')
        if form == 'quadratic':
            return cls.quadratic(spec.get('coefficient', 1.), dimension)
        if form == 'cubic':
            return cls.cubic(spec.get('coefficient', 1.), dimension)
        if form == 'polynomial':
            return cls.polynomial(spec['coefficients'], dimension)
        raise ValueError(f"Unknown nonlinearity form {form!r}; expected quadratic, cubic or polynomial.")

    def to_dict(self):
        if self._spec is None:
            raise ValueError(f"Nonlinearity {self.name!r} was built from callables and has no record form.")
        return dict(self._spec)

    def __repr__(self):
        return f"Nonlinearity({self.name!r}, n={self.dimension})"


class WaveProblem:
    """Steady problem 0 = -u + k*(A u + N(u)) for even 2π/ω-periodic u.

    Args:
        A (array): Invertible n×n matrix.
        kernel (KernelModel): Even kernel.
        nonlinearity (Nonlinearity): Pointwise N with N(0) = 0, N'(0) = 0.
        modes (int): Cosine modes 0..M of the Galerkin truncation.
    """

    def __init__(self, A, kernel, nonlinearity, modes=DEFAULT_MODES):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        if not isinstance(kernel, KernelModel):
            raise TypeError(f"Expected a KernelModel, got {type(kernel).__name__}.")
        if A.shape != (kernel.dimension, kernel.dimension) or nonlinearity.dimension != kernel.dimension:
            raise ValueError(f"Dimensions of A {A.shape}, kernel ({kernel.dimension}) and nonlinearity "
                           + f"({nonlinearity.dimension}) do not match.")
        if not kernel.is_even:
            raise ValueError("Wave trains need a reversible problem: the kernel must be even.")
        if int(modes) < 4:
            raise ValueError(f"Use at least 4 cosine modes, got {modes}.")
        self.A = A
        self.kernel = kernel
        self.nonlinearity = nonlinearity
        self.modes = int(modes)
        self.condition_number = float(np.linalg.cond(A))
        if not np.isfinite(self.condition_number) or self.condition_number > 1e12:
            raise ValueError(f"A is not invertible (condition number {self.condition_number:.3g}).")
        if self.condition_number > 1e8:
            warnings.warn(f"A is ill-conditioned (condition number {self.condition_number:.3g}).",
                          NumericalWarning)
        self.A_inv = np.linalg.inv(A)

    @property
    def dimension(self):
        return self.kernel.dimension

    @property
    def characteristic(self):
        return CharacteristicFunction('steady_state', self.A, self.kernel)

    def with_modes(self, modes):
        return WaveProblem(self.A, self.kernel, self.nonlinearity, modes)

    def v_form(self):
        """(K, g) with K = k·A and g = A⁻¹N, so that the problem reads
        0 = -v + K*(v + g(v))."""
        A_inv = self.A_inv
        nl = self.nonlinearity
        g = Nonlinearity(lambda v: nl(v) @ A_inv.T, lambda v: A_inv @ nl.jacobian(v),
                         self.dimension, name=f"A⁻¹·{nl.name}")
        return self.kernel.times(self.A), g

    @property
    def spectral_radius(self):
        return float(np.max(np.abs(np.linalg.eigvals(self.A))))

    def to_dict(self):
        return {'A': self.A.tolist(), 'kernel': self.kernel.to_dict(),
                'nonlinearity': self.nonlinearity.to_dict(), 'modes': self.modes}

    def __repr__(self):
        return f"WaveProblem(n={self.dimension}, modes={self.modes}, nonlinearity={self.nonlinearity.name!r})"
