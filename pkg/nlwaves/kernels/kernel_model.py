# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from math import factorial

import numpy as np
from scipy.integrate import quad
from scipy.signal import fftconvolve

from ..general import NlwavesError
from .base_kernels import BaseKernel, Gaussian, ScaledKernel, base_kernel_from_dict, \
                          TRUNCATION_THRESHOLD


class StripViolation(ValueError, NlwavesError):
    """A symbol was requested outside its strip of analyticity."""


class KernelModel:
    """Matrix convolution kernel K(x) = Σ_t C_t b_t(x) built from closed-form
    base profiles b_t and real n×n coefficient matrices C_t.

    The symbol convention is K̂(ν) = ∫ K(x) e^{-νx} dx, so that convolving
    e^{νx}v gives K̂(ν) e^{νx} v.

    Args:
        terms (iterable): Pairs (coefficient, base) where coefficient is a
            scalar or an n×n array and base a BaseKernel.
    """

    def __init__(self, terms):
        cleaned = []
        dimension = None
        for coefficient, base in terms:
            if not isinstance(base, BaseKernel):
                raise TypeError(f"Expected a BaseKernel, got {type(base).__name__}.")
            coefficient = np.atleast_2d(np.asarray(coefficient, dtype=float))
            if coefficient.ndim != 2 or coefficient.shape[0] != coefficient.shape[1]:
                raise ValueError(f"Coefficient matrices must be square, got shape {coefficient.shape}.")
            if dimension is None:
                dimension = coefficient.shape[0]
            elif coefficient.shape[0] != dimension:
                raise ValueError("All coefficient matrices must have the same dimension "
                               + f"({dimension}), got {coefficient.shape[0]}.")
            coefficient.setflags(write=False)
            cleaned.append((coefficient, base))
        if not cleaned:
            raise ValueError("A KernelModel needs at least one term.")
        self._terms = tuple(cleaned)
        self._dimension = dimension

    @classmethod
    def scalar(cls, base, coefficient=1.):
        return cls([(coefficient, base)])

    @classmethod
    def zero(cls, dimension=1):
        return cls([(np.zeros((dimension, dimension)), Gaussian(1.))])

    @classmethod
    def from_dict(cls, records):
        """Build from a list of {family, parameters, coefficient[, scale]}."""
        if isinstance(records, dict):
            records = [records]
        return cls([(rec.get('coefficient', 1.), base_kernel_from_dict(rec)) for rec in records])

    def to_dict(self):
        return [{**base.to_dict(), 'coefficient': coefficient.tolist()}
                for coefficient, base in self._terms]

    @classmethod
    def block_diagonal(cls, *kernels):
        """Direct sum of kernels acting on stacked components."""
        sizes = [kk.dimension for kk in kernels]
        total = sum(sizes)
        terms = []
        start = 0
        for kernel, size in zip(kernels, sizes):
            for coefficient, base in kernel.terms:
                embedded = np.zeros((total, total))
                embedded[start:start+size, start:start+size] = coefficient
                terms.append((embedded, base))
            start += size
        return cls(terms)

    @property
    def terms(self):
        return self._terms

    @property
    def dimension(self):
        return self._dimension

    @property
    def decay_rate(self):
        """Half-width η0 of the strip where the symbol is analytic."""
        return min(base.decay_rate for _, base in self._terms)

    @property
    def is_even(self):
        return all(base.is_even for coefficient, base in self._terms if np.any(coefficient))

    @property
    def length_scale(self):
        return min(base.length_scale for _, base in self._terms)

    def support(self, threshold=TRUNCATION_THRESHOLD):
        active = [base for coefficient, base in self._terms if np.any(coefficient)]
        if not active:
            return 0., 0.
        bounds = np.array([base.support(threshold) for base in active])
        return bounds[:, 0].min(), bounds[:, 1].max()

    def __add__(self, other):
        if not isinstance(other, KernelModel):
            return NotImplemented
        if other.dimension != self.dimension:
            raise ValueError("Cannot add kernels of different dimension.")
        return KernelModel(self._terms + other.terms)

    def scaled(self, factor):
        """Kernel with every coefficient left-multiplied by 'factor'."""
        factor = np.asarray(factor, dtype=float)
        return KernelModel([(factor @ cc if factor.ndim == 2 else factor*cc, base)
                            for cc, base in self._terms])

    def times(self, A):
        """The kernel K(x)·A."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        return KernelModel([(cc @ A, base) for cc, base in self._terms])

    def rescaled(self, scale):
        """The rescaled kernel (1/s) K(x/s), whose symbol is K̂(sν)."""
        return KernelModel([(cc, ScaledKernel(base, scale)) for cc, base in self._terms])

    # Pointwise evaluation
    # ====================

    def evaluate(self, x):
        """K(x) as an array of shape x.shape + (n, n)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape + (self._dimension, self._dimension))
        for coefficient, base in self._terms:
            out += base(x)[..., None, None] * coefficient
        return out

    def derivative(self, x):
        """K'(x), averaged at kinks."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape + (self._dimension, self._dimension))
        for coefficient, base in self._terms:
            out += base.derivative(x)[..., None, None] * coefficient
        return out

    def kink_jumps(self):
        """Matrices (J1, J2): jumps of K' and K'' across the origin."""
        j1 = np.zeros((self._dimension, self._dimension))
        j2 = np.zeros_like(j1)
        for coefficient, base in self._terms:
            b1, b2 = base.kink_jumps()
            j1 += b1*coefficient
            j2 += b2*coefficient
        return j1, j2

    # Symbol
    # ======

    def check_strip(self, nu):
        re = np.abs(np.real(np.asarray(nu, dtype=complex)))
        if np.any(re >= self.decay_rate):
            raise StripViolation(f"|Re ν| = {np.max(re):.6g} is outside the strip of "
                               + f"analyticity |Re ν| < {self.decay_rate:.6g}.")

    def symbol(self, nu):
        """K̂(ν) with shape nu.shape + (n, n)."""
        self.check_strip(nu)
        nu = np.asarray(nu, dtype=complex)
        out = np.zeros(nu.shape + (self._dimension, self._dimension), dtype=complex)
        for coefficient, base in self._terms:
            out += base.symbol(nu)[..., None, None] * coefficient
        return out

    def symbol_derivative(self, nu):
        """dK̂/dν with shape nu.shape + (n, n)."""
        self.check_strip(nu)
        nu = np.asarray(nu, dtype=complex)
        out = np.zeros(nu.shape + (self._dimension, self._dimension), dtype=complex)
        for coefficient, base in self._terms:
            out += base.symbol_derivative(nu)[..., None, None] * coefficient
        return out

    def moments(self, max_order):
        """Moments ∫ x^m K(x) dx = (-1)^m K̂^{(m)}(0), for m = 0..max_order."""
        if max_order < 0:
            raise ValueError(f"max_order must be non-negative, got {max_order}.")
        result = []
        taylor = [(cc, base.taylor_coefficients(max_order)) for cc, base in self._terms]
        for m in range(max_order + 1):
            mat = sum(coeffs[m]*cc for cc, coeffs in taylor)
            result.append((-1)**m * factorial(m) * mat)
        return result

    def weighted_l1_norm(self, eta):
        """Largest entry of ∫ |K_jk(x)| e^{η|x|} dx."""
        if eta < 0:
            raise ValueError(f"The weight exponent must be non-negative, got {eta}.")
        if eta >= self.decay_rate:
            raise StripViolation(f"Weight η = {eta} is not below the decay rate {self.decay_rate}.")
        lo, hi = self.support()
        breaks = sorted({min(lo, 0.), 0., max(hi, 0.)})
        intervals = [(-np.inf, breaks[0])] + list(zip(breaks[:-1], breaks[1:])) \
                  + [(breaks[-1], np.inf)]
        norms = np.zeros((self._dimension, self._dimension))
        for jj in range(self._dimension):
            for kk in range(self._dimension):
                entries = [(cc[jj, kk], base) for cc, base in self._terms if cc[jj, kk] != 0]
                if not entries:
                    continue
                def integrand(x):
                    val = sum(cc*float(base(x)) for cc, base in entries)
                    return abs(val) * np.exp(eta*abs(x))
                norms[jj, kk] = sum(quad(integrand, a, b, limit=200)[0]
                                    for a, b in intervals if a < b)
        return float(norms.max())

    # Grid convolution
    # ================

    def convolve_grid(self, u, h, *, derivative=False, kink_correction=True):
        """Trapezoid approximation of (K*u)(x_i) on a uniform grid.

        The kernel stencil is truncated where its weight drops below 1e-14
        of the peak, and the integral is truncated to the grid. At a kink
        of K (two-sided exponential) the first Euler-Maclaurin correction
        (h²/12)·J1·u_i is added, which restores O(h⁴) accuracy.

        Args:
            u (array): Samples of shape (m,) or (m, n).
            h (float): Grid spacing.
            derivative (bool): Convolve with K' instead of K. No kink
                correction is applied in that case. Default False.
            kink_correction (bool): Default True.
        Returns:
            array: Samples of K*u with the shape of u.
        """
        if not h > 0:
            raise ValueError(f"Grid spacing must be positive, got {h}.")
        u = np.asarray(u)
        squeeze = u.ndim == 1
        if squeeze:
            u = u[:, None]
        m, n = u.shape
        if n != self._dimension:
            raise ValueError(f"Field has {n} components, kernel acts on {self._dimension}.")
        weights = np.full(m, h)
        weights[0] = weights[-1] = h/2
        v = u * weights[:, None]

        lo, hi = self.support()
        j_lo = min(int(np.floor(lo/h)), 0)
        j_hi = max(int(np.ceil(hi/h)), 0)
        j_lo = max(j_lo, -(m - 1))
        j_hi = min(j_hi, m - 1)
        offsets = np.arange(j_lo, j_hi + 1) * h
        stencil = self.derivative(offsets) if derivative else self.evaluate(offsets)

        out = np.zeros((m, n), dtype=np.result_type(u, float))
        for a in range(n):
            for b in range(n):
                if not np.any(stencil[:, a, b]):
                    continue
                full = fftconvolve(stencil[:, a, b], v[:, b])
                out[:, a] += full[-j_lo:-j_lo + m]
        if kink_correction and not derivative:
            j1, _ = self.kink_jumps()
            if np.any(j1):
                out += h**2/12 * u @ j1.T
        return out[:, 0] if squeeze else out

    def __repr__(self):
        inner = ', '.join(f"({cc.tolist()}, {base!r})" for cc, base in self._terms)
        return f"KernelModel([{inner}])"
