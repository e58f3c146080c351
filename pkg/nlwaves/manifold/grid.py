# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import numpy as np

from ..oracle import smoothed_weight

MIN_PERIODS = 8


class WeightedGrid:
    """Uniform grid on [-L, L] with the weight w(ξ) = e^{-η√(1+ξ²)}.

    Fields are arrays of shape (N, n). The weighted sup norm
    max_i |v(ξ_i)| w(ξ_i) measures fields that may grow slowly, as the
    bounded solutions and the secular parts of a fixed-point iteration do.
    """

    def __init__(self, L, N, eta=0.2):
        if not (L > 0 and N > 2):
            raise ValueError(f"Need L > 0 and N > 2, got L = {L}, N = {N}.")
        if not eta > 0:
            raise ValueError(f"The weight exponent must be positive, got {eta}.")
        self.L = float(L)
        self.N = int(N)
        self.eta = float(eta)
        self.xi = np.linspace(-self.L, self.L, self.N)
        self.h = float(self.xi[1] - self.xi[0])
        self.weight = np.exp(-smoothed_weight(self.xi, self.eta))
        self.quadrature = np.full(self.N, self.h)
        self.quadrature[0] = self.quadrature[-1] = self.h/2

    @classmethod
    def for_frequency(cls, omega_star, periods=16, N=4096, eta=0.2):
        """Grid covering 'periods' wavelengths 2π/ω* on each side of the origin."""
        if periods < MIN_PERIODS:
            raise ValueError(f"Use at least {MIN_PERIODS} periods on each side, got {periods}.")
        return cls(periods*2*np.pi/omega_star, N, eta)

    def norm(self, field):
        field = np.asarray(field)
        values = np.abs(field) if field.ndim == 1 else np.linalg.norm(field, axis=-1)
        return float(np.max(values*self.weight))

    def window(self, fraction=0.25):
        """Mask of the central nodes |ξ| ≤ fraction·L."""
        return np.abs(self.xi) <= fraction*self.L

    def to_dict(self):
        return {'L': self.L, 'N': self.N, 'eta': self.eta, 'h': self.h}

    def __repr__(self):
        return f"WeightedGrid(L={self.L:.6g}, N={self.N}, eta={self.eta:g})"


class KernelBasisE0:
    """Basis e₀ = cos(ω*ξ)v*, e₁ = sin(ω*ξ)v* of the kernel of -I + K* and a
    projection Q onto it.

    The dual functionals are q̃_k(v) = Σ_i W_i w(ξ_i)² p_k(ω*ξ_i) v_ad·v_i with
    p = (cos, sin) and trapezoid weights W; Q = G⁻¹q̃ with the Gram matrix
    G_kl = q̃_k(e_l), so that Q e_l = δ_kl on the grid.
    """

    def __init__(self, grid, omega_star, v_star, v_ad):
        self.grid = grid
        self.omega_star = float(omega_star)
        self.v_star = np.atleast_1d(np.asarray(v_star, dtype=float))
        self.v_ad = np.atleast_1d(np.asarray(v_ad, dtype=float))
        self.dimension = len(self.v_star)
        self.fields = self._profiles(grid.xi, self.v_star)
        dual = self._dual(0.)
        self.gram = np.einsum('iak,ial->kl', dual, self.fields)
        self.gram_inverse = np.linalg.inv(self.gram)
        self.matrix = self.gram_inverse @ dual.reshape(-1, 2).T

    @classmethod
    def from_reduced(cls, grid, rd):
        return cls(grid, rd.omega_star, rd.v_star, rd.v_ad)

    def _profiles(self, xi, vector):
        phase = self.omega_star*xi
        return np.stack([np.cos(phase)[:, None]*vector, np.sin(phase)[:, None]*vector], axis=-1)

    def _dual(self, x):
        # q̃ profiles at ξ_i - x with quadrature weights folded in, shape (N, n, 2)
        xi = self.grid.xi - x
        scale = np.exp(-2*smoothed_weight(xi, self.grid.eta)) * self.grid.quadrature
        return self._profiles(xi, self.v_ad) * scale[:, None, None]

    def embed(self, v0):
        """The field v0[0]e₀ + v0[1]e₁."""
        return self.fields @ np.asarray(v0, dtype=float)

    def coordinates(self, field):
        """Qv for a field of shape (N, n), or for a stack (N, n, m)."""
        field = np.asarray(field)
        if field.ndim == 3:
            return self.matrix @ field.reshape(-1, field.shape[-1])
        return self.matrix @ field.reshape(-1)

    def shifted_coordinates(self, field, x):
        """Q(τ_x v) with τ_x v = v(· + x), computed by moving the shift onto
        the smooth dual profiles: Σ_i W_i q̃(ξ_i - x)·v_i."""
        raw = np.einsum('iak,ia->k', self._dual(x), np.asarray(field).reshape(self.grid.N, -1))
        return self.gram_inverse @ raw

    def projection_error(self, field=None):
        """max |Q e_l - δ_l| and, for a given field, max |P(Pv) - Pv| with P = E Q."""
        err = float(np.abs(self.coordinates(self.fields) - np.eye(2)).max())
        if field is not None:
            once = self.embed(self.coordinates(field))
            err = max(err, float(np.abs(self.embed(self.coordinates(once)) - once).max()))
        return err

    @staticmethod
    def rotation(theta):
        """Action R_θ on E₀-coordinates of the translation by θ/ω*."""
        c, s = np.cos(theta), np.sin(theta)
        return np.array([[c, s], [-s, c]])

    def __repr__(self):
        return f"KernelBasisE0(ω*={self.omega_star:.10g}, n={self.dimension})"
