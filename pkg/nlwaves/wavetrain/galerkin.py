# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import numpy as np
from scipy.fft import dct


class CosineGalerkin:
    """Collocation layer for even 2π-periodic fields u(y) = Σ_{j≤M} c_j cos(jy).

    Fields are sampled at the Q + 1 = 4M + 1 points y_k = πk/Q of [0, π];
    analysis and synthesis are DCT-I transforms, exact for products of up
    to three truncated fields.
    """

    def __init__(self, modes):
        self.M = int(modes)
        self.Q = 4*self.M
        self.y = np.pi*np.arange(self.Q + 1)/self.Q
        self.j = np.arange(self.M + 1)
        self._S = np.cos(np.outer(self.y, self.j))
        self._P = self.analyze(np.eye(self.Q + 1))

    @property
    def synthesis_matrix(self):
        return self._S

    @property
    def analysis_matrix(self):
        return self._P

    def synthesize(self, c):
        """Samples at y_k of the field with coefficients c, shape (M+1, ...)."""
        c = np.asarray(c, dtype=float)
        g = np.zeros((self.Q + 1,) + c.shape[1:])
        g[0] = c[0]
        g[1:self.M + 1] = c[1:]/2
        return dct(g, type=1, axis=0)

    def analyze(self, u):
        """Cosine coefficients 0..M of samples u at y_k, shape (Q+1, ...)."""
        y = dct(np.asarray(u, dtype=float), type=1, axis=0)
        c = y[:self.M + 1] / self.Q
        c[0] /= 2
        return c

    def evaluate(self, c, y):
        """Field values at arbitrary points y."""
        return np.tensordot(np.cos(np.outer(np.asarray(y, dtype=float), self.j)), np.asarray(c), axes=1)

    def sup_norm(self, c, oversample=4):
        y = np.linspace(0, np.pi, oversample*self.Q + 1)
        return float(np.abs(self.evaluate(c, y)).max())

    def nonlinear_coefficients(self, c, nonlinearity):
        """Coefficients of N(u) for u with coefficients c of shape (M+1, n)."""
        return self.analyze(nonlinearity(self.synthesize(c)))

    def nonlinear_jacobian(self, c, nonlinearity):
        """∂N(u)_j/∂c_k as an array [j, a, k, b]."""
        jac = nonlinearity.jacobian(self.synthesize(c))
        return np.einsum('jq,qab,qk->jakb', self._P, jac, self._S)

    def pi_shift(self, c):
        """Coefficients of u(y + π): c_j ↦ (-1)^j c_j."""
        return np.asarray(c) * ((-1.)**self.j)[(slice(None),) + (None,)*(np.ndim(c) - 1)]
