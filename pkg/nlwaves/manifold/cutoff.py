# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import numpy as np

from ..wavetrain import Nonlinearity


def _smoothstep(t):
    t = np.clip(t, 0., 1.)
    return t*t*(3 - 2*t)


def _smoothstep_derivative(t):
    inside = (t > 0) & (t < 1)
    return np.where(inside, 6*t*(1 - t), 0.)


def smooth_indicator(s):
    """χ(s) = 1 - S(S(s - 1)) with the smoothstep S(t) = 3t² - 2t³ on [0, 1].

    χ ≡ 1 on s ≤ 1, χ ≡ 0 on s ≥ 2, and χ is C² with χ' and χ'' vanishing
    at s = 1 and s = 2.
    """
    return 1 - _smoothstep(_smoothstep(np.asarray(s, dtype=float) - 1))


def smooth_indicator_derivative(s):
    t = np.asarray(s, dtype=float) - 1
    return -_smoothstep_derivative(_smoothstep(t)) * _smoothstep_derivative(t)


class CutoffNonlinearity(Nonlinearity):
    """The modified nonlinearity g^ε(v) = g(χ(|v|/ε)·v).

    g^ε agrees with g wherever |v| ≤ ε and vanishes wherever |v| ≥ 2ε, so
    it is globally Lipschitz with a constant that is small with ε.
    """

    def __init__(self, g, epsilon):
        if not epsilon > 0:
            raise ValueError(f"The cutoff scale must be positive, got {epsilon}.")
        self.g = g
        self.epsilon = float(epsilon)

        def value(v):
            return g(self._indicator(v)[..., None] * v)

        def jacobian(v):
            norm = np.linalg.norm(v, axis=-1)
            s = norm/self.epsilon
            chi = smooth_indicator(s)
            with np.errstate(invalid='ignore', divide='ignore'):
                grad = np.where(norm > 0, smooth_indicator_derivative(s)/(norm*self.epsilon), 0.)
            # d(χv)/dv = χI + v ⊗ ∇χ
            inner = chi[..., None, None]*np.eye(v.shape[-1]) + v[..., :, None]*(grad[..., None]*v)[..., None, :]
            return g.jacobian(chi[..., None]*v) @ inner

        super().__init__(value, jacobian, g.dimension, name=f"{g.name}^ε")

    def _indicator(self, v):
        return smooth_indicator(np.linalg.norm(v, axis=-1)/self.epsilon)

    def active(self, v):
        """Mask of the points where the cutoff leaves g unchanged."""
        return np.linalg.norm(np.asarray(v), axis=-1) <= self.epsilon

    def with_epsilon(self, epsilon):
        return CutoffNonlinearity(self.g, epsilon)

    def to_dict(self):
        return {'epsilon': self.epsilon, 'g': self.g.name}

    def __repr__(self):
        return f"CutoffNonlinearity({self.g.name!r}, ε={self.epsilon:g})"
