# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import warnings

import numpy as np

from ..general import NumericalWarning
from ..tools import assert_callback
from ..kernels import KernelModel, TwoSidedExponential
from ..symbol import CharacteristicFunction
from ..flow import OperatorPath

LIMIT_PROBE = 1e3
LIMIT_TOLERANCE = 1e-6


def _as_matrix(value, dimension=None):
    mat = np.atleast_2d(np.asarray(value, dtype=float))
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {mat.shape}.")
    if dimension is not None and mat.shape[0] != dimension:
        raise ValueError(f"Expected a {dimension}×{dimension} matrix, got shape {mat.shape}.")
    return mat


def kernel_terms(kernel_of_xi, xi):
    """Coefficient stacks of a ξ-dependent kernel on the points 'xi'.

    Returns:
        list: (coefficients of shape (len(xi), n, n), base) per term. All
        kernels along ξ must be built from the same base profiles.
    """
    models = [kernel_of_xi(x) for x in xi]
    bases = [base for _, base in models[0].terms]
    stacks = [np.empty((len(xi),) + cc.shape) for cc, _ in models[0].terms]
    for i, model in enumerate(models):
        if [base for _, base in model.terms] != bases:
            raise ValueError(f"kernel_of_xi changes its base profiles along ξ (at ξ = {xi[i]}).")
        for t, (cc, _) in enumerate(model.terms):
            stacks[t][i] = cc
    return list(zip(stacks, bases))


class InhomogeneousOperator:
    """The operator U ↦ A(ξ)U(ξ) + ∫ K(ξ - ξ'; ξ) U(ξ') dξ'.

    Args:
        A_of_xi (callable or array): ξ ↦ n×n principal part; a constant
            matrix is accepted.
        kernel_of_xi (callable or KernelModel): ξ ↦ KernelModel; all
            kernels must share their base profiles. A constant kernel is
            accepted.
        limits (tuple, optional): ((A⁻, K⁻), (A⁺, K⁺)). Evaluated at
            ξ = ∓1e3 when omitted.
    """

    def __init__(self, A_of_xi, kernel_of_xi, limits=None, *, name=None):
        if isinstance(kernel_of_xi, KernelModel):
            constant_kernel = kernel_of_xi
            kernel_of_xi = lambda xi: constant_kernel
            self.constant_kernel = True
        else:
            assert_callback(kernel_of_xi, 1, 'kernel_of_xi')
            self.constant_kernel = False
        if not callable(A_of_xi):
            constant_A = _as_matrix(A_of_xi)
            A_of_xi = lambda xi: constant_A
        assert_callback(A_of_xi, 1, 'A_of_xi')
        self._A_of_xi = A_of_xi
        self._kernel_of_xi = kernel_of_xi
        self.dimension = kernel_of_xi(0.).dimension
        if limits is None:
            limits = ((A_of_xi(-LIMIT_PROBE), kernel_of_xi(-LIMIT_PROBE)),
                      (A_of_xi(LIMIT_PROBE), kernel_of_xi(LIMIT_PROBE)))
        (a_minus, k_minus), (a_plus, k_plus) = limits
        self.limits = ((_as_matrix(a_minus, self.dimension), k_minus),
                       (_as_matrix(a_plus, self.dimension), k_plus))
        self.name = name or 'operator'

    def A(self, xi):
        return _as_matrix(self._A_of_xi(float(xi)), self.dimension)

    def kernel(self, xi):
        return self._kernel_of_xi(float(xi))

    def kernel_terms(self, xi):
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        if self.constant_kernel:
            model = self._kernel_of_xi(0.)
            return [(np.broadcast_to(cc, (len(xi),) + cc.shape), base) for cc, base in model.terms]
        return kernel_terms(self._kernel_of_xi, xi)

    @property
    def length_scale(self):
        return min(self.kernel(x).length_scale for x in (-LIMIT_PROBE, 0., LIMIT_PROBE))

    def limit_cf(self, side, shift=0.):
        """Characteristic function A± + K̂±(ν + shift) of a limit operator."""
        if side not in ('-', '+'):
            raise ValueError(f"side must be '-' or '+', got {side!r}.")
        A, kernel = self.limits[0 if side == '-' else 1]
        return CharacteristicFunction('principal_plus_kernel', A, kernel, shift=shift)

    def limit_path(self, eta=0., strip_half_width=None):
        """OperatorPath joining the limits of the operator conjugated with
        the weight e^{η√(1+ξ²)}."""
        return OperatorPath.limit_path(self.limit_cf('-'), self.limit_cf('+'), eta, strip_half_width,
                                       name=f"{self.name}:limits")

    def check_limits(self, L, tol=LIMIT_TOLERANCE):
        """Warn when A and K at ξ = ±L have not reached their limits."""
        for side, xi in (('-', -L), ('+', L)):
            A_lim, K_lim = self.limits[0 if side == '-' else 1]
            da = np.abs(self.A(xi) - A_lim).max()
            dk = (self.kernel(xi) + K_lim.scaled(-1.)).weighted_l1_norm(0.)
            if da > tol or dk > tol:
                warnings.warn(f"{self.name}: at ξ = {xi:g} the coefficients are {da:.2e} (A) and "
                            + f"{dk:.2e} (K, L¹) away from their limits; enlarge L.", NumericalWarning)

    # Scenario constructors
    # =====================

    @classmethod
    def constant(cls, A, kernel, *, name=None):
        A = _as_matrix(A)
        return cls(A, kernel, ((A, kernel), (A, kernel)), name=name or 'constant')

    @classmethod
    def steady_state(cls, A, kernel, *, name=None):
        """-U + K*(A U) written with principal part -I and kernel K·A."""
        A = _as_matrix(A)
        return cls.constant(-np.eye(A.shape[0]), kernel.times(A), name=name or 'steady_state')

    @classmethod
    def front(cls, a_minus=0.5, a_plus=2., *, A=-1., kernel=None, name=None):
        """Principal part A with kernel a(ξ)·K,
        a(ξ) = a⁻ + (a⁺ - a⁻)(1 + tanh ξ)/2."""
        kernel = kernel or KernelModel.scalar(TwoSidedExponential(1.))
        A = _as_matrix(A, kernel.dimension)

        def kernel_of_xi(xi):
            return kernel.scaled(a_minus + (a_plus - a_minus)*(1 + np.tanh(xi))/2)

        limits = ((A, kernel.scaled(a_minus)), (A, kernel.scaled(a_plus)))
        return cls(A, kernel_of_xi, limits, name=name or 'front')

    def __repr__(self):
        return f"InhomogeneousOperator({self.name!r}, n={self.dimension})"
