# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import numpy as np
from numpy.polynomial import polynomial as P

from ..kernels import KernelModel, StripViolation


FORMS = ('principal_plus_kernel', 'steady_state', 'polynomial')


def adjugate(M):
    """Adjugate of a (stack of) square matrices, computed from the SVD
    so that it stays well defined where M is singular."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[-1]
    if n == 1:
        return np.ones_like(M)
    U, s, Vh = np.linalg.svd(M)
    others = np.stack([np.prod(np.delete(s, i, axis=-1), axis=-1) for i in range(n)], axis=-1)
    phase = np.linalg.det(U) * np.linalg.det(Vh)
    V = np.conj(np.swapaxes(Vh, -1, -2))
    UH = np.conj(np.swapaxes(U, -1, -2))
    return phase[..., None, None] * ((V * others[..., None, :]) @ UH)


class CharacteristicFunction:
    """The determinant map ν ↦ d(ν) of a constant-coefficient operator.

    Forms:
        principal_plus_kernel: M(ν) = A + K̂(ν + s)
        steady_state:          M(ν) = -I + K̂(ν + s)·A
        polynomial:            M(ν) = [p(ν + s)], p given by its coefficients
                               in increasing degree (synthetic scalar symbols)

    The shift s realizes exponential weights: the symbol of the conjugated
    operator is evaluated at ν + s.
    """

    def __init__(self, form, A=None, kernel=None, *, shift=0., coefficients=None):
        if form not in FORMS:
            raise ValueError(f"Unknown form {form!r}; expected one of {FORMS}.")
        self.form = form
        self.shift = float(shift)
        if form == 'polynomial':
            if coefficients is None:
                raise ValueError("The polynomial form needs 'coefficients'.")
            coefficients = np.trim_zeros(np.asarray(coefficients, dtype=complex), 'b')
            if coefficients.size < 2:
                raise ValueError("The polynomial symbol must have positive degree.")
            if np.all(np.isreal(coefficients)):
                coefficients = coefficients.real
            self.coefficients = coefficients
            self.A = None
            self.kernel = None
            self._dimension = 1
        else:
            if kernel is None or A is None:
                raise ValueError(f"The {form} form needs both 'A' and 'kernel'.")
            if not isinstance(kernel, KernelModel):
                raise TypeError(f"Expected a KernelModel, got {type(kernel).__name__}.")
            A = np.atleast_2d(np.asarray(A, dtype=float))
            if A.shape != (kernel.dimension, kernel.dimension):
                raise ValueError(f"A has shape {A.shape} but the kernel acts on "
                               + f"dimension {kernel.dimension}.")
            self.A = A
            self.kernel = kernel
            self.coefficients = None
            self._dimension = kernel.dimension
            if abs(self.shift) >= kernel.decay_rate:
                raise StripViolation(f"Shift {self.shift} leaves no strip around the imaginary "
                                   + f"axis (decay rate {kernel.decay_rate}).")

    @classmethod
    def kawahara(cls, alpha, c):
        """Scalar synthetic symbol d(ν) = -αν⁴ + ν² + c."""
        return cls('polynomial', coefficients=[c, 0., 1., 0., -alpha])

    @classmethod
    def block_diagonal(cls, *cfs):
        """Direct sum; its determinant is the product of the blocks'."""
        forms = {cf.form for cf in cfs}
        shifts = {cf.shift for cf in cfs}
        if len(forms) != 1 or len(shifts) != 1:
            raise ValueError("Blocks must share the form and the shift.")
        form = forms.pop()
        shift = shifts.pop()
        if form == 'polynomial':
            coeffs = cfs[0].coefficients
            for cf in cfs[1:]:
                coeffs = P.polymul(coeffs, cf.coefficients)
            return cls('polynomial', coefficients=coeffs, shift=shift)
        sizes = [cf.dimension for cf in cfs]
        A = np.zeros((sum(sizes), sum(sizes)))
        start = 0
        for cf, size in zip(cfs, sizes):
            A[start:start+size, start:start+size] = cf.A
            start += size
        kernel = KernelModel.block_diagonal(*[cf.kernel for cf in cfs])
        return cls(form, A, kernel, shift=shift)

    @property
    def dimension(self):
        return self._dimension

    @property
    def decay_rate(self):
        return np.inf if self.kernel is None else self.kernel.decay_rate

    @property
    def strip(self):
        """Open interval of Re ν where d is analytic."""
        return -self.decay_rate - self.shift, self.decay_rate - self.shift

    def check_strip(self, nu):
        lo, hi = self.strip
        re = np.real(np.asarray(nu, dtype=complex))
        if np.any(re <= lo) or np.any(re >= hi):
            raise StripViolation(f"Re ν in [{np.min(re):.6g}, {np.max(re):.6g}] leaves the strip "
                               + f"({lo:.6g}, {hi:.6g}).")

    def shifted(self, shift):
        """Same operator with the symbol argument moved by 'shift'."""
        if self.form == 'polynomial':
            return CharacteristicFunction('polynomial', coefficients=self.coefficients,
                                          shift=self.shift + shift)
        return CharacteristicFunction(self.form, self.A, self.kernel, shift=self.shift + shift)

    def matrix(self, nu):
        nu = np.asarray(nu, dtype=complex)
        self.check_strip(nu)
        z = nu + self.shift
        if self.form == 'polynomial':
            return P.polyval(z, self.coefficients)[..., None, None] + 0j
        K = self.kernel.symbol(z)
        if self.form == 'principal_plus_kernel':
            return self.A + K
        return K @ self.A - np.eye(self._dimension)

    def matrix_derivative(self, nu):
        nu = np.asarray(nu, dtype=complex)
        self.check_strip(nu)
        z = nu + self.shift
        if self.form == 'polynomial':
            return P.polyval(z, P.polyder(self.coefficients))[..., None, None] + 0j
        dK = self.kernel.symbol_derivative(z)
        if self.form == 'principal_plus_kernel':
            return dK
        return dK @ self.A

    def eval_d(self, nu):
        """d(ν) = det M(ν), by LU factorization."""
        return np.linalg.det(self.matrix(nu))

    def eval_d_derivative(self, nu):
        """d'(ν) = tr(adj M(ν) · M'(ν)), valid at roots of d as well."""
        adj = adjugate(self.matrix(nu))
        return np.einsum('...ij,...ji->...', adj, self.matrix_derivative(nu))

    def log_derivative(self, nu):
        return self.eval_d_derivative(nu) / self.eval_d(nu)

    def to_dict(self):
        if self.form == 'polynomial':
            return {'form': self.form, 'coefficients': np.real_if_close(self.coefficients).tolist(),
                    'shift': self.shift}
        return {'form': self.form, 'A': self.A.tolist(), 'kernel': self.kernel.to_dict(),
                'shift': self.shift}

    def __repr__(self):
        if self.form == 'polynomial':
            return f"CharacteristicFunction('polynomial', coefficients={self.coefficients.tolist()}, " \
                 + f"shift={self.shift})"
        return f"CharacteristicFunction({self.form!r}, A={self.A.tolist()}, kernel={self.kernel!r}, " \
             + f"shift={self.shift})"
