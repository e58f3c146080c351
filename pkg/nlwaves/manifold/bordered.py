# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging

import numpy as np
import scipy.linalg
from scipy.linalg.lapack import dgecon

from ..general import NlwavesError
from ..oracle import InhomogeneousOperator, GridTooCoarse, assemble

log = logging.getLogger(__name__)

MIN_RCOND = 1e-14


class BorderedSingular(ArithmeticError, NlwavesError):
    pass


class BorderedSolve:
    """Factorized bordered system v ↦ (T_h v + S s, Q v) on a weighted grid.

    T_h = -I + K_h is the collocation of the linear part -v + K*v. The two
    slack columns S carry v* at the first and at the last node: the end
    rows of the truncated interval are relaxed there, which absorbs the
    truncation defect and makes the system square after the two Q rows
    are appended.

    Attributes:
        matrix (array): The (Nn + 2)² bordered matrix.
        rcond (float): LAPACK estimate of the reciprocal 1-norm condition.
        mask (array): False at the two end (ghost) nodes.
        kernel_fields (array): Solutions Z of (T_h Z, QZ) = (0, I), shape (N, n, 2).
    """

    def __init__(self, grid, basis, kernel, operator_matrix):
        self.grid = grid
        self.basis = basis
        self.kernel = kernel
        N, n = grid.N, kernel.dimension
        self.dimension = n
        size = N*n
        slack = np.zeros((size, 2))
        slack[:n, 0] = basis.v_star
        slack[-n:, 1] = basis.v_star
        self.matrix = np.block([[operator_matrix, slack], [basis.matrix, np.zeros((2, 2))]])
        self.lu = scipy.linalg.lu_factor(self.matrix)
        anorm = np.linalg.norm(self.matrix, 1)
        self.rcond, info = dgecon(self.lu[0], anorm, norm='1')
        if info != 0 or not self.rcond > MIN_RCOND:
            raise BorderedSingular(f"Bordered matrix is numerically singular (rcond = {self.rcond:.3e}); "
                                 + f"refine the grid or lower η = {grid.eta}.")
        self.mask = np.ones(N, dtype=bool)
        self.mask[[0, -1]] = False
        rhs = np.zeros((size + 2, 2))
        rhs[size:] = np.eye(2)
        self.kernel_fields = scipy.linalg.lu_solve(self.lu, rhs)[:size].reshape(N, n, 2)
        log.debug(f"Bordered system of size {size + 2} factorized, rcond = {self.rcond:.3e}")

    def _stack(self, rhs, v0):
        return np.concatenate([np.asarray(rhs, dtype=float).reshape(-1), np.asarray(v0, dtype=float)])

    def solve(self, rhs, v0):
        """Solve T_h v + S s = rhs, Q v = v0.

        Returns:
            tuple: (field of shape (N, n), slack of shape (2,))
        """
        x = scipy.linalg.lu_solve(self.lu, self._stack(rhs, v0))
        return x[:-2].reshape(self.grid.N, self.dimension), x[-2:]

    def residual(self, field, slack, rhs, v0):
        """Relative residual of a bordered solve."""
        b = self._stack(rhs, v0)
        r = self.matrix @ np.concatenate([np.asarray(field).reshape(-1), slack]) - b
        return float(np.abs(r).max() / max(np.abs(b).max(), np.finfo(float).tiny))

    def apply_T(self, field):
        """T_h v = -v + K_h v with the same quadrature as the matrix rows."""
        field = np.asarray(field, dtype=float).reshape(self.grid.N, self.dimension)
        return -field + self.kernel.convolve_grid(field, self.grid.h)

    def kernel_residual(self, fraction=0.5):
        """Weighted sup of T_h e_k over the central nodes |ξ| ≤ fraction·L."""
        window = self.grid.window(fraction)
        worst = 0.
        for k in range(2):
            Te = self.apply_T(self.basis.fields[..., k])
            Te[~window] = 0.
            worst = max(worst, self.grid.norm(Te))
        return worst

    def inverse_norm(self, rhs):
        """Weighted norm of the field part of the solve with data (rhs, 0)."""
        field, _ = self.solve(rhs, np.zeros(2))
        return self.grid.norm(field)

    def __repr__(self):
        return f"BorderedSolve({self.grid!r}, rcond={self.rcond:.3e})"


def build_bordered(p, grid, basis):
    """Assemble and factorize the bordered linear part of the v-form of 'p'.

    Raises:
        BorderedSingular: if the grid does not resolve the kernel, if η is
            not below the decay rate of the kernel, or if the bordered matrix
            is numerically singular.
    """
    kernel, _ = p.v_form()
    if grid.eta >= kernel.decay_rate:
        raise BorderedSingular(f"Weight η = {grid.eta} is not below the kernel decay rate {kernel.decay_rate}.")
    if basis.grid is not grid:
        raise ValueError("The kernel basis lives on a different grid.")
    op = InhomogeneousOperator.steady_state(p.A, p.kernel)
    try:
        gop = assemble(op, grid.L, grid.N)
    except GridTooCoarse as err:
        raise BorderedSingular(f"Grid too coarse for the bordered system: {err}") from err
    return BorderedSolve(grid, basis, kernel, gop.matrix)
