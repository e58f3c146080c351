# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
import pandas as pd
import scipy.linalg

from ..general import NlwavesError

log = logging.getLogger(__name__)

MAX_NULL_DIMENSION = 10
OUTER_FRACTION = 0.75
NOISE_FLOOR = 1e-12


class GridTooCoarse(ValueError, NlwavesError):
    pass

class NoSpectralGap(ArithmeticError, NlwavesError):
    pass


IndexReport = namedtuple('IndexReport', ['dim_ker', 'dim_coker', 'index'])


def smoothed_weight(xi, eta):
    """W(ξ) = η√(1 + ξ²)."""
    return eta*np.sqrt(1 + np.asarray(xi, dtype=float)**2)


@dataclass
class GridOperator:
    """Dense collocation matrix of an inhomogeneous operator on [-L, L].

    Unknowns are ordered point-major: entry i·n + a is component a at ξ_i.
    """
    xi: np.ndarray
    weights: np.ndarray
    matrix: np.ndarray
    dimension: int
    eta: float = 0.
    name: str = 'operator'

    @property
    def L(self):
        return float(self.xi[-1])

    @property
    def N(self):
        return len(self.xi)

    @property
    def h(self):
        return float(self.xi[1] - self.xi[0])

    def apply(self, u):
        """Apply to samples of shape (N,) or (N, n)."""
        u = np.asarray(u)
        out = self.matrix @ u.reshape(-1)
        return out.reshape(u.shape)

    def singular_values(self):
        return scipy.linalg.svd(self.matrix, compute_uv=False)

    def spectrum_frame(self):
        s = self.singular_values()
        return pd.DataFrame({'k': np.arange(len(s)), 'sigma': s})


def assemble(op, L, N, *, eta=0., kink_correction=True):
    """Dense discretization of 'op' on N equispaced points of [-L, L].

    Block (i, j) is A(ξ_i)δ_ij + w_j K(ξ_i - ξ_j; ξ_i) with trapezoid
    weights w_j, plus (h²/12)·J1(ξ_i) on the diagonal at kernel kinks.
    With eta > 0 the operator is conjugated as e^{-W} T e^{W},
    W(ξ) = η√(1 + ξ²).

    Raises:
        GridTooCoarse: if h ≥ length_scale/4 of the kernel.
    """
    if not (L > 0 and N > 2):
        raise ValueError(f"Need L > 0 and N > 2, got L = {L}, N = {N}.")
    xi = np.linspace(-L, L, N)
    h = xi[1] - xi[0]
    if h >= op.length_scale/4:
        raise GridTooCoarse(f"Grid spacing {h:.4g} does not resolve the kernel length scale "
                          + f"{op.length_scale:.4g} (need h < {op.length_scale/4:.4g}).")
    op.check_limits(L)
    n = op.dimension
    weights = np.full(N, h)
    weights[0] = weights[-1] = h/2

    diff = xi[:, None] - xi[None, :]
    blocks = np.zeros((N, n, N, n))
    kink = np.zeros((N, n, n))
    for coeffs, base in op.kernel_terms(xi):
        blocks += np.einsum('iab,ij->iajb', coeffs, base(diff)*weights[None, :])
        if kink_correction:
            kink += h**2/12 * base.kink_jumps()[0] * coeffs
    idx = np.arange(N)
    blocks[idx, :, idx, :] += np.array([op.A(x) for x in xi]) + kink
    if eta:
        W = smoothed_weight(xi, eta)
        blocks *= np.exp(W[None, :] - W[:, None])[:, None, :, None]
    log.debug(f"Assembled {op.name} on L = {L}, N = {N}, η = {eta}")
    return GridOperator(xi, weights, blocks.reshape(N*n, N*n), n, float(eta), op.name)


def _null_dimension(s, gap_factor):
    """Smallest cut k with a full gap below it and no partial gap above it.

    k = 0 needs σ_min ≥ σ_max/gap_factor and σ_min above the noise floor.
    A drop of √gap_factor or more that stops short of gap_factor marks a
    direction that is neither null nor bulk.
    """
    window = s[-MAX_NULL_DIMENSION-1:]
    ratios = window[:-1] / np.maximum(window[1:], np.finfo(float).tiny)
    partial = np.sqrt(gap_factor)
    for k in range(0, min(MAX_NULL_DIMENSION, len(s) - 1) + 1):
        cut = len(window) - 1 - k
        if k == 0:
            gapped = s[-1] >= s[0]/gap_factor and s[-1] > NOISE_FLOOR*s[0]
        else:
            gapped = ratios[cut] >= gap_factor
        if gapped and np.all(ratios[:cut] < partial):
            return k
    raise NoSpectralGap(f"No gap of factor {gap_factor:g} among the {MAX_NULL_DIMENSION} smallest "
                      + f"singular values {window.tolist()} (σ_max = {s[0]:.4g}).")


def outer_mass_fraction(gop, vectors):
    """Share of each column's squared mass on the outer quarter |ξ| > 0.75 L."""
    vectors = np.asarray(vectors).reshape(gop.N, gop.dimension, -1)
    mass = np.sum(np.abs(vectors)**2, axis=1)
    outer = np.abs(gop.xi) > OUTER_FRACTION*gop.L
    return mass[outer].sum(axis=0) / mass.sum(axis=0)


def numerical_index(gop, gap_factor=1e6):
    """Kernel and cokernel dimensions certified by a singular-value gap.

    Singular values below the gap are split between genuine near-null
    directions and truncation artifacts by where their singular vectors
    live: artifacts carry at least half of their mass in the outer quarter
    of the interval. Right vectors count towards the kernel, left vectors
    towards the cokernel.

    Returns:
        IndexReport: (dim_ker, dim_coker, index)
    Raises:
        NoSpectralGap: if no cut among the 10 smallest singular values has
            the requested gap, or if a singular value above the cut drops
            by √gap_factor or more from its neighbour.
    """
    U, s, Vh = scipy.linalg.svd(gop.matrix)
    k = _null_dimension(s, gap_factor)
    if k == 0:
        return IndexReport(0, 0, 0)
    right = outer_mass_fraction(gop, Vh[-k:].conj().T)
    left = outer_mass_fraction(gop, U[:, -k:])
    dim_ker = int(np.sum(right < 0.5))
    dim_coker = int(np.sum(left < 0.5))
    log.info(f"{gop.name}: {k} singular value(s) below the gap; ker {dim_ker}, coker {dim_coker}")
    return IndexReport(dim_ker, dim_coker, dim_ker - dim_coker)
