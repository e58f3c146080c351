# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar
from scipy.special import roots_legendre

from ..general import NlwavesError
from ..kernels import KernelModel
from ..symbol import hyperbolicity_check

log = logging.getLogger(__name__)

PRINCIPAL_N = (4, 8, 16, 32, 64, 128, 256)
INFINITY_N = (2, 4, 8, 16, 32, 64)
SINGULAR_THRESHOLD = 1e-8
_GL_NODES, _GL_WEIGHTS = roots_legendre(48)


class PrincipalPartInvertible(ValueError, NlwavesError):
    pass

class LimitsHyperbolic(ValueError, NlwavesError):
    pass


def _sigma_min(op, xi):
    return np.linalg.svd(op.A(xi), compute_uv=False)[-1]


def _bump(s):
    return np.where(np.abs(s) < 1, (1 - s**2)**2, 0.)


def _gauss_legendre(f, a, b):
    """∫_a^b f for arrays of intervals (a, b); f maps nodes of shape
    (m, 48) to values of shape (m, 48, ...)."""
    half = (b - a)/2
    nodes = (a + b)[:, None]/2 + half[:, None]*_GL_NODES[None, :]
    vals = f(nodes)
    extra = (None,)*(vals.ndim - 2)
    return np.sum(vals * _GL_WEIGHTS[(None, slice(None)) + extra], axis=1) * half[(slice(None),) + extra]


def weyl_demo_principal(op, N_sequence=PRINCIPAL_N, *, xi_range=(-20., 20.), n_scan=4001):
    """‖T u_N‖_∞ for bumps u_N of width 1/N concentrating at a zero ξ* of
    the principal part.

    u_N(ξ) = χ(N(ξ - ξ*)) v₀ with χ(s) = (1 - s²)² on |s| < 1 and v₀ the
    null direction of A(ξ*). The convolution is integrated by 48-point
    Gauss-Legendre on each side of the evaluation point.

    Returns:
        pandas.DataFrame: columns N, residual, norm, ratio.
    Raises:
        PrincipalPartInvertible: if σ_min(A) stays above 1e-8.
    """
    scan = np.linspace(*xi_range, n_scan)
    sig = np.array([_sigma_min(op, x) for x in scan])
    i = int(np.argmin(sig))
    lo, hi = scan[max(i-1, 0)], scan[min(i+1, n_scan-1)]
    res = minimize_scalar(lambda x: _sigma_min(op, x), bounds=(lo, hi), method='bounded',
                          options={'xatol': 1e-12})
    xi_star = float(res.x) if res.fun < sig[i] else float(scan[i])
    sigma = min(float(res.fun), float(sig[i]))
    if sigma > SINGULAR_THRESHOLD:
        raise PrincipalPartInvertible(f"{op.name}: σ_min(A(ξ)) ≥ {sigma:.3g} on [{xi_range[0]}, "
                                    + f"{xi_range[1]}]; there is no zero to concentrate on.")
    v0 = np.linalg.svd(op.A(xi_star))[2][-1]
    log.info(f"{op.name}: principal part vanishes at ξ* = {xi_star:.10g}")

    reach = max(abs(bb) for bb in op.kernel(xi_star).support()) if op.constant_kernel \
            else 10*op.length_scale
    rows = []
    for N in N_sequence:
        width = 1./N
        near = np.linspace(xi_star - 2*width, xi_star + 2*width, 401)
        far = np.linspace(xi_star - reach, xi_star + reach, 801)
        points = np.union1d(near, far)
        a = np.full(points.shape, xi_star - width)
        b = np.full(points.shape, xi_star + width)
        split = np.clip(points, a, b)
        terms = op.kernel_terms(points)

        def integrand(nodes):
            chi = _bump(N*(nodes - xi_star))
            out = np.zeros(nodes.shape + (op.dimension,))
            for coeffs, base in terms:
                out += np.einsum('iab,b->ia', coeffs, v0)[:, None, :] \
                       * (base(points[:, None] - nodes) * chi)[..., None]
            return out

        conv = _gauss_legendre(integrand, a, split) + _gauss_legendre(integrand, split, b)
        local = np.array([op.A(x) @ v0 for x in points]) * _bump(N*(points - xi_star))[:, None]
        residual = float(np.max(np.linalg.norm(local + conv, axis=1)))
        norm = float(np.linalg.norm(v0))
        rows.append((N, residual, norm, residual/norm))
        log.debug(f"{op.name}: N = {N}, ‖T u_N‖ = {residual:.4e}")
    return pd.DataFrame(rows, columns=['N', 'residual', 'norm', 'ratio'])


def weyl_demo_infinity(op, N_sequence=INFINITY_N, *, h=0.02, side=None, tol=1e-8):
    """‖T u_N‖_∞ for Gaussian wave packets escaping to the non-hyperbolic end.

    With m a real root of the limit symbol, d(im) = 0, and v the null vector
    of A± + K̂±(im), the packets are

        u_N(ξ) = e^{-((ξ - c_N)/N)²/4} e^{imξ} v,   c_N = ±N²,

    sampled with spacing h on [c_N - 8N - R, c_N + 8N + R], R ten kernel
    lengths. Also reports the share of the packet's spectral mass within
    |ℓ - m| < N^{-1/2}.

    Returns:
        pandas.DataFrame: columns N, residual, norm, ratio, concentration.
    Raises:
        LimitsHyperbolic: if both limit operators are hyperbolic.
    """
    reports = {ss: hyperbolicity_check(op.limit_cf(ss), tol=tol) for ss in ('-', '+')}
    if side is None:
        side = '+' if not reports['+'].hyperbolic else '-'
    if reports[side].hyperbolic:
        raise LimitsHyperbolic(f"{op.name}: the limit at ξ → {side}∞ is hyperbolic "
                             + f"(min |d(iℓ)| = {reports[side].min_abs_d:.3g}).")
    m = reports[side].argmin_ell
    A_lim, K_lim = op.limits[0 if side == '-' else 1]
    v = np.linalg.svd(A_lim + K_lim.symbol(1j*m))[2][-1].conj()
    sign = 1. if side == '+' else -1.
    margin = 10*op.length_scale
    log.info(f"{op.name}: packets at ξ → {side}∞ with frequency m = {m:.10g}")

    rows = []
    for N in N_sequence:
        center = sign*N**2
        xi = np.arange(center - 8*N - margin, center + 8*N + margin + h/2, h)
        envelope = np.exp(-((xi - center)/N)**2/4)
        u = (envelope*np.exp(1j*m*xi))[:, None] * v[None, :]
        Tu = np.einsum('iab,ib->ia', np.array([op.A(x) for x in xi]), u)
        for coeffs, base in op.kernel_terms(xi):
            conv = KernelModel([(np.eye(op.dimension), base)]).convolve_grid(u, h)
            Tu += np.einsum('iab,ib->ia', coeffs, conv)
        inner = np.abs(xi - center) <= 8*N
        residual = float(np.max(np.linalg.norm(Tu[inner], axis=1)))
        norm = float(np.max(np.linalg.norm(u, axis=1)))
        spectrum = np.sum(np.abs(np.fft.fft(u, axis=0))**2, axis=1)
        ell = 2*np.pi*np.fft.fftfreq(len(xi), h)
        concentration = float(spectrum[np.abs(ell - m) < N**-0.5].sum() / spectrum.sum())
        rows.append((N, residual, norm, residual/norm, concentration))
        log.debug(f"{op.name}: N = {N}, ‖T u_N‖ = {residual:.4e}, concentration {concentration:.6f}")
    return pd.DataFrame(rows, columns=['N', 'residual', 'norm', 'ratio', 'concentration'])
