# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from ..general import NlwavesError, NumericalWarning

log = logging.getLogger(__name__)

CONTOUR_FLOOR = 1e-12
WINDING_EPSABS = 1e-10
_NUDGES = (0.0025, -0.0025, 0.005, -0.005, 0.01, -0.01)
_SPLIT_FRACTIONS = (0.5, 0.45, 0.55, 0.4, 0.6)


class ContourTooCloseToRoot(ArithmeticError, NlwavesError):
    pass

class NonIntegerWinding(ArithmeticError, NlwavesError):
    pass


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"Degenerate rectangle {self}.")

    @property
    def width(self):
        return self.re_max - self.re_min

    @property
    def height(self):
        return self.im_max - self.im_min

    @property
    def diameter(self):
        return float(np.hypot(self.width, self.height))

    @property
    def center(self):
        return complex((self.re_min + self.re_max)/2, (self.im_min + self.im_max)/2)

    def contains(self, nu, margin=0.):
        return self.re_min - margin <= nu.real <= self.re_max + margin \
               and self.im_min - margin <= nu.imag <= self.im_max + margin

    def edges(self):
        """Counter-clockwise boundary segments (start, end)."""
        z = [complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
             complex(self.re_max, self.im_max), complex(self.re_min, self.im_max)]
        return list(zip(z, z[1:] + z[:1]))

    def expanded(self, fraction):
        """Move every edge outward by 'fraction' of the rectangle size
        (inward for negative fractions)."""
        dr = fraction * self.width
        di = fraction * self.height
        return Rectangle(self.re_min - dr, self.re_max + dr, self.im_min - di, self.im_max + di)

    def split(self, fraction=0.5):
        """Cut the longer side at 'fraction' of its length."""
        if self.width >= self.height:
            cut = self.re_min + fraction*self.width
            return (Rectangle(self.re_min, cut, self.im_min, self.im_max),
                    Rectangle(cut, self.re_max, self.im_min, self.im_max))
        cut = self.im_min + fraction*self.height
        return (Rectangle(self.re_min, self.re_max, self.im_min, cut),
                Rectangle(self.re_min, self.re_max, cut, self.im_max))

    def to_dict(self):
        return {'re_min': self.re_min, 're_max': self.re_max,
                'im_min': self.im_min, 'im_max': self.im_max}


@dataclass(frozen=True)
class RootRecord:
    nu: complex
    multiplicity: int
    residual: float

    def to_dict(self):
        return {'re': float(np.real(self.nu)), 'im': float(np.imag(self.nu)),
                'multiplicity': int(self.multiplicity), 'residual': float(self.residual)}


def _boundary_minimum(cf, rect, n_probe=64):
    t = np.linspace(0, 1, n_probe, endpoint=False)
    nus = np.concatenate([z0 + t*(z1 - z0) for z0, z1 in rect.edges()])
    return float(np.min(np.abs(cf.eval_d(nus))))


def _contour_integrals(cf, rect, epsabs):
    """(∮ d'/d dν, ∮ ν d'/d dν) along the rectangle boundary."""
    total = np.zeros(4)
    for z0, z1 in rect.edges():
        dz = z1 - z0
        def integrand(t):
            nu = z0 + t*dz
            g = cf.log_derivative(nu) * dz
            return np.array([g.real, g.imag, (nu*g).real, (nu*g).imag])
        res, _ = quad_vec(integrand, 0., 1., epsabs=epsabs/8, epsrel=1e-12, limit=400)
        total += res
    return complex(total[0], total[1]), complex(total[2], total[3])


def _strict_count(cf, rect, contour_floor, epsabs):
    floor = _boundary_minimum(cf, rect)
    if floor <= contour_floor:
        raise ContourTooCloseToRoot(f"min |d| = {floor:.3g} on the boundary of {rect} "
                                  + f"is below the contour floor {contour_floor:.1g}.")
    i0, i1 = _contour_integrals(cf, rect, epsabs)
    winding = i0 / (2j*np.pi)
    count = int(round(winding.real))
    residual = abs(winding - count)
    if residual >= 0.25:
        raise NonIntegerWinding(f"Winding {winding:.6g} over {rect} is not close to an "
                              + f"integer (residual {residual:.3g}).")
    return count, i1


def _count(cf, rect, contour_floor, epsabs):
    cf.check_strip([complex(rect.re_min, 0), complex(rect.re_max, 0)])
    try:
        count, i1 = _strict_count(cf, rect, contour_floor, epsabs)
        return count, i1, rect
    except ContourTooCloseToRoot:
        pass
    lo, hi = cf.strip
    for fraction in _NUDGES:
        nudged = rect.expanded(fraction)
        if nudged.re_min <= lo or nudged.re_max >= hi:
            continue
        try:
            count, i1 = _strict_count(cf, nudged, contour_floor, epsabs)
        except ContourTooCloseToRoot:
            continue
        warnings.warn(f"Contour of {rect} passes too close to a root; "
                    + f"counted on {nudged} instead.", NumericalWarning)
        return count, i1, nudged
    raise ContourTooCloseToRoot(f"Could not find a contour near {rect} with |d| above "
                              + f"{contour_floor:.1g} (nudged up to 1% of its size).")


def count_roots(cf, rect, *, contour_floor=CONTOUR_FLOOR, epsabs=WINDING_EPSABS):
    """Number of roots of d in 'rect', counted with multiplicity, from the
    winding number (1/2πi)∮ d'/d dν (adaptive Gauss-Kronrod on each edge).

    Args:
        cf (CharacteristicFunction): The characteristic function.
        rect (Rectangle): Contour; must lie inside the analyticity strip.
        contour_floor (float): Smallest admissible |d| on the boundary.
            The boundary is nudged by up to 1% of its size otherwise.
        epsabs (float): Absolute quadrature target of the contour integral.
    Returns:
        int: The winding number.
    """
    return _count(cf, rect, contour_floor, epsabs)[0]


def _newton(cf, nu, tol, max_iter=50):
    for _ in range(max_iter):
        d = cf.eval_d(nu)
        dp = cf.eval_d_derivative(nu)
        if dp == 0:
            break
        step = d / dp
        nu = nu - step
        if abs(step) < 1e-3*tol*max(1., abs(nu)):
            break
    return complex(nu), float(abs(cf.eval_d(nu)))


def roots_in_rectangle(cf, rect, tol=1e-10, *, contour_floor=CONTOUR_FLOOR, epsabs=WINDING_EPSABS):
    """All roots of d in 'rect', by recursive subdivision of the winding
    count and Newton polishing of simple roots.

    Roots that stay clustered down to a diameter of 10·tol are reported as
    a single RootRecord at the cluster centroid, with the cluster winding
    as multiplicity.

    Returns:
        list: RootRecord, ordered by the subdivision (deterministic).
    """
    count, i1, rect = _count(cf, rect, contour_floor, epsabs)

    def cluster(rr, nn, ii):
        centroid = complex(ii / (2j*np.pi*nn))
        log.debug(f"Cluster of {nn} roots near {centroid} in {rr}")
        return [RootRecord(centroid, nn, float(abs(cf.eval_d(centroid))))]

    def search(rr, nn, ii, depth):
        if nn == 0:
            return []
        if nn == 1:
            guess = complex(ii / (2j*np.pi))
            if not rr.contains(guess):
                guess = rr.center
            nu, residual = _newton(cf, guess, tol)
            if residual < tol and rr.contains(nu, margin=max(tol, 1e-3*rr.diameter)):
                log.debug(f"Root {nu} (|d| = {residual:.2e}) at depth {depth}")
                return [RootRecord(nu, 1, residual)]
        if rr.diameter < 10*tol:
            return cluster(rr, nn, ii)
        for fraction in _SPLIT_FRACTIONS:
            r1, r2 = rr.split(fraction)
            try:
                n1, i1a = _strict_count(cf, r1, contour_floor, epsabs)
                n2, i1b = _strict_count(cf, r2, contour_floor, epsabs)
            except (ContourTooCloseToRoot, NonIntegerWinding):
                continue
            if n1 + n2 != nn or n1 < 0 or n2 < 0:
                continue
            return search(r1, n1, i1a, depth + 1) + search(r2, n2, i1b, depth + 1)
        return cluster(rr, nn, ii)

    return search(rect, count, i1, 0)
