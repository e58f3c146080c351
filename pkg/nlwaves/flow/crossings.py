# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from ..general import NlwavesError
from ..symbol import Rectangle, ContourTooCloseToRoot, count_roots, roots_in_rectangle, axis_minimum

log = logging.getLogger(__name__)

DEFAULT_SCAN_POINTS = 101
BRACKET_WIDTH = 1e-8
AXIS_TOLERANCE = 1e-6
MAX_HALVINGS = 30


class CrossingsNotIsolated(ArithmeticError, NlwavesError):
    pass


@dataclass
class CrossingEvent:
    rho: float
    axis_roots: list
    M_R_before: int
    M_R_after: int
    M_L_before: int = 0
    M_L_after: int = 0
    delta_rho: float = 0.

    @property
    def contribution(self):
        return self.M_R_after - self.M_R_before

    def to_dict(self):
        return {'rho': self.rho, 'axis_roots': [rr.to_dict() for rr in self.axis_roots],
                'M_R_before': self.M_R_before, 'M_R_after': self.M_R_after,
                'M_L_before': self.M_L_before, 'M_L_after': self.M_L_after,
                'delta_rho': self.delta_rho, 'contribution': self.contribution}


@dataclass
class CrossingLedger:
    events: list = field(default_factory=list)

    @property
    def total(self):
        return sum(ev.contribution for ev in self.events)

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def to_dict(self):
        return {'crossing_number': self.total, 'events': [ev.to_dict() for ev in self.events]}

    def to_frame(self):
        columns = ['rho', 'n_axis_roots', 'M_R_before', 'M_R_after', 'M_L_before', 'M_L_after',
                   'delta_rho', 'contribution']
        return pd.DataFrame([[ev.rho, len(ev.axis_roots), ev.M_R_before, ev.M_R_after, ev.M_L_before,
                              ev.M_L_after, ev.delta_rho, ev.contribution] for ev in self.events],
                            columns=columns)


def _margin(path, rho, n_samples):
    return axis_minimum(path(rho), path.ell_max, n_samples)[0]


def detect_crossings(path, rho_step=None, *, n_samples=801, tol=1e-8):
    """Parameter brackets where some root of d^ρ sits on the imaginary axis.

    m(ρ) = min_ℓ |d^ρ(iℓ)| is scanned with step 'rho_step'; local minima
    of the scan are refined by bounded Brent minimization, and those that
    dip below 10·tol are returned as brackets of width 1e-8.

    Returns:
        list: (ρ_lo, ρ_hi) tuples in increasing ρ.
    """
    path.check_endpoints(tol=tol)
    if rho_step is None:
        rho_step = path.span / (DEFAULT_SCAN_POINTS - 1)
    n_points = max(int(np.ceil(path.span / rho_step)) + 1, 3)
    rhos = np.linspace(path.rho_min, path.rho_max, n_points)
    margins = np.array([_margin(path, rho, n_samples) for rho in rhos])
    minima = np.flatnonzero((margins[1:-1] <= margins[:-2]) & (margins[1:-1] <= margins[2:])) + 1

    brackets = []
    for idx in minima:
        res = minimize_scalar(lambda rho: _margin(path, rho, n_samples), bounds=(rhos[idx-1], rhos[idx+1]),
                              method='bounded', options={'xatol': 0.1*BRACKET_WIDTH})
        log.debug(f"{path.name}: margin minimum {res.fun:.3e} at ρ = {res.x:.10f}")
        if res.fun >= 10*tol:
            continue
        if brackets and abs(res.x - np.mean(brackets[-1])) < BRACKET_WIDTH:
            continue
        lo = max(res.x - BRACKET_WIDTH/2, path.rho_min)
        hi = min(res.x + BRACKET_WIDTH/2, path.rho_max)
        brackets.append((lo, hi))
    log.info(f"{path.name}: {len(brackets)} crossing(s) detected")
    return brackets


def _axis_roots(path, rho, tol):
    cf = path(rho)
    width = min(0.25*path.strip_half_width, 0.05)
    rect = Rectangle(-width, width, -path.ell_max, path.ell_max)
    roots = roots_in_rectangle(cf, rect, tol=tol)
    return [rr for rr in roots if abs(rr.nu.real) < AXIS_TOLERANCE]


def _group_by_height(roots, height):
    groups = []
    for rr in sorted(roots, key=lambda rr: rr.nu.imag):
        if groups and rr.nu.imag - groups[-1][-1].nu.imag < 2*height:
            groups[-1].append(rr)
        else:
            groups.append([rr])
    return groups


def _local_counts(cf, centers, height, half_strip):
    """(M_L, M_R, roots) summed over the local rectangles."""
    m_l = m_r = 0
    roots = []
    for center in centers:
        im = (center - height, center + height)
        m_r += count_roots(cf, Rectangle(0., half_strip, *im))
        m_l += count_roots(cf, Rectangle(-half_strip, 0., *im))
        roots += roots_in_rectangle(cf, Rectangle(-half_strip, half_strip, *im))
    return m_l, m_r, roots


def crossing_number(path, local_rect_height=0.02, *, rho_step=None, tol=1e-8, root_tol=1e-10):
    """Signed count of characteristic roots crossing the imaginary axis.

    At every crossing ρ_j the roots on the axis are located and, for each
    cluster at height ℓ, the roots in the half-rectangles
    R = (0, η/2) × (ℓ - H, ℓ + H) and L = (-η/2, 0) × (ℓ - H, ℓ + H) are
    counted at ρ_j ± δρ. The contribution of the crossing is
    M_R(ρ_j + δρ) - M_R(ρ_j - δρ).

    δρ starts at the scan step and is halved until every root in the local
    rectangles stays within H/4 of the axis roots and no root is lost
    (M_L + M_R equals the local winding on both sides).

    Args:
        path (OperatorPath): Path with hyperbolic endpoints.
        local_rect_height (float): H. Default 0.02.
        rho_step (float, optional): Scan step of the crossing detection.
        tol (float): Hyperbolicity threshold (10·tol) of detect_crossings.
        root_tol (float): Root polishing tolerance.
    Returns:
        tuple: (crossing number, CrossingLedger)
    Raises:
        CrossingsNotIsolated: if crossings are closer than 10·H or no
            admissible δρ exists.
    """
    brackets = detect_crossings(path, rho_step, tol=tol)
    step = rho_step or path.span / (DEFAULT_SCAN_POINTS - 1)
    height = float(local_rect_height)
    half_strip = path.strip_half_width / 2
    mids = [0.5*(lo + hi) for lo, hi in brackets]
    for r0, r1 in zip(mids, mids[1:]):
        if r1 - r0 <= 10*height:
            raise CrossingsNotIsolated(f"{path.name}: crossings at ρ = {r0:.8g} and ρ = {r1:.8g} are "
                                     + f"closer than 10·H = {10*height:g}.")

    ledger = CrossingLedger()
    for rho_j in mids:
        axis_roots = _axis_roots(path, rho_j, root_tol)
        if not axis_roots:
            log.warning(f"{path.name}: no axis root found at ρ = {rho_j:.10f}; bracket ignored")
            continue
        centers = [float(np.mean([rr.nu.imag for rr in group]))
                   for group in _group_by_height(axis_roots, height)]
        winding = sum(count_roots(path(rho_j), Rectangle(-half_strip, half_strip, cc - height, cc + height))
                      for cc in centers)
        delta = step
        for _ in range(MAX_HALVINGS):
            rho_b = max(rho_j - delta, path.rho_min)
            rho_a = min(rho_j + delta, path.rho_max)
            try:
                before = _local_counts(path(rho_b), centers, height, half_strip)
                after = _local_counts(path(rho_a), centers, height, half_strip)
            except ContourTooCloseToRoot:
                delta /= 2
                continue
            moved = [min(abs(rr.nu - ar.nu) for ar in axis_roots) for rr in before[2] + after[2]]
            if before[0] + before[1] == winding and after[0] + after[1] == winding \
            and (not moved or max(moved) < height/4):
                break
            log.debug(f"{path.name}: halving δρ = {delta:.3e} at ρ = {rho_j:.10f}")
            delta /= 2
        else:
            raise CrossingsNotIsolated(f"{path.name}: no admissible δρ around ρ = {rho_j:.10f} "
                                     + f"(local winding {winding}).")
        event = CrossingEvent(rho_j, axis_roots, before[1], after[1], before[0], after[0], delta)
        log.info(f"{path.name}: crossing at ρ = {rho_j:.8f}, contribution {event.contribution:+d}")
        ledger.events.append(event)
    return ledger.total, ledger


def fredholm_index(path, **kwargs):
    """Index of the operator whose limits the path joins: -cross(path)."""
    return -crossing_number(path, **kwargs)[0]
