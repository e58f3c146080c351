# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from .problem import WaveProblem, Nonlinearity
from .galerkin import CosineGalerkin
from .reduction import ReducedData, OmegaFixedPoint, NoRoot, MultipleAxisRoots, NonSimpleRoot, \
                       ResonanceDetected, NumericalRankAmbiguous, AlphaVanishes, NewtonDiverged, \
                       NotContracting, find_omega_star, kernel_vectors, alpha_coefficient, reduced_data, \
                       solve_psi, reduced_R, reduced_terms, fixed_point_omega, direct_newton, \
                       grid_residual, galerkin_residual, symbol_on_modes
from .branch import BranchPoint, WaveBranch, UniquenessReport, continue_branch, uniqueness_probe
