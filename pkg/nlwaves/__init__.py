# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from .general import _pkg_root, __version__, NlwavesError, NumericalWarning
from .tools import timestamp, get_hash
from .kernels import BaseKernel, Gaussian, TwoSidedExponential, ShiftedGaussianBump, ScaledKernel, KernelModel, \
                     StripViolation, base_kernel_from_dict
from .symbol import CharacteristicFunction, Rectangle, RootRecord, HyperbolicityReport, count_roots, \
                    roots_in_rectangle, hyperbolicity_check, ContourTooCloseToRoot, NonIntegerWinding, \
                    TailNotDominated
from .flow import OperatorPath, smoothstep, weighted_limits, CrossingEvent, CrossingLedger, RootTrajectory, detect_crossings, crossing_number, \
                  fredholm_index, continue_root, EndpointNotHyperbolic, CrossingsNotIsolated, RootCollision, \
                  LeftStrip, ContinuationStalled
from .oracle import InhomogeneousOperator, GridOperator, IndexReport, assemble, numerical_index, \
                    weyl_demo_principal, weyl_demo_infinity, GridTooCoarse, NoSpectralGap, \
                    PrincipalPartInvertible, LimitsHyperbolic
from .wavetrain import WaveProblem, Nonlinearity, CosineGalerkin, ReducedData, BranchPoint, WaveBranch, \
                       UniquenessReport, find_omega_star, kernel_vectors, alpha_coefficient, reduced_data, \
                       solve_psi, reduced_R, reduced_terms, fixed_point_omega, direct_newton, grid_residual, \
                       continue_branch, uniqueness_probe, NoRoot, MultipleAxisRoots, NonSimpleRoot, \
                       ResonanceDetected, NumericalRankAmbiguous, AlphaVanishes, NewtonDiverged, NotContracting
from .manifold import WeightedGrid, KernelBasisE0, CutoffNonlinearity, BorderedSolve, ManifoldPoint, FlowCheck, \
                      ManifoldSetup, build_bordered, fixed_point_Phi, reduced_vector_field, linearization, \
                      reduced_flow_check, orbit_period, polar_sample, branch_field, branch_coordinates, \
                      build_center_manifold, original_coordinates, BorderedSingular, NoPeriodicOrbit, \
                      ReducedFlowFailed, InversionFailed
