# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from .grid import WeightedGrid, KernelBasisE0
from .cutoff import CutoffNonlinearity, smooth_indicator, smooth_indicator_derivative
from .bordered import BorderedSolve, BorderedSingular, build_bordered
from .reduced import ManifoldPoint, FlowCheck, ManifoldSetup, NoPeriodicOrbit, ReducedFlowFailed, \
                     fixed_point_Phi, trajectory_derivative, reduced_vector_field, linearization, \
                     reduced_flow_check, orbit_period, polar_sample, branch_field, branch_coordinates, \
                     build_center_manifold
from .coordinates import original_coordinates, InversionFailed
