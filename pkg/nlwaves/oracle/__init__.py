# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from .inhomogeneous import InhomogeneousOperator, kernel_terms
from .grid_operator import GridOperator, IndexReport, GridTooCoarse, NoSpectralGap, assemble, \
                           numerical_index, outer_mass_fraction, smoothed_weight
from .weyl import PrincipalPartInvertible, LimitsHyperbolic, weyl_demo_principal, weyl_demo_infinity
