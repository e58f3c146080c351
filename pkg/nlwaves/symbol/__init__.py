# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from .characteristic import CharacteristicFunction, FORMS, adjugate
from .roots import Rectangle, RootRecord, ContourTooCloseToRoot, NonIntegerWinding, count_roots, \
                   roots_in_rectangle
from .hyperbolicity import TailNotDominated, HyperbolicityReport, hyperbolicity_check, tail_dominated, \
                           choose_ell_max, axis_minimum
