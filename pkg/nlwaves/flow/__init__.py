# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from .path import OperatorPath, EndpointNotHyperbolic, smoothstep, weighted_limits
from .crossings import CrossingEvent, CrossingLedger, CrossingsNotIsolated, detect_crossings, \
                       crossing_number, fredholm_index
from .continuation import RootTrajectory, RootCollision, LeftStrip, ContinuationStalled, continue_root
