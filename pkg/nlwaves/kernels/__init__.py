# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from .base_kernels import BaseKernel, Gaussian, TwoSidedExponential, ShiftedGaussianBump, ScaledKernel, \
                          base_kernel_from_dict, TRUNCATION_THRESHOLD
from .kernel_model import KernelModel, StripViolation
