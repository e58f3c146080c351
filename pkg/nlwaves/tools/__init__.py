# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from .general_tools import timestamp, get_hash
from .function_tools import count_required_arguments, has_variable_length_positional_arguments, \
                            assert_callback
