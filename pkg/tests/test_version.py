# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from nlwaves import __version__

def test_version():
    assert __version__ == '0.1.0'
