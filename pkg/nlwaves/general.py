# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from pathlib import Path

_pkg_root = Path(__file__).parent.absolute()


class NlwavesError(Exception):
    """Marker base mixed into every domain error of the package."""


class NumericalWarning(UserWarning):
    """A computation went through but needs the user's attention."""


# ===================================================
# Do not change
# ===================================================
__version__ = '0.1.0'
# ===================================================
