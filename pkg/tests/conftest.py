# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import pytest

from nlwaves.cli.config import OUTPUT_ROOT_ENV


@pytest.fixture(autouse=True)
def output_root(tmp_path_factory, monkeypatch):
    """Keep CLI runs that do not pass --output out of the working directory."""
    root = tmp_path_factory.mktemp('nlwaves_output')
    monkeypatch.setenv(OUTPUT_ROOT_ENV, str(root))
    return root
