# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

from .config import Scenario, ConfigError, list_scenarios, load_scenario, parse_scenario
from .output import RunArtifacts, verify_manifest
from .acceptance import CRITERIA, CriterionResult, run_acceptance, run_criterion
from .main import main, run_scenario
