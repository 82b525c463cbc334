"""Team assembly across two scientific cultures: simulation, metrics, calibration."""

from .engine import SimState, Team, retire_inactive, run, step
from .metrics import (MetricsRow, avg_team_size, component_census, giant_component_pct,
                      interdisciplinary_pct, team_composition_stats)
from .params import (Culture, CultureParams, InvalidParams, ModelParams, default_params,
                     load_config, validate_params)
from .rng import RngStream
from .runner import ExperimentResult, ExperimentSpec, run_experiment, summarize

__all__ = [
    "Culture", "CultureParams", "ModelParams", "InvalidParams", "default_params", "load_config",
    "validate_params", "RngStream", "SimState", "Team", "step", "run", "retire_inactive",
    "MetricsRow", "avg_team_size", "component_census", "giant_component_pct",
    "interdisciplinary_pct", "team_composition_stats", "ExperimentSpec", "ExperimentResult",
    "run_experiment", "summarize",
]
