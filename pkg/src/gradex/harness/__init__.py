"""Trials, sweeps, configuration files and output emission."""

from gradex.harness.config import SweepConfig, build_sweep_config
from gradex.harness.trial import SweepReport, TrialResult, derive_seed, run_sweep, run_trial

__all__ = ["SweepConfig", "SweepReport", "TrialResult", "build_sweep_config",
           "derive_seed", "run_sweep", "run_trial"]
