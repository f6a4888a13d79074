from .scenario import MODES, SECTIONS, ScenarioConfig
from .config import (build_config, config_diff, config_hash, format_diff, load_config,
                     to_dict, with_overrides)
from .truth import GroundTruth, TruthRecord, enclosing_center, generate_truth
from .radar import SimulatedRadar, generate_measurements
from .trial import FilterMode, StepRecord, TrialResult, run_filter, run_trial, simulate
from .montecarlo import MonteCarloResult, TrialBundle, aggregate, monte_carlo, summarize
