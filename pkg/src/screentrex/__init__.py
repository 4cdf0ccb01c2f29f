"""Screen-T-Rex: fast self-calibrating FDR-controlled variable selection."""

from .data import Dataset, StandardizedDataset, load_csv, standardize
from .lars import PathConfig, PathResult, lars_path, knot_correlations
from .experiments import (
    ExperimentPlan,
    ExperimentOutcome,
    AggregateVotes,
    generate_dummies,
    run_experiments,
    aggregate,
)
from .selector import (
    ScreenResult,
    BootstrapCI,
    select_ordinary,
    select_confidence,
    bootstrap_ci,
    nhg_mean,
)
from .fallback import CalibrationResult, calibrate_trex
from .driver import ScreenConfig, BiobankDecision, decide, screen_phenotype, run_batch
from .simbench import (
    SimSpec,
    TruthedDataset,
    MetricRow,
    simulate,
    score,
    nhg_urn_sample,
    mc_campaign,
)

__version__ = "0.1.0"
