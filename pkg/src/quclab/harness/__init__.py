"""Experiment runner: configuration, the experiment catalog, reports and the CLI."""

from quclab.harness.config import ExperimentConfig, load_config
from quclab.harness.experiments import CATALOG, Experiment, get_experiment, list_experiments, run_experiment
from quclab.harness.report import Check, ExperimentReport, Recorder

__all__ = [
    "CATALOG", "Check", "Experiment", "ExperimentConfig", "ExperimentReport", "Recorder",
    "get_experiment", "list_experiments", "load_config", "run_experiment",
]
