"""Configuration, orchestration and artifacts of the command-line experiments."""

from experiments.config import DEFAULTS, ExperimentConfig, load_config_file, parse_profile
from experiments.engine import SUITES, ExperimentEngine, worst_verdict
from experiments.output import TOOL_NAME, TOOL_VERSION, build_header, render_csv, render_json

__all__ = [
    'DEFAULTS', 'ExperimentConfig', 'load_config_file', 'parse_profile',
    'SUITES', 'ExperimentEngine', 'worst_verdict',
    'TOOL_NAME', 'TOOL_VERSION', 'build_header', 'render_csv', 'render_json',
]
