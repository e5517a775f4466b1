"""Test cases, configuration files and run orchestration."""

from .cases import Case, build_case, pressure_ratio_table
from .config import CASES, RunConfig, dump_config, load_config, parse_config_text
from .runner import SWEEP_COLUMNS, RunResult, run, sweep

__all__ = ["CASES", "Case", "RunConfig", "RunResult", "SWEEP_COLUMNS",
           "build_case", "dump_config", "load_config", "parse_config_text",
           "pressure_ratio_table", "run", "sweep"]
