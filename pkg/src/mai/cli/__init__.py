"""Command-line interface and run configuration."""

from .main import build_parser, main
from .settings import RunConfig, load_run_config, parse_run_config

__all__ = ["RunConfig", "build_parser", "load_run_config", "main", "parse_run_config"]
