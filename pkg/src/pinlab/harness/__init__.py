"""Configuration-driven experiment runner."""
from .config import ExperimentConfig, load_config, parse_config
from .plot import cmd_plot, render_svg
from .runner import cmd_generate, cmd_select, cmd_sweep, cmd_validate, run_select

__all__ = ["ExperimentConfig", "cmd_generate", "cmd_plot", "cmd_select", "cmd_sweep", "cmd_validate",
           "load_config", "parse_config", "render_svg", "run_select"]
