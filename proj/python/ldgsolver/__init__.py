"""Python interface to the implicit LDG degenerate-diffusion solver."""

from _ldgcore import (
    ConfigError,
    compare_runs,
    gauss_lobatto_rule,
    gauss_rule,
    preset_names,
    run,
    run_table,
    tableau,
)

__all__ = [
    "ConfigError",
    "compare_runs",
    "gauss_lobatto_rule",
    "gauss_rule",
    "preset_names",
    "run",
    "run_table",
    "tableau",
]
