"""Throughput prediction for lock-free search data structures."""

from ._core import (
    ConfigError,
    che_hit_ratios,
    ks_exponential,
    predict,
    run_cli,
    simulate,
)

__all__ = [
    "ConfigError",
    "che_hit_ratios",
    "ks_exponential",
    "predict",
    "run_cli",
    "simulate",
]
