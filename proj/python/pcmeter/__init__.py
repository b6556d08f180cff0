"""Partial-compliance measures (T, tau and P) for business process traces."""

from ._core import (
    Error,
    Log,
    Result,
    Spec,
    aggregate,
    classify,
    evaluate,
    evaluate_rule,
    format_rule,
    load_log,
    load_spec,
    parse_log,
    parse_spec,
    payable,
    reference_log,
    scale_map,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "Error",
    "Log",
    "Result",
    "Spec",
    "aggregate",
    "classify",
    "evaluate",
    "evaluate_rule",
    "format_rule",
    "load_log",
    "load_spec",
    "parse_log",
    "parse_spec",
    "payable",
    "reference_log",
    "scale_map",
    "simulate",
]
