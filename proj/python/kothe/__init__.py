"""Seminorms, polars and risk-measure norms on finite probability spaces."""

from ._kothe import (
    ConfigError,
    ConvergenceError,
    DomainError,
    ParseError,
    RiskMeasure,
    Seminorm,
    Space,
    Young,
    amemiya_dual_norm,
    check_axioms,
    cvar_infimum,
    evaluate_risk,
    expectation,
    norm,
    penalty,
    polar,
    polar_closed_form,
    quantile,
    quantile_integral,
    risk_dual_norm,
    risk_norm,
    subgradient,
    verify_bipolar,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "ParseError",
    "RiskMeasure",
    "Seminorm",
    "Space",
    "Young",
    "amemiya_dual_norm",
    "check_axioms",
    "cvar_infimum",
    "evaluate_risk",
    "expectation",
    "norm",
    "penalty",
    "polar",
    "polar_closed_form",
    "quantile",
    "quantile_integral",
    "risk_dual_norm",
    "risk_norm",
    "subgradient",
    "verify_bipolar",
]
