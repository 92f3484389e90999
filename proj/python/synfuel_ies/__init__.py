"""Python bindings for the synfuel IES study engine."""

from ._core import (
    ConfigError,
    ContractError,
    ConvergenceError,
    EngineError,
    FitError,
    IesConfiguration,
    InfeasibleError,
    ProductTriple,
    ShortfallError,
    TechnoParams,
    capacity_ranges,
    co2,
    co2_demand,
    dispatch,
    effective_elec_spec,
    finance,
    fuel,
    htse_h2_rate,
    monte_carlo_npv,
    pricegen,
    scenario_hash,
)

__all__ = [
    "ConfigError",
    "ContractError",
    "ConvergenceError",
    "EngineError",
    "FitError",
    "IesConfiguration",
    "InfeasibleError",
    "ProductTriple",
    "ShortfallError",
    "TechnoParams",
    "capacity_ranges",
    "co2",
    "co2_demand",
    "dispatch",
    "effective_elec_spec",
    "finance",
    "fuel",
    "htse_h2_rate",
    "monte_carlo_npv",
    "pricegen",
    "scenario_hash",
]
