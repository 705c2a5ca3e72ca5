from ._fwgame import (
    ConfigError,
    ConvexSet,
    DegenerateGradientError,
    Error,
    FitError,
    FWInstance,
    UnsupportedOperation,
    classic_fw,
    fit_rate,
    fw_as_game,
    fw_equilibrium_gap,
    gauge_ftrl_step,
    linear_rate_fw,
    new_fw,
    preset_names,
    quadratic_instance,
    run_preset,
)

__all__ = [
    "ConfigError",
    "ConvexSet",
    "DegenerateGradientError",
    "Error",
    "FitError",
    "FWInstance",
    "UnsupportedOperation",
    "classic_fw",
    "fit_rate",
    "fw_as_game",
    "fw_equilibrium_gap",
    "gauge_ftrl_step",
    "linear_rate_fw",
    "new_fw",
    "preset_names",
    "quadratic_instance",
    "run_preset",
]
