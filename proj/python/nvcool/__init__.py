"""Cooling of a microwave mode by optically pumped NV-centre spins.

Thin wrapper over the C++ core. All rates and frequencies are angular (rad/s),
temperatures in K, powers in W.
"""

from ._core import (
    ConfigError,
    ConvergenceError,
    DegenerateRatesError,
    DomainError,
    IntegrationError,
    MasingThresholdError,
    NvcoolError,
    __version__,
    cli,
    collective_coupling,
    dicke_numbers,
    effective_temperature,
    experiment_names,
    params,
    power_from_pump_rate,
    preset_names,
    pump_rate_from_power,
    run,
    steady_photon_number,
    thermal_photon_number,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DegenerateRatesError",
    "DomainError",
    "IntegrationError",
    "MasingThresholdError",
    "NvcoolError",
    "__version__",
    "cli",
    "collective_coupling",
    "dicke_numbers",
    "effective_temperature",
    "experiment_names",
    "params",
    "power_from_pump_rate",
    "preset_names",
    "pump_rate_from_power",
    "run",
    "steady_photon_number",
    "thermal_photon_number",
]
