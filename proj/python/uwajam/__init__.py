"""Coverage, average rate and energy efficiency of underwater acoustic links
under a Poisson field of seabed jammers."""

from ._core import (
    ConfigError,
    DomainError,
    EnvironmentConfig,
    JammerField,
    LinkAnalyzer,
    LinkConfig,
    MetricEstimate,
    NumericalError,
    Scenario,
    absorption_db_per_km,
    average_rate,
    coverage,
    energy_efficiency,
    load_config,
    load_config_text,
    lt_fading,
    lt_interference,
    marcum_q1,
    noise_power,
    pathloss_db,
    preset,
    semianalytic_coverage,
    simulate,
    sweep_csv,
    validate,
)

__version__ = "0.1.0"
