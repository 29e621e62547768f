"""Unruh-DeWitt detectors in 1+1D cavities: accelerating detector vs accelerating cavity."""

__version__ = "0.1.0"

from .errors import (AccuracyError, ConfigError, DomainError, PerturbativeWarning,  # noqa: E402
                     RigidityError, SpectrumError, UDWError, UsageError)
from .kinematics import Anchor, ScenarioConfig, ScenarioKind  # noqa: E402
from .quadrature import QuadratureSpec  # noqa: E402
from .response import (DetectorParams, resonance_scan, scenario_difference,  # noqa: E402
                       transition_probability, transition_probability_direct,
                       transition_rate, transition_rate_direct)
from .states import Coherent, Fock, Vacuum  # noqa: E402

__all__ = [
    "AccuracyError", "Anchor", "Coherent", "ConfigError", "DetectorParams", "DomainError",
    "Fock", "PerturbativeWarning", "QuadratureSpec", "RigidityError", "ScenarioConfig",
    "ScenarioKind", "SpectrumError", "UDWError", "UsageError", "Vacuum", "resonance_scan",
    "scenario_difference", "transition_probability", "transition_probability_direct",
    "transition_rate", "transition_rate_direct",
]
