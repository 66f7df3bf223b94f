"""Redundant records of a blackbody-illuminated object: decoherence,
mutual information and redundancy, with brute-force oracles."""

from .errors import (
    DegenerateInputError,
    DomainError,
    NoSolutionError,
    OracleMismatchError,
    OracleSizeError,
    QDarwinError,
    RegimeError,
    RegimeWarning,
    ScenarioError,
)
from .info import (
    LN2,
    DecoherenceFactor,
    Illumination,
    InfoCurve,
    RedundancyResult,
    branch_entropy,
    info_curve,
    mutual_information,
    mutual_information_isotropic,
    mutual_information_point,
    redundancy_asymptotic,
    redundancy_exact,
)
from .scattering import (
    DecoherenceTime,
    PhysicalScenario,
    Regime,
    bundled_scenario,
    decoherence_time,
    gamma_at_time,
    load_scenario,
)

__version__ = "0.1.0"
