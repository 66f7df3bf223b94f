"""From an SI illumination scenario to decoherence times and factors.

A dielectric sphere sits in a superposition of two positions a distance
``separation_m`` apart and scatters blackbody photons. Two limits are
covered:

* dipole regime (separation much smaller than the thermal wavelength),
  where the rate grows as ``separation**2`` and depends on the angle between
  the light and the separation vector;
* saturated regime (separation much larger than the thermal wavelength),
  where every scattered photon is a complete record and the rate is
  twice the scattering rate.

Photon wavenumbers ``k`` are angular (``lambda = 2 pi / k``) and a photon
carries energy ``hbar c k``.
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import asdict, dataclass
from functools import lru_cache
from importlib import resources

import jsonschema
import numpy as np
from scipy import constants, integrate, special

from .errors import DomainError, RegimeError, RegimeWarning, ScenarioError
from .info import DecoherenceFactor, Illumination

__all__ = [
    "HBAR",
    "C",
    "K_B",
    "WIEN_B",
    "DECOHERENCE_CONSTANT",
    "SATURATED_CONSTANT",
    "MEAN_PHOTON_ENERGY",
    "ISOTROPIC_ANGULAR_FACTOR",
    "Regime",
    "PhysicalScenario",
    "DecoherenceTime",
    "load_scenario",
    "bundled_scenario",
    "effective_radius",
    "angular_factor",
    "thermal_peak_wavelength",
    "resolve_regime",
    "single_photon_element",
    "planck_moment",
    "thermal_constant_check",
    "irradiance_to_density",
    "density_to_irradiance",
    "decoherence_time_dipole",
    "decoherence_time_saturated",
    "decoherence_time",
    "gamma_at_time",
    "finite_volume_gamma",
]

# SI 2019 exact values (identical in CODATA 2018 and 2022).
HBAR = constants.hbar
C = constants.c
K_B = constants.k
WIEN_B = constants.physical_constants["Wien wavelength displacement law constant"][0]

DECOHERENCE_CONSTANT = 161280.0 * float(special.zeta(9.0)) / math.pi**3
SATURATED_CONSTANT = 57600.0 * float(special.zeta(7.0)) / math.pi**3
# mean thermal photon energy in units of k_B T
MEAN_PHOTON_ENERGY = math.pi**4 / (30.0 * float(special.zeta(3.0)))
# solid-angle average of 3 + 11 cos^2(theta)
ISOTROPIC_ANGULAR_FACTOR = 20.0 / 3.0

# prefactor of the per-photon deficit, 256 pi^7 / 15
_ELEMENT_PREFACTOR = 256.0 * math.pi**7 / 15.0
_CROSSOVER_DECADE = 10.0
# ln x integration window; the Planck integrands are below 1e-300 outside it
_U_MIN, _U_MAX = -60.0, math.log(800.0)


class Regime(str, enum.Enum):
    DIPOLE = "dipole"
    SATURATED = "saturated"
    AUTO = "auto"


@dataclass(frozen=True)
class PhysicalScenario:
    """A sphere in a two-position superposition under thermal illumination.

    Attributes are SI: radius and separation in metres, temperature in
    kelvin, irradiance in W/m^2, angle in radians.
    """

    radius_m: float
    epsilon: float
    separation_m: float
    temperature_K: float
    irradiance_W_m2: float
    theta_rad: float = 0.0
    illumination: Illumination = Illumination.POINT
    regime: Regime = Regime.AUTO

    def __post_init__(self):
        object.__setattr__(self, "illumination", Illumination.parse(self.illumination))
        try:
            object.__setattr__(self, "regime", Regime(str(getattr(self.regime, "value", self.regime)).lower()))
        except ValueError:
            raise DomainError(f"unknown regime {self.regime!r}") from None
        checks = [
            (self.radius_m > 0, "radius must be positive"),
            (self.epsilon > 1, "relative permittivity must exceed 1"),
            (self.separation_m >= 0, "separation must be non-negative"),
            (self.temperature_K > 0, "temperature must be positive"),
            (self.irradiance_W_m2 >= 0, "irradiance must be non-negative"),
            (0 <= self.theta_rad <= math.pi, "theta must lie in [0, pi]"),
        ]
        for ok, message in checks:
            if not ok:
                raise DomainError(message)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["illumination"] = self.illumination.value
        d["regime"] = self.regime.value
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "PhysicalScenario":
        try:
            jsonschema.validate(data, _scenario_schema())
        except jsonschema.ValidationError as exc:
            raise ScenarioError(f"invalid scenario: {exc.message}") from None
        return cls(**data)


@dataclass(frozen=True)
class DecoherenceTime:
    tau_d: float
    regime: Regime

    @property
    def rate(self) -> float:
        return 0.0 if math.isinf(self.tau_d) else 1.0 / self.tau_d


@lru_cache(maxsize=None)
def _scenario_schema() -> dict:
    text = resources.files("qdarwin").joinpath("data/scenario.schema.json").read_text()
    return json.loads(text)


def load_scenario(path) -> PhysicalScenario:
    """Read a scenario from a flat JSON file; unknown keys are rejected."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: not valid JSON ({exc})") from None
    return PhysicalScenario.from_dict(data)


def bundled_scenario(name: str) -> PhysicalScenario:
    """Load one of the scenarios shipped with the package, e.g. ``"dust-grain"``."""
    ref = resources.files("qdarwin").joinpath(f"data/{name}.json")
    if not ref.is_file():
        raise ScenarioError(f"no bundled scenario named {name!r}")
    return PhysicalScenario.from_dict(json.loads(ref.read_text()))


def effective_radius(a: float, epsilon: float, convention: str = "standard") -> float:
    """Radius of a perfectly polarizable sphere with the same dipole response.

    ``"standard"`` uses the Clausius-Mossotti factor ``(eps - 1) / (eps + 2)``;
    ``"minus-two"`` uses ``(eps - 1) / (eps - 2)``, singular at ``eps = 2``.
    """
    if not a > 0:
        raise DomainError(f"radius must be positive, got {a!r}")
    if not epsilon > 1:
        raise DomainError(f"relative permittivity must exceed 1, got {epsilon!r}")
    if math.isinf(epsilon):
        return float(a)
    if convention == "standard":
        ratio = (epsilon - 1.0) / (epsilon + 2.0)
    elif convention == "minus-two":
        if epsilon == 2.0:
            raise DomainError("minus-two effective radius is singular at epsilon = 2")
        ratio = (epsilon - 1.0) / (epsilon - 2.0)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return float(a * np.cbrt(ratio))


def angular_factor(theta: float) -> float:
    """``3 + 11 cos^2(theta)``, between 3 (perpendicular) and 14 (parallel)."""
    return 3.0 + 11.0 * math.cos(theta) ** 2


def _scenario_angular_factor(scenario: PhysicalScenario) -> float:
    if scenario.illumination is Illumination.ISOTROPIC:
        return ISOTROPIC_ANGULAR_FACTOR
    return angular_factor(scenario.theta_rad)


def thermal_peak_wavelength(temperature: float) -> float:
    """Wien peak of the blackbody spectral radiance per unit wavelength."""
    if not temperature > 0:
        raise DomainError(f"temperature must be positive, got {temperature!r}")
    return WIEN_B / temperature


def resolve_regime(scenario: PhysicalScenario) -> Regime:
    """Pick the dipole or saturated formula, warning near their crossover.

    Raises RegimeError when an explicitly requested regime is off by more
    than a decade.
    """
    lam = thermal_peak_wavelength(scenario.temperature_K)
    dx = scenario.separation_m
    regime = scenario.regime
    if regime is Regime.AUTO:
        regime = Regime.SATURATED if dx > lam else Regime.DIPOLE
    elif regime is Regime.DIPOLE and dx > _CROSSOVER_DECADE * lam:
        raise RegimeError(
            f"dipole regime requested but separation {dx:.3g} m exceeds "
            f"10x the thermal wavelength {lam:.3g} m"
        )
    elif regime is Regime.SATURATED and dx < lam / _CROSSOVER_DECADE:
        raise RegimeError(
            f"saturated regime requested but separation {dx:.3g} m is below "
            f"a tenth of the thermal wavelength {lam:.3g} m"
        )
    if lam / _CROSSOVER_DECADE <= dx <= _CROSSOVER_DECADE * lam:
        warnings.warn(
            f"separation {dx:.3g} m is within a decade of the thermal wavelength "
            f"{lam:.3g} m; neither limiting rate is accurate there",
            RegimeWarning,
            stacklevel=2,
        )
    if scenario.radius_m > lam / _CROSSOVER_DECADE:
        warnings.warn(
            f"radius {scenario.radius_m:.3g} m is not small against the thermal "
            f"wavelength {lam:.3g} m; the dipole cross section is only indicative",
            RegimeWarning,
            stacklevel=2,
        )
    return regime


def single_photon_element(
    scenario: PhysicalScenario,
    wavelength: float,
    t: float,
    volume: float,
    convention: str = "standard",
) -> float:
    """``|<k| S1^dagger S2 |k>|^2`` for one photon of a given wavelength.

    Leading order in ``1 / volume``; dipole regime only.
    """
    if not wavelength > 0 or not volume > 0 or t < 0:
        raise DomainError("need wavelength > 0, volume > 0 and t >= 0")
    a_eff = effective_radius(scenario.radius_m, scenario.epsilon, convention)
    deficit = (
        _ELEMENT_PREFACTOR
        * angular_factor(scenario.theta_rad)
        * a_eff**6
        * scenario.separation_m**2
        * t
        * C
        / (volume * wavelength**6)
    )
    if deficit >= 1.0:
        raise RegimeError(
            f"per-photon deficit {deficit:.3g} >= 1: volume too small for leading order"
        )
    return 1.0 - deficit


def _planck_integrand(u: float, n: float) -> float:
    # x = exp(u); x**n / (exp(x) - 1) dx = x**(n + 1) exp(-x) / (1 - exp(-x)) du
    x = math.exp(u)
    if x > 800.0:
        return 0.0
    return x ** (n + 1.0) * math.exp(-x) / -math.expm1(-x)


def planck_moment(n: float) -> float:
    """``int_0^inf x**n / (exp(x) - 1) dx`` by adaptive quadrature.

    Integrates over ``u = ln x`` so both the power-law head and the
    exponential tail are smooth. Equals ``Gamma(n+1) zeta(n+1)`` for n > 0.
    """
    if not n >= 1:
        raise DomainError(f"moment order must be >= 1, got {n!r}")
    value, err = integrate.quad(
        _planck_integrand, _U_MIN, _U_MAX, args=(n,), epsabs=0.0, epsrel=1e-11, limit=200
    )
    if not err <= 1e-9 * abs(value):
        raise ArithmeticError(f"Planck moment {n} did not converge (error estimate {err:.3g})")
    return value


def thermal_constant_check() -> tuple[float, float]:
    """Recompute the dipole and saturated rate constants by quadrature.

    The dipole constant averages the per-photon deficit ``~ k**6`` over the
    normalized Planck number distribution and converts photon density to
    irradiance through the mean photon energy. The saturated constant does
    the same with twice the Rayleigh cross section ``(8 pi / 3) k**4 a_eff**6``.

    Returns
    -------
    (float, float)
        ``(C_dipole, C_saturated)``, to compare with ``161280 zeta(9) / pi**3``
        and ``57600 zeta(7) / pi**3``.
    """
    m3 = planck_moment(3)
    m6 = planck_moment(6)
    m8 = planck_moment(8)
    # <k^6> / <E> in units of (k_B T)^5 / (hbar c)^6 is (m8 / m2) / (m3 / m2)
    dipole = _ELEMENT_PREFACTOR / (2.0 * math.pi) ** 6 * m8 / m3
    saturated = 2.0 * (8.0 * math.pi / 3.0) * m6 / m3
    return dipole, saturated


def irradiance_to_density(irradiance: float, temperature: float) -> float:
    """Photon number density ``I / (c <E>)`` of a thermal beam, in 1/m^3."""
    if irradiance < 0 or not temperature > 0:
        raise DomainError("need irradiance >= 0 and temperature > 0")
    return irradiance / (C * MEAN_PHOTON_ENERGY * K_B * temperature)


def density_to_irradiance(density: float, temperature: float) -> float:
    if density < 0 or not temperature > 0:
        raise DomainError("need density >= 0 and temperature > 0")
    return density * C * MEAN_PHOTON_ENERGY * K_B * temperature


def decoherence_time_dipole(scenario: PhysicalScenario, convention: str = "standard") -> DecoherenceTime:
    """Decoherence time for separations well below the thermal wavelength."""
    a_eff = effective_radius(scenario.radius_m, scenario.epsilon, convention)
    kt = K_B * scenario.temperature_K
    rate = (
        DECOHERENCE_CONSTANT
        * _scenario_angular_factor(scenario)
        * scenario.irradiance_W_m2
        * a_eff**6
        * scenario.separation_m**2
        * kt**5
        / (C * HBAR) ** 6
    )
    return DecoherenceTime(math.inf if rate == 0 else 1.0 / rate, Regime.DIPOLE)


def decoherence_time_saturated(scenario: PhysicalScenario, convention: str = "standard") -> DecoherenceTime:
    """Decoherence time once each scattered photon fully resolves the branches."""
    a_eff = effective_radius(scenario.radius_m, scenario.epsilon, convention)
    kt = K_B * scenario.temperature_K
    rate = SATURATED_CONSTANT * scenario.irradiance_W_m2 * a_eff**6 * kt**3 / (C * HBAR) ** 4
    return DecoherenceTime(math.inf if rate == 0 else 1.0 / rate, Regime.SATURATED)


def decoherence_time(scenario: PhysicalScenario, convention: str = "standard") -> DecoherenceTime:
    if resolve_regime(scenario) is Regime.SATURATED:
        return decoherence_time_saturated(scenario, convention)
    return decoherence_time_dipole(scenario, convention)


def gamma_at_time(scenario: PhysicalScenario, t: float, convention: str = "standard") -> DecoherenceFactor:
    """Global decoherence factor ``exp(-t / tau_D)`` after illumination for ``t`` seconds."""
    if not t >= 0:
        raise DomainError(f"time must be non-negative, got {t!r}")
    tau = decoherence_time(scenario, convention).tau_d
    return DecoherenceFactor(0.0 if math.isinf(tau) else t / tau)


def finite_volume_gamma(
    scenario: PhysicalScenario, t: float, volume: float, convention: str = "standard"
) -> DecoherenceFactor:
    """Global decoherence factor of a box holding ``N = n V`` thermal photons.

    The per-photon factor is ``|<a>|^2`` with the amplitude ``a(k)`` taken
    real, ``a = sqrt(single_photon_element)``, averaged over the Planck
    spectrum; it is raised to the ``N``-th power. As ``volume`` grows this
    tends to ``gamma_at_time`` in the dipole regime.
    """
    if not volume > 0 or t < 0:
        raise DomainError("need volume > 0 and t >= 0")
    a_eff = effective_radius(scenario.radius_m, scenario.epsilon, convention)
    k_scale = K_B * scenario.temperature_K / (HBAR * C)
    # deficit(x) = eps0 * x**6 with x = hbar c k / k_B T and lambda = 2 pi / k
    eps0 = (
        _ELEMENT_PREFACTOR
        * _scenario_angular_factor(scenario)
        * a_eff**6
        * scenario.separation_m**2
        * t
        * C
        / volume
        * (k_scale / (2.0 * math.pi)) ** 6
    )

    def amplitude_deficit(u):
        x = math.exp(u)
        if x > 800.0:
            return 0.0
        eps = min(eps0 * x**6, 1.0)
        weight = x**3 * math.exp(-x) / -math.expm1(-x)
        return weight * eps / (1.0 + math.sqrt(1.0 - eps))

    mean_deficit, _ = integrate.quad(amplitude_deficit, _U_MIN, _U_MAX, epsabs=0.0, epsrel=1e-12, limit=200)
    mean_deficit /= planck_moment(2)
    n_photons = irradiance_to_density(scenario.irradiance_W_m2, scenario.temperature_K) * volume
    return DecoherenceFactor(-2.0 * n_photons * math.log1p(-mean_deficit))
