"""Oracle-versus-formula sweep behind ``qdarwin validate``."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import info, oracle
from .errors import OracleSizeError
from .scattering import DECOHERENCE_CONSTANT, SATURATED_CONSTANT, thermal_constant_check

DEFAULT_GAMMAS = (0.1, 0.3, 0.5, 0.7, 0.9)
ISOTROPIC_MAX_N = 8
CONSTANTS_TOLERANCE = 1e-6


@dataclass
class ValidationReport:
    max_n: int
    tolerance: float
    deviations: dict[str, float] = field(default_factory=dict)
    constants: dict[str, float] = field(default_factory=dict)
    constants_tolerance: float = CONSTANTS_TOLERANCE

    @property
    def failures(self) -> list[str]:
        bad = [k for k, v in self.deviations.items() if not v <= self.tolerance]
        bad += [k for k, v in self.constants.items() if not v <= self.constants_tolerance]
        return bad

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        d["failures"] = self.failures
        return d

    def lines(self) -> list[str]:
        out = [f"oracle sweep: N <= {self.max_n}, tolerance {self.tolerance:.3g} (absolute)"]
        for name, dev in self.deviations.items():
            status = "ok" if dev <= self.tolerance else "FAIL"
            out.append(f"  {status:4} {name:36} worst deviation {dev:.3e}")
        out.append(f"rate constants: tolerance {self.constants_tolerance:.3g} (relative)")
        for name, dev in self.constants.items():
            status = "ok" if dev <= self.constants_tolerance else "FAIL"
            out.append(f"  {status:4} {name:36} relative error  {dev:.3e}")
        out.append("PASSED" if self.passed else f"FAILED: {', '.join(self.failures)}")
        return out


def run_validation(
    max_n: int = 12,
    tolerance: float = 1e-10,
    gammas=DEFAULT_GAMMAS,
    isotropic_max_n: int = ISOTROPIC_MAX_N,
) -> ValidationReport:
    """Compare exact diagonalization against the analytic formulas.

    Point-source models run for ``1 <= N <= max_n``, isotropic ones for
    ``N <= min(max_n, isotropic_max_n)``; every fragment size is checked.
    """
    if not 1 <= max_n <= oracle.POINT_MAX_PHOTONS:
        raise OracleSizeError(f"max-N must lie in [1, {oracle.POINT_MAX_PHOTONS}]")
    isotropic_max_n = min(max_n, isotropic_max_n, oracle.ISOTROPIC_MAX_PHOTONS)
    worst = {
        "system entropy (closed form)": 0.0,
        "system entropy (power series)": 0.0,
        "mutual information decomposition": 0.0,
        "fragment eigenvalues": 0.0,
        "point-source mutual information": 0.0,
        "isotropic mutual information": 0.0,
    }

    def bump(key, value):
        worst[key] = max(worst[key], float(value))

    for n in range(1, max_n + 1):
        for g in gammas:
            model = oracle.build_point_source(n, g)
            big_gamma = g**n
            h_s = oracle.von_neumann_entropy(oracle.subsystem_spectrum(model, [0]))
            bump("system entropy (closed form)", abs(h_s - info.branch_entropy(big_gamma)))
            bump("system entropy (power series)", abs(h_s - info.branch_entropy(big_gamma, "series")))
            for m in range(n + 1):
                direct, decomposed = oracle.mutual_information_routes(model, m)
                bump("mutual information decomposition", abs(direct - decomposed))
                bump("point-source mutual information", abs(direct - info.mutual_information_point(big_gamma, m / n)))
                if m:
                    eigs = oracle.subsystem_spectrum(model, [model.photon_qubit(j) for j in range(m)])
                    c = g ** (m / 2)
                    expected = np.array([(1 + c) / 2, (1 - c) / 2])
                    expected = expected[expected > oracle.EIGENVALUE_FLOOR]
                    if eigs.shape != expected.shape:
                        bump("fragment eigenvalues", np.inf)
                    else:
                        bump("fragment eigenvalues", np.max(np.abs(eigs - expected)))
    for n in range(1, isotropic_max_n + 1):
        for g in gammas:
            model = oracle.build_isotropic(n, g)
            for m in range(n + 1):
                direct, decomposed = oracle.mutual_information_routes(model, m)
                bump("mutual information decomposition", abs(direct - decomposed))
                bump("isotropic mutual information", abs(direct - info.mutual_information_isotropic(g**n, m / n)))

    dipole, saturated = thermal_constant_check()
    constants = {
        "dipole rate constant": abs(dipole / DECOHERENCE_CONSTANT - 1.0),
        "saturated rate constant": abs(saturated / SATURATED_CONSTANT - 1.0),
    }
    return ValidationReport(max_n=max_n, tolerance=tolerance, deviations=worst, constants=constants)
