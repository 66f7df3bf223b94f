"""Brute-force finite-environment models with exact diagonalization.

Each photon is reduced to a two-dimensional record. In the point-source
model the global state is pure,

    (|x1> |e1>^N + |x2> |e2>^N) / sqrt(2),    |<e1|e2>|^2 = gamma,

and in the isotropic model every photon starts maximally mixed and is
rotated by a branch-dependent unitary with ``|tr(U1^dag U2) / 2|^2 = gamma``.
The mixed state is stored through a purification: photon ``j`` shares a
Bell pair with a reference qubit that is always traced out.

Qubit layout of ``OracleModel.state``: 0 is the system, ``1..N`` are the
photons, ``N+1..2N`` the references (isotropic model only).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field, replace
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import DomainError, OracleMismatchError, OracleSizeError

__all__ = [
    "POINT_MAX_PHOTONS",
    "ISOTROPIC_MAX_PHOTONS",
    "EnvMixedness",
    "OracleModel",
    "FragmentSpectrum",
    "SpectrumReport",
    "build_point_source",
    "build_isotropic",
    "initial_model",
    "reduced_density_matrix",
    "subsystem_spectrum",
    "von_neumann_entropy",
    "oracle_entropies",
    "mutual_information_routes",
    "oracle_mutual_information",
    "oracle_decoherence_check",
    "spectrum_report",
]

POINT_MAX_PHOTONS = 14
ISOTROPIC_MAX_PHOTONS = 10
# eigenvalues below this count as exact zeros (0 ln 0 = 0)
EIGENVALUE_FLOOR = 1e-14
ROUTE_TOLERANCE = 1e-10

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_Z_AXIS = (0.0, 0.0, 1.0)


class EnvMixedness(str, enum.Enum):
    PURE_DIRECTIONAL = "pure"
    MAXIMALLY_MIXED = "mixed"


@dataclass(frozen=True)
class OracleModel:
    """A system plus ``n_photons`` two-dimensional records.

    ``phases`` (pure model) gives each photon's overlap phase
    ``<e1|e2> = sqrt(gamma) exp(i phase)``; ``axes`` (mixed model) gives each
    photon's rotation axis. Both default to the trivial choice.
    """

    n_photons: int
    per_photon_gamma: float
    env_mixedness: EnvMixedness
    record_dimension: int = 2
    phases: tuple[float, ...] | None = None
    axes: tuple[tuple[float, float, float], ...] | None = None
    state: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.record_dimension != 2:
            raise DomainError("only two-dimensional records are modelled")
        if not 0.0 <= self.per_photon_gamma <= 1.0:
            raise DomainError(f"per-photon gamma must lie in [0, 1], got {self.per_photon_gamma!r}")
        cap = POINT_MAX_PHOTONS if self.env_mixedness is EnvMixedness.PURE_DIRECTIONAL else ISOTROPIC_MAX_PHOTONS
        if not 0 <= self.n_photons <= cap:
            raise OracleSizeError(f"{self.env_mixedness.value} model supports at most {cap} photons")
        for name in ("phases", "axes"):
            value = getattr(self, name)
            if value is not None and len(value) != self.n_photons:
                raise DomainError(f"{name} must have one entry per photon")
        object.__setattr__(self, "state", _build_state(self))

    @property
    def n_qubits(self) -> int:
        return self.state.ndim

    @property
    def gamma_total(self) -> float:
        return self.per_photon_gamma**self.n_photons

    def photon_qubit(self, j: int) -> int:
        return 1 + j

    def keep_photons(self, photons: Sequence[int]) -> "OracleModel":
        """The same construction restricted to a subset of the photons."""
        photons = list(photons)
        return replace(
            self,
            n_photons=len(photons),
            phases=None if self.phases is None else tuple(self.phases[j] for j in photons),
            axes=None if self.axes is None else tuple(self.axes[j] for j in photons),
        )


def _rotation(axis, angle: float) -> np.ndarray:
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    generator = sum(c * p for c, p in zip(n, _PAULI))
    return math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * generator


def _kron_all(vectors) -> np.ndarray:
    return reduce(np.kron, vectors, np.ones(1, dtype=complex))


def _build_state(model: OracleModel) -> np.ndarray:
    n = model.n_photons
    g = model.per_photon_gamma
    if model.env_mixedness is EnvMixedness.PURE_DIRECTIONAL:
        phases = model.phases or (0.0,) * n
        e1 = np.array([1.0, 0.0], dtype=complex)
        branch1 = _kron_all([e1] * n)
        branch2 = _kron_all(
            [np.array([math.sqrt(g) * np.exp(1j * p), math.sqrt(1.0 - g)]) for p in phases]
        )
        shape = (2,) * (n + 1)
    else:
        axes = model.axes or (_Z_AXIS,) * n
        angle = 2.0 * math.acos(math.sqrt(g))
        bell = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / math.sqrt(2.0)
        branch1 = _kron_all([bell] * n)
        branch2 = _kron_all([np.kron(_rotation(ax, angle), np.eye(2)) @ bell for ax in axes])
        # kron order is (E1, R1, E2, R2, ...); regroup as (E1..EN, R1..RN)
        order = [2 * j for j in range(n)] + [2 * j + 1 for j in range(n)]
        branch1 = branch1.reshape((2,) * (2 * n)).transpose(order).reshape(-1) if n else branch1
        branch2 = branch2.reshape((2,) * (2 * n)).transpose(order).reshape(-1) if n else branch2
        shape = (2,) * (2 * n + 1)
    psi = np.concatenate([branch1, branch2]) / math.sqrt(2.0)
    return psi.reshape(shape)


def build_point_source(n_photons: int, gamma: float, phases=None) -> OracleModel:
    """Pure records with real non-negative overlap ``sqrt(gamma)`` unless
    ``phases`` is given."""
    if not 1 <= n_photons <= POINT_MAX_PHOTONS:
        raise OracleSizeError(f"point-source oracle needs 1 <= N <= {POINT_MAX_PHOTONS}")
    phases = None if phases is None else tuple(float(p) for p in phases)
    return OracleModel(n_photons, float(gamma), EnvMixedness.PURE_DIRECTIONAL, phases=phases)


def build_isotropic(n_photons: int, gamma: float, axes=None) -> OracleModel:
    """Maximally mixed records rotated by ``2 arccos(sqrt(gamma))`` in one branch."""
    if not 1 <= n_photons <= ISOTROPIC_MAX_PHOTONS:
        raise OracleSizeError(f"isotropic oracle needs 1 <= N <= {ISOTROPIC_MAX_PHOTONS}")
    axes = None if axes is None else tuple(tuple(float(c) for c in ax) for ax in axes)
    return OracleModel(n_photons, float(gamma), EnvMixedness.MAXIMALLY_MIXED, axes=axes)


def initial_model(model: OracleModel) -> OracleModel:
    """The pre-scattering product state: both branches leave the photons alone."""
    return replace(model, per_photon_gamma=1.0)


def _matricize(model: OracleModel, qubits: Sequence[int]) -> np.ndarray:
    qubits = list(qubits)
    if len(set(qubits)) != len(qubits) or any(not 0 <= q < model.n_qubits for q in qubits):
        raise DomainError(f"invalid qubit selection {qubits}")
    psi = np.moveaxis(model.state, qubits, list(range(len(qubits))))
    return psi.reshape(2 ** len(qubits), -1)


def _system_qubits(model: OracleModel, photons: Sequence[int]) -> list[int]:
    return [model.photon_qubit(j) for j in photons]


def reduced_density_matrix(model: OracleModel, qubits: Sequence[int]) -> np.ndarray:
    """Partial trace of the global state onto ``qubits`` (in the given order)."""
    m = _matricize(model, qubits)
    return m @ m.conj().T


def subsystem_spectrum(model: OracleModel, qubits: Sequence[int]) -> np.ndarray:
    """Nonzero eigenvalues of the reduced state on ``qubits``, descending.

    When the subsystem is larger than its complement, the complement's
    Gram matrix is diagonalized instead; the nonzero spectra coincide.
    """
    m = _matricize(model, qubits)
    gram = m @ m.conj().T if m.shape[0] <= m.shape[1] else m.conj().T @ m
    eigs = np.linalg.eigvalsh(gram)[::-1]
    return eigs[eigs > EIGENVALUE_FLOOR]


def von_neumann_entropy(eigenvalues) -> float:
    p = np.asarray(eigenvalues, dtype=float)
    p = p[p > EIGENVALUE_FLOOR]
    return float(-np.sum(p * np.log(p)))


def oracle_entropies(model: OracleModel, photons: Sequence[int]) -> tuple[float, float, float]:
    """``(H_S, H_F, H_SF)`` for the fragment made of ``photons``."""
    frag = _system_qubits(model, photons)
    h_s = von_neumann_entropy(subsystem_spectrum(model, [0]))
    h_f = von_neumann_entropy(subsystem_spectrum(model, frag)) if frag else 0.0
    h_sf = von_neumann_entropy(subsystem_spectrum(model, [0] + frag))
    return h_s, h_f, h_sf


def _fragment(model: OracleModel, m: int, photons) -> list[int]:
    if photons is None:
        if not 0 <= m <= model.n_photons:
            raise DomainError(f"fragment size must lie in [0, {model.n_photons}], got {m}")
        return list(range(m))
    photons = list(photons)
    if len(photons) != m or len(set(photons)) != m or any(not 0 <= j < model.n_photons for j in photons):
        raise DomainError(f"invalid fragment {photons} of size {m}")
    return photons


def mutual_information_routes(model: OracleModel, m: int, photons=None) -> tuple[float, float]:
    """Mutual information of an ``m``-photon fragment by two routes.

    The direct route is ``H_S + H_F - H_SF``. The decomposition route is
    ``[H_F - H_F0] + [H_S - H_S(rest)]`` where ``H_F0`` is the fragment's
    entropy before scattering and ``H_S(rest)`` is the system entropy in a
    model holding only the photons outside the fragment.
    """
    frag = _fragment(model, m, photons)
    h_s, h_f, h_sf = oracle_entropies(model, frag)
    direct = h_s + h_f - h_sf

    _, h_f0, _ = oracle_entropies(initial_model(model), frag)
    rest = [j for j in range(model.n_photons) if j not in frag]
    h_s_rest = von_neumann_entropy(subsystem_spectrum(model.keep_photons(rest), [0]))
    decomposition = (h_f - h_f0) + (h_s - h_s_rest)
    return direct, decomposition


def oracle_mutual_information(model: OracleModel, m: int, photons=None) -> float:
    """Exact ``I(S : F)`` for a fragment of ``m`` photons.

    Raises OracleMismatchError if the two computation routes disagree by
    more than 1e-10.
    """
    direct, decomposition = mutual_information_routes(model, m, photons)
    if abs(direct - decomposition) > ROUTE_TOLERANCE:
        raise OracleMismatchError(
            f"direct {direct!r} and decomposed {decomposition!r} mutual information differ"
        )
    return direct


def oracle_decoherence_check(model: OracleModel) -> float:
    """Suppression ``|rho_S[0, 1]| / |rho_S0[0, 1]|`` of the system coherence."""
    rho = reduced_density_matrix(model, [0])
    rho0 = reduced_density_matrix(initial_model(model), [0])
    return float(abs(rho[0, 1]) / abs(rho0[0, 1]))


@dataclass(frozen=True)
class FragmentSpectrum:
    m: int
    fragment_entropy: float
    joint_entropy: float
    mutual_information: float
    fragment_eigenvalues: tuple[float, ...]
    joint_eigenvalues: tuple[float, ...]


@dataclass(frozen=True)
class SpectrumReport:
    n_photons: int
    per_photon_gamma: float
    env_mixedness: str
    system_entropy: float
    system_eigenvalues: tuple[float, ...]
    fragments: tuple[FragmentSpectrum, ...]

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def spectrum_report(model: OracleModel) -> SpectrumReport:
    """Entropies and nonzero spectra for every fragment size ``0..N``."""
    sys_eigs = subsystem_spectrum(model, [0])
    h_s = von_neumann_entropy(sys_eigs)
    fragments = []
    for m in range(model.n_photons + 1):
        frag = _system_qubits(model, range(m))
        f_eigs = subsystem_spectrum(model, frag) if frag else np.ones(1)
        sf_eigs = subsystem_spectrum(model, [0] + frag)
        h_f, h_sf = von_neumann_entropy(f_eigs), von_neumann_entropy(sf_eigs)
        fragments.append(
            FragmentSpectrum(
                m=m,
                fragment_entropy=h_f,
                joint_entropy=h_sf,
                mutual_information=h_s + h_f - h_sf,
                fragment_eigenvalues=tuple(float(v) for v in f_eigs),
                joint_eigenvalues=tuple(float(v) for v in sf_eigs),
            )
        )
    return SpectrumReport(
        n_photons=model.n_photons,
        per_photon_gamma=model.per_photon_gamma,
        env_mixedness=model.env_mixedness.value,
        system_entropy=h_s,
        system_eigenvalues=tuple(float(v) for v in sys_eigs),
        fragments=tuple(fragments),
    )
