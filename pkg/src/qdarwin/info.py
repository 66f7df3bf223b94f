"""Entropies, mutual information and redundancy of a two-branch record model.

Everything here is a function of two dimensionless numbers: the global
decoherence factor ``Gamma`` (the squared suppression of the off-diagonal
element of the system's density matrix) and the fragment fraction ``f``.
All entropies are in nats.

Internally ``Gamma`` is carried as its exponent ``x = -ln Gamma`` (which
equals ``t / tau_D`` for a decoherence time ``tau_D``), so that long times,
where ``Gamma`` itself underflows, remain representable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .errors import DegenerateInputError, DomainError, NoSolutionError

__all__ = [
    "LN2",
    "Illumination",
    "DecoherenceFactor",
    "InfoCurve",
    "RedundancyResult",
    "branch_entropy",
    "mutual_information_point",
    "mutual_information_isotropic",
    "mutual_information",
    "redundancy_exact",
    "redundancy_asymptotic",
    "info_curve",
]

LN2 = math.log(2.0)

_DOMAIN_TOL = 1e-12
# Direct terms before the Euler-Maclaurin tail takes over.
_DIRECT_TERMS = 4096
# exp(-40) ~ 4e-18: the next term is below 1e-16 of the running sum.
_TAIL_EXPONENT = 40.0
_BISECT_XTOL = 1e-12
_BISECT_MAXITER = 200


class Illumination(str, enum.Enum):
    POINT = "point"
    ISOTROPIC = "isotropic"

    @classmethod
    def parse(cls, value: "Illumination | str") -> "Illumination":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        aliases = {"point": cls.POINT, "pointsource": cls.POINT, "isotropic": cls.ISOTROPIC}
        try:
            return aliases[key]
        except KeyError:
            raise DomainError(f"unknown illumination {value!r}") from None


@dataclass(frozen=True)
class DecoherenceFactor:
    """Global decoherence factor ``Gamma = exp(-exponent)``.

    ``exponent`` is ``t / tau_D``; it may be ``inf`` (fully decohered).
    """

    exponent: float

    def __post_init__(self):
        x = float(self.exponent)
        if math.isnan(x) or x < 0.0:
            raise DomainError(f"decoherence exponent must be >= 0, got {self.exponent!r}")
        object.__setattr__(self, "exponent", x)

    @classmethod
    def from_value(cls, gamma: float) -> "DecoherenceFactor":
        g = float(gamma)
        if math.isnan(g) or g < -_DOMAIN_TOL or g > 1.0 + _DOMAIN_TOL:
            raise DomainError(f"decoherence factor must lie in [0, 1], got {gamma!r}")
        g = min(max(g, 0.0), 1.0)
        return cls(math.inf if g == 0.0 else -math.log(g))

    @classmethod
    def from_time(cls, t: float, tau_d: float) -> "DecoherenceFactor":
        if t < 0 or not tau_d > 0:
            raise DomainError(f"need t >= 0 and tau_D > 0, got t={t!r}, tau_D={tau_d!r}")
        return cls(t / tau_d)

    @property
    def value(self) -> float:
        return math.exp(-self.exponent)

    gamma_total = value

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class InfoCurve:
    """A sampled partial information plot."""

    points: tuple[tuple[float, float], ...]
    gamma_total: DecoherenceFactor
    illumination: Illumination

    @property
    def fractions(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


@dataclass(frozen=True)
class RedundancyResult:
    f_delta: float
    redundancy: float
    asymptotic: float | None
    has_plateau: bool


def _exponent(gamma) -> np.ndarray:
    """Return ``-ln Gamma`` for a factor, scalar or array of factors."""
    if isinstance(gamma, DecoherenceFactor):
        return np.asarray(gamma.exponent, dtype=float)
    g = np.asarray(gamma, dtype=float)
    if np.any(np.isnan(g)) or np.any(g < -_DOMAIN_TOL) or np.any(g > 1.0 + _DOMAIN_TOL):
        raise DomainError("decoherence factor must lie in [0, 1]")
    g = np.clip(g, 0.0, 1.0)
    with np.errstate(divide="ignore"):
        return -np.log(g)


def _fraction(f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if np.any(np.isnan(f)) or np.any(f < -_DOMAIN_TOL) or np.any(f > 1.0 + _DOMAIN_TOL):
        raise DomainError("fragment fraction must lie in [0, 1]")
    return np.clip(f, 0.0, 1.0)


def _power(x: np.ndarray, f: np.ndarray) -> np.ndarray:
    # exponent of Gamma**f; Gamma**0 == 1 even when Gamma == 0
    with np.errstate(invalid="ignore"):
        return np.where(f == 0.0, 0.0, x * f)


def _out(a: np.ndarray):
    a = np.asarray(a)
    return float(a) if a.ndim == 0 else a


def _entropy_closed(x: np.ndarray) -> np.ndarray:
    # ln2 - s*arctanh(s) - ln sqrt(1 - s^2) with s = sqrt(Gamma), rewritten as
    # ln2 - [(1+s) ln(1+s) + (1-s) ln(1-s)] / 2 so that s -> 1 stays accurate.
    s = np.exp(-0.5 * x)
    u = -np.expm1(-0.5 * x)  # 1 - s without cancellation
    h = LN2 - 0.5 * ((1.0 + s) * np.log1p(s) + special.xlogy(u, u))
    return np.maximum(h, 0.0)


def _series_tail(c: float, n0: int) -> float:
    """Euler-Maclaurin estimate of sum_{n >= n0} exp(-c n) / (2n (2n - 1))."""
    if c == 0.0:
        integral = 0.5 * math.log(n0 / (n0 - 0.5))
    else:
        integral = 0.5 * (math.exp(-0.5 * c) * special.exp1(c * (n0 - 0.5)) - special.exp1(c * n0))
    w = 1.0 / (2.0 * n0 * (2.0 * n0 - 1.0))
    dw = -(8.0 * n0 - 2.0) * w * w
    decay = math.exp(-c * n0)
    g = decay * w
    dg = decay * (dw - c * w)
    return integral + 0.5 * g - dg / 12.0


def _series_scalar(c: float) -> float:
    """sum_{n >= 1} y**n / (2n (2n - 1)) for y = exp(-c)."""
    if math.isinf(c):
        return 0.0
    if c * _DIRECT_TERMS > _TAIL_EXPONENT:
        n = np.arange(1, max(1, math.ceil(_TAIL_EXPONENT / c)) + 1, dtype=float)
        return math.fsum(np.exp(-c * n) / (2.0 * n * (2.0 * n - 1.0)))
    n = np.arange(1, _DIRECT_TERMS, dtype=float)
    direct = math.fsum(np.exp(-c * n) / (2.0 * n * (2.0 * n - 1.0)))
    return direct + _series_tail(c, _DIRECT_TERMS)


_series = np.vectorize(_series_scalar, otypes=[float])


def _entropy_series(x: np.ndarray) -> np.ndarray:
    return LN2 - _series(x)


def _check_method(method: str) -> None:
    if method not in ("closed", "series"):
        raise ValueError(f"method must be 'closed' or 'series', got {method!r}")


def branch_entropy(gamma, method: str = "closed"):
    """Entropy of the decohered two-branch system, in nats.

    Equal mixture of two pure states whose overlap has modulus
    ``sqrt(Gamma)``; ranges from ``ln 2`` at ``Gamma = 0`` to 0 at
    ``Gamma = 1``.

    Parameters
    ----------
    gamma : float, array_like or DecoherenceFactor
        Global decoherence factor in ``[0, 1]``.
    method : {"closed", "series"}
        ``"closed"`` uses the logarithmic closed form; ``"series"`` sums the
        power series in ``Gamma`` with an Euler-Maclaurin tail near
        ``Gamma = 1``.
    """
    _check_method(method)
    x = _exponent(gamma)
    h = _entropy_closed(x) if method == "closed" else _entropy_series(x)
    return _out(h)


def mutual_information_point(gamma, f, method: str = "closed"):
    """Mutual information between the system and a fraction ``f`` of the
    photons when the illumination comes from a single direction.
    """
    _check_method(method)
    x = _exponent(gamma)
    f = _fraction(f)
    xf, xr = _power(x, f), _power(x, 1.0 - f)
    if method == "closed":
        i = _entropy_closed(xf) + _entropy_closed(x) - _entropy_closed(xr)
    else:
        i = LN2 + _series(xr) - _series(xf) - _series(x)
    return _out(np.maximum(i, 0.0))


def mutual_information_isotropic(gamma, f, method: str = "closed"):
    """Mutual information for directionally maximally mixed illumination.

    Only the loss of coherence caused by the rest of the environment
    contributes; the fragment itself carries no new record.
    """
    _check_method(method)
    x = _exponent(gamma)
    f = _fraction(f)
    xr = _power(x, 1.0 - f)
    if method == "closed":
        i = _entropy_closed(x) - _entropy_closed(xr)
    else:
        i = _series(xr) - _series(x)
    return _out(np.maximum(i, 0.0))


def mutual_information(gamma, f, illumination="point", method: str = "closed"):
    if Illumination.parse(illumination) is Illumination.POINT:
        return mutual_information_point(gamma, f, method)
    return mutual_information_isotropic(gamma, f, method)


def redundancy_asymptotic(t_over_tau: float, delta: float) -> float:
    """Large-time redundancy ``(t / tau_D) / ln[1 / (2 delta ln 2)]``.

    Valid for ``0 < delta < 0.5``; outside that range a DomainError is raised.
    """
    if not t_over_tau >= 0.0:
        raise DomainError(f"t/tau_D must be >= 0, got {t_over_tau!r}")
    if not 0.0 < delta < 0.5:
        raise DomainError(f"asymptotic redundancy needs 0 < delta < 0.5, got {delta!r}")
    log_term = -math.log(2.0 * delta * LN2)
    if log_term <= 0.0:
        raise DomainError(f"2 delta ln 2 must be < 1, got delta={delta!r}")
    return t_over_tau / log_term


def redundancy_exact(gamma, delta: float) -> RedundancyResult:
    """Smallest fragment fraction supplying ``(1 - delta)`` of ``H_S``.

    Solved by bisection on ``f`` in ``(0, 1]``; the point-source mutual
    information is nondecreasing in ``f``, so the crossing is unique.
    """
    if not 0.0 < delta < 1.0:
        raise DomainError(f"information deficit must lie in (0, 1), got {delta!r}")
    x = float(_exponent(gamma))
    if x == 0.0 or math.isinf(x):
        raise DegenerateInputError("redundancy is undefined for Gamma in {0, 1}")
    h = float(_entropy_closed(np.asarray(x)))
    if h <= 0.0:
        raise DegenerateInputError("system entropy vanishes; redundancy is undefined")
    factor = DecoherenceFactor(x)
    target = (1.0 - delta) * h

    def excess(f):
        return mutual_information_point(factor, f) - target

    if excess(1.0) <= 0.0:
        raise NoSolutionError("no fragment reaches the requested information")
    f_delta = optimize.bisect(
        excess, 0.0, 1.0, xtol=_BISECT_XTOL / max(1.0, x), maxiter=_BISECT_MAXITER
    )
    asymptotic = redundancy_asymptotic(x, delta) if delta < 0.5 else None
    return RedundancyResult(
        f_delta=f_delta,
        redundancy=1.0 / f_delta,
        asymptotic=asymptotic,
        has_plateau=f_delta <= 0.5,
    )


def info_curve(gamma, illumination, grid) -> InfoCurve:
    """Evaluate a partial information plot on an increasing grid of ``f``."""
    illumination = Illumination.parse(illumination)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("fraction grid must be a non-empty 1-d sequence")
    if np.any(np.diff(grid) <= 0.0):
        raise DomainError("fraction grid must be strictly increasing")
    factor = gamma if isinstance(gamma, DecoherenceFactor) else DecoherenceFactor(float(_exponent(gamma)))
    values = np.atleast_1d(mutual_information(factor, grid, illumination))
    return InfoCurve(
        points=tuple((float(f), float(i)) for f, i in zip(grid, values)),
        gamma_total=factor,
        illumination=illumination,
    )
