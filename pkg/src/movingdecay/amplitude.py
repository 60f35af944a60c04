"""Survival amplitudes of an unstable state at rest, at definite velocity
and at definite momentum, plus the closed-form exponential approximants.

For a mass density ``rho(mu)`` the three amplitudes are

* rest:      ``A0(t) = int rho(mu) exp(-i mu t) dmu``
* velocity:  ``Av(t) = int rho(mu) exp(-i mu gamma t) dmu = A0(gamma t)``
* momentum:  ``Ap(t) = int rho(mu) exp(-i t sqrt(p^2 + mu^2)) dmu``

Natural units throughout (hbar = c = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import DomainError
from .quadrature import (DEFAULT_ABS_TOL, DEFAULT_MAX_PANELS, DEFAULT_REL_TOL,
                         IntegralResult, OscillatoryIntegralSpec, integrate_oscillatory)
from .spectral import BreitWignerDensity, MassDensity


@dataclass(frozen=True)
class Rest:
    label = "rest"

    def to_config(self) -> dict:
        return {"kind": "rest"}


@dataclass(frozen=True)
class DefiniteVelocity:
    v: float
    label = "velocity"

    def __post_init__(self):
        if not (0.0 <= self.v < 1.0):
            raise DomainError(f"velocity must satisfy 0 <= v < 1, got v={self.v}")

    @property
    def gamma(self) -> float:
        return lorentz_gamma(self.v)

    def to_config(self) -> dict:
        return {"kind": "velocity", "v": self.v}


@dataclass(frozen=True)
class DefiniteMomentum:
    p: float
    label = "momentum"

    def __post_init__(self):
        if not (self.p >= 0.0 and math.isfinite(self.p)):
            raise DomainError(f"momentum must satisfy p >= 0, got p={self.p}")

    def to_config(self) -> dict:
        return {"kind": "momentum", "p": self.p}


KinematicPreparation = Union[Rest, DefiniteVelocity, DefiniteMomentum]


@dataclass(frozen=True)
class Tolerances:
    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float = DEFAULT_ABS_TOL
    max_panels: int = DEFAULT_MAX_PANELS


DEFAULT_TOLERANCES = Tolerances()


def lorentz_gamma(v: float) -> float:
    """``(1 - v^2)^(-1/2)`` for ``0 <= v < 1``."""
    if not (0.0 <= v < 1.0):
        raise DomainError(f"velocity must satisfy 0 <= v < 1, got v={v}")
    return 1.0 / math.sqrt(1.0 - v * v)


def gamma_m(p: float, m: float) -> float:
    """Lorentz factor ``sqrt(p^2 + m^2)/m`` of a mass ``m`` carrying momentum ``p``."""
    if not m > 0:
        raise DomainError(f"mass must be positive, got m={m}")
    if p < 0:
        raise DomainError(f"momentum must be >= 0, got p={p}")
    return math.hypot(p, m) / m


def _check_time(t):
    if not t >= 0:
        raise DomainError(f"time must be >= 0, got t={t}")


def _integrate(d, phase, tol) -> IntegralResult:
    spec = OscillatoryIntegralSpec(d, phase, rel_tol=tol.rel_tol, abs_tol=tol.abs_tol,
                                   max_panels=tol.max_panels)
    return integrate_oscillatory(spec)


def rest_result(d: MassDensity, t: float, tol: Tolerances = DEFAULT_TOLERANCES) -> IntegralResult:
    _check_time(t)
    return _integrate(d, lambda mu: mu * t, tol)


def velocity_result(d: MassDensity, v: float, t: float, tol: Tolerances = DEFAULT_TOLERANCES,
                    direct: bool = False) -> IntegralResult:
    g = lorentz_gamma(v)
    _check_time(t)
    if direct:
        return _integrate(d, lambda mu: mu * g * t, tol)
    return rest_result(d, g * t, tol)


def momentum_result(d: MassDensity, p: float, t: float, tol: Tolerances = DEFAULT_TOLERANCES) -> IntegralResult:
    if p < 0:
        raise DomainError(f"momentum must be >= 0, got p={p}")
    _check_time(t)
    return _integrate(d, lambda mu: t * np.hypot(p, mu), tol)


def survival_rest(d: MassDensity, t: float, tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """Survival amplitude of the state at rest."""
    return rest_result(d, t, tol).value


def survival_velocity(d: MassDensity, v: float, t: float, tol: Tolerances = DEFAULT_TOLERANCES,
                      direct: bool = False) -> complex:
    """Survival amplitude of the definite-velocity state.

    By default this is the rest amplitude at the rescaled time ``gamma*t``;
    ``direct=True`` integrates with phase ``mu*gamma*t`` instead, which is
    only useful as a cross-check.
    """
    return velocity_result(d, v, t, tol, direct).value


def survival_momentum(d: MassDensity, p: float, t: float, tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """Survival amplitude of the definite-momentum state."""
    return momentum_result(d, p, t, tol).value


def survival(d: MassDensity, prep: KinematicPreparation, t: float,
             tol: Tolerances = DEFAULT_TOLERANCES, direct: bool = False) -> IntegralResult:
    if isinstance(prep, Rest):
        return rest_result(d, t, tol)
    if isinstance(prep, DefiniteVelocity):
        return velocity_result(d, prep.v, t, tol, direct)
    if isinstance(prep, DefiniteMomentum):
        return momentum_result(d, prep.p, t, tol)
    raise TypeError(f"unknown preparation {prep!r}")


def approx_rest(m: float, gamma: float, t):
    """``exp(-i m t - gamma t / 2)``, the exponential regime at rest."""
    t = np.asarray(t, dtype=float)
    out = np.exp(-1j * m * t - 0.5 * gamma * t)
    return complex(out) if out.ndim == 0 else out


def approx_momentum(m: float, gamma: float, p: float, t):
    """``exp(-i m g t - gamma t / (2 g))`` with ``g = gamma_m(p, m)``."""
    g = gamma_m(p, m)
    t = np.asarray(t, dtype=float)
    out = np.exp(-1j * m * g * t - 0.5 * gamma * t / g)
    return complex(out) if out.ndim == 0 else out


def approx_velocity(m: float, gamma: float, v: float, t):
    """``exp(-i m g t - gamma g t / 2)`` with ``g = lorentz_gamma(v)``; equals ``approx_rest(g t)``."""
    g = lorentz_gamma(v)
    t = np.asarray(t, dtype=float)
    out = np.exp(-1j * m * g * t - 0.5 * gamma * g * t)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ExponentComparison:
    e_p: complex
    e_v: complex
    real_gap: float


def exponent_compare(m: float, gamma: float, p: float, t: float) -> ExponentComparison:
    """Exponents of the momentum and velocity approximants at equal Lorentz factor.

    The imaginary parts coincide; ``real_gap = Re(E_p) - Re(E_v)``
    equals ``gamma*t*(g - 1/g)/2``.
    """
    _check_time(t)
    g = gamma_m(p, m)
    e_p = complex(-0.5 * gamma * t / g, -m * t * g)
    e_v = complex(-0.5 * gamma * t * g, -m * t * g)
    return ExponentComparison(e_p, e_v, 0.5 * gamma * t * (g - 1.0 / g))


def approximant(d: MassDensity, prep: KinematicPreparation, t):
    """Closed-form approximant matching ``prep``; only defined for Breit-Wigner densities."""
    if not isinstance(d, BreitWignerDensity):
        raise DomainError("exponential approximants exist only for Breit-Wigner densities")
    if isinstance(prep, Rest):
        return approx_rest(d.m, d.width, t)
    if isinstance(prep, DefiniteVelocity):
        return approx_velocity(d.m, d.width, prep.v, t)
    return approx_momentum(d.m, d.width, prep.p, t)


@dataclass
class AmplitudeSeries:
    times: np.ndarray
    amplitudes: np.ndarray
    probabilities: np.ndarray
    errors: np.ndarray
    preparation: KinematicPreparation
    density: dict
    approx_probabilities: Optional[np.ndarray] = field(default=None)


def amplitude_series(d: MassDensity, prep: KinematicPreparation, times,
                     tol: Tolerances = DEFAULT_TOLERANCES, direct: bool = False) -> AmplitudeSeries:
    """Evaluate the survival amplitude of ``prep`` on a sorted, non-negative time grid."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise DomainError("times must be a non-empty 1-d grid")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise DomainError("times must be sorted and non-negative")
    results = [survival(d, prep, float(t), tol, direct) for t in times]
    amps = np.array([r.value for r in results], dtype=complex)
    errs = np.array([r.error_estimate for r in results])
    approx = None
    if isinstance(d, BreitWignerDensity):
        approx = np.abs(approximant(d, prep, times)) ** 2
    return AmplitudeSeries(times, amps, np.abs(amps) ** 2, errs, prep, d.to_config(), approx)


def linear_grid(t_max: float, n: int, t_min: float = 0.0) -> np.ndarray:
    if n < 2 or not t_max > t_min >= 0:
        raise DomainError("linear grid needs n >= 2 and t_max > t_min >= 0")
    return np.linspace(t_min, t_max, n)


def log_grid(t_min: float, t_max: float, n: int) -> np.ndarray:
    if n < 2 or not t_max > t_min > 0:
        raise DomainError("log grid needs n >= 2 and t_max > t_min > 0")
    return np.geomspace(t_min, t_max, n)
