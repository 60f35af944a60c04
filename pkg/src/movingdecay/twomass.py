"""Two-mass "quantum clock": a superposition of two mass eigenstates.

The survival probability oscillates instead of decaying, so the period of
oscillation serves as the unit of time.  At rest the angular frequency is
``|m1 - m2|``; moving with definite velocity it is multiplied by the
Lorentz factor (contraction), while with definite momentum the period is
dilated by ``(E1 + E2)/(m1 + m2)``, which is a Lorentz factor only when
the masses coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .amplitude import (DefiniteMomentum, DefiniteVelocity, KinematicPreparation, Rest,
                        lorentz_gamma, survival)
from .errors import ConfigError, DomainError
from .spectral import DiscreteDensity


@dataclass(frozen=True)
class TwoMassState:
    m1: float
    m2: float
    w1: float = 0.5
    w2: float = 0.5

    def __post_init__(self):
        if not (self.m1 >= 0 and self.m2 >= 0):
            raise ConfigError("masses must be >= 0")
        if self.m1 == self.m2:
            raise ConfigError("the two masses must differ")
        if not (self.w1 > 0 and self.w2 > 0):
            raise ConfigError("weights must be positive")
        if abs(self.w1 + self.w2 - 1.0) > 1e-12:
            raise ConfigError(f"weights must sum to 1, got {self.w1 + self.w2!r}")

    @property
    def equal_weights(self) -> bool:
        return self.w1 == self.w2 == 0.5

    def as_density(self) -> DiscreteDensity:
        return DiscreteDensity(((self.m1, self.w1), (self.m2, self.w2)))

    @classmethod
    def from_density(cls, d: DiscreteDensity) -> "TwoMassState":
        if len(d.lines) != 2:
            raise ConfigError("a two-mass state needs exactly two lines")
        (m1, w1), (m2, w2) = d.lines
        return cls(m1, m2, w1, w2)


# Named widthless presets, equal weights.  "neutrino" uses eV with
# m2^2 - m1^2 = 7.5e-5 eV^2.  Kaon-sized splittings (dm/m ~ 1e-14) are not
# resolvable in double precision and are left out on purpose.
PRESETS = {
    "clock": TwoMassState(1.0, 2.0),
    "neutrino": TwoMassState(0.01, math.sqrt(0.01**2 + 7.5e-5)),
}


def preset(name: str) -> TwoMassState:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown two-mass preset {name!r}; known: {sorted(PRESETS)}") from None


def _energies(s: TwoMassState, prep: KinematicPreparation):
    if isinstance(prep, Rest):
        return s.m1, s.m2
    if isinstance(prep, DefiniteVelocity):
        g = lorentz_gamma(prep.v)
        return s.m1 * g, s.m2 * g
    if isinstance(prep, DefiniteMomentum):
        return math.hypot(prep.p, s.m1), math.hypot(prep.p, s.m2)
    raise TypeError(f"unknown preparation {prep!r}")


def _energy_gap(s: TwoMassState, prep: KinematicPreparation) -> float:
    """``|E1 - E2|`` without cancellation for large momenta."""
    e1, e2 = _energies(s, prep)
    if isinstance(prep, DefiniteMomentum):
        return abs((s.m1 - s.m2) * (s.m1 + s.m2)) / (e1 + e2)
    return abs(e1 - e2)


def osc_amplitude(s: TwoMassState, prep: KinematicPreparation, t):
    """``w1 exp(-i E1 t) + w2 exp(-i E2 t)`` with the preparation's energies."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be >= 0")
    e1, e2 = _energies(s, prep)
    if isinstance(prep, DefiniteVelocity):
        # same association as the generic path: mass times (gamma t)
        g = prep.gamma
        p1, p2 = s.m1 * (g * t), s.m2 * (g * t)
    else:
        p1, p2 = e1 * t, e2 * t
    out = s.w1 * (np.cos(p1) - 1j * np.sin(p1)) + s.w2 * (np.cos(p2) - 1j * np.sin(p2))
    return complex(out) if out.ndim == 0 else out


def osc_probability_equal_weights(s: TwoMassState, prep: KinematicPreparation, t):
    """``cos^2`` closed form of the survival probability; equal weights only."""
    if not s.equal_weights:
        raise ConfigError("the cos^2 closed form requires equal weights w1 = w2 = 1/2")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be >= 0")
    if isinstance(prep, Rest):
        arg = 0.5 * (s.m1 - s.m2) * t
    elif isinstance(prep, DefiniteVelocity):
        arg = 0.5 * (s.m1 - s.m2) * t * prep.gamma
    else:
        e1, e2 = _energies(s, prep)
        arg = 0.5 * (e1 - e2) * t
    out = np.cos(arg) ** 2
    return float(out) if out.ndim == 0 else out


def effective_gamma_tilde(p: float, m1: float, m2: float) -> float:
    """Two-mass dilation factor ``(sqrt(p^2+m1^2) + sqrt(p^2+m2^2)) / (m1 + m2)``."""
    if p < 0:
        raise DomainError("momentum must be >= 0")
    if not m1 + m2 > 0:
        raise DomainError("m1 + m2 must be positive")
    return (math.hypot(p, m1) + math.hypot(p, m2)) / (m1 + m2)


def oscillation_period(s: TwoMassState, prep: KinematicPreparation) -> float:
    """Period ``2*pi/|E1 - E2|`` of the equal-weight survival probability."""
    if not s.equal_weights:
        raise ConfigError("the oscillation period is defined for equal weights")
    return 2.0 * math.pi / _energy_gap(s, prep)


def measured_period(s: TwoMassState, prep: KinematicPreparation) -> float:
    """Period read off the generic amplitude path.

    The probability first falls to 1/2 at a quarter period; that crossing
    is located by root bracketing on the discrete-density amplitude.
    """
    d = s.as_density()
    guess = 0.25 * oscillation_period(s, prep)

    def f(t):
        return abs(survival(d, prep, t).value) ** 2 - 0.5

    root = brentq(f, 0.5 * guess, 1.5 * guess, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    return 4.0 * root
