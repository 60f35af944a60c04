"""Mass densities |c(mu)|^2 on the half line mu >= 0.

Two kinds are provided: a Breit-Wigner (Lorentzian) line truncated to
``[0, cutoff_hi]`` and renormalized there, and a finite set of discrete
mass lines.  A flat density is included as well; it is handy for checking
the quadrature engine against integrals with known values.

All densities are immutable.  Continuous densities are callable on numpy
arrays and expose the panel breakpoints the quadrature engine should
respect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import integrate

from .errors import ConfigError, DomainError, MovingDecayError

DEFAULT_TAIL_SIGMAS = 1.0e4
NORM_TOL = 1e-12
PEAK_OFFSETS = (1, 2, 5, 10)


@dataclass(frozen=True)
class BreitWignerDensity:
    """Lorentzian mass density truncated to ``[0, cutoff_hi]``.

    Build instances with :func:`bw_construct`; the constructor only checks
    invariants and trusts the ``norm`` it is handed.
    """

    m: float
    width: float
    cutoff_hi: float
    norm: float

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise ConfigError(f"Breit-Wigner mass must be positive, got m={self.m}")
        if not (self.width > 0 and math.isfinite(self.width)):
            raise ConfigError(f"Breit-Wigner width must be positive, got gamma={self.width}")
        if not self.cutoff_hi > self.m:
            raise ConfigError("cutoff_hi must lie above the centre mass")
        if not self.norm > 0:
            raise ConfigError("norm must be positive")

    @property
    def support(self) -> tuple[float, float]:
        return 0.0, self.cutoff_hi

    @property
    def tail_sigmas(self) -> float:
        return (self.cutoff_hi - self.m) / self.width

    def __call__(self, mu):
        mu = np.asarray(mu, dtype=float)
        half = 0.5 * self.width
        value = self.norm * (self.width / (2.0 * np.pi)) / ((mu - self.m) ** 2 + half * half)
        return np.where((mu >= 0.0) & (mu <= self.cutoff_hi), value, 0.0)

    def breakpoints(self) -> list[float]:
        """Peak-resolving panel boundaries ``m +- k*width`` inside the support."""
        pts = {self.m}
        for k in PEAK_OFFSETS:
            for x in (self.m - k * self.width, self.m + k * self.width):
                if 0.0 < x < self.cutoff_hi:
                    pts.add(x)
        return sorted(pts)

    def moment(self, k: int) -> float:
        half = 0.5 * self.width
        xa, xb = -self.m, self.cutoff_hi - self.m
        i0 = (math.atan(xb / half) - math.atan(xa / half)) / math.pi
        if k == 0:
            return self.norm * i0
        i1 = self.width / (4.0 * math.pi) * math.log((xb * xb + half * half) / (xa * xa + half * half))
        if k == 1:
            return self.norm * (self.m * i0 + i1)
        i2 = self.width / (2.0 * math.pi) * (
            (xb - xa) - half * (math.atan(xb / half) - math.atan(xa / half))
        )
        return self.norm * (i2 + 2.0 * self.m * i1 + self.m * self.m * i0)

    def to_config(self) -> dict:
        return {"kind": "breit-wigner", "m": self.m, "gamma": self.width,
                "tail_sigmas": self.tail_sigmas}


@dataclass(frozen=True)
class UniformDensity:
    """Flat density ``1/(hi - lo)`` on ``[lo, hi]``."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (0.0 <= self.lo < self.hi and math.isfinite(self.hi)):
            raise ConfigError(f"uniform density needs 0 <= lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def support(self) -> tuple[float, float]:
        return self.lo, self.hi

    @property
    def cutoff_hi(self) -> float:
        return self.hi

    def __call__(self, mu):
        mu = np.asarray(mu, dtype=float)
        inside = (mu >= self.lo) & (mu <= self.hi)
        return np.where(inside, 1.0 / (self.hi - self.lo), 0.0)

    def breakpoints(self) -> list[float]:
        return []

    def moment(self, k: int) -> float:
        return (self.hi ** (k + 1) - self.lo ** (k + 1)) / ((k + 1) * (self.hi - self.lo))

    def to_config(self) -> dict:
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class DiscreteDensity:
    """Finite set of mass lines ``(mu_k, w_k)`` with weights summing to one."""

    lines: tuple[tuple[float, float], ...]
    masses: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lines = tuple((float(mu), float(w)) for mu, w in self.lines)
        if not lines:
            raise ConfigError("discrete density needs at least one line")
        masses = np.array([mu for mu, _ in lines])
        weights = np.array([w for _, w in lines])
        if np.any(masses < 0) or not np.all(np.isfinite(masses)):
            raise ConfigError("discrete masses must be finite and >= 0")
        if len(set(masses.tolist())) != len(masses):
            raise ConfigError("discrete masses must be distinct")
        if np.any(weights <= 0):
            raise ConfigError("discrete weights must be positive")
        if abs(math.fsum(weights) - 1.0) > NORM_TOL:
            raise ConfigError(f"discrete weights must sum to 1, got {math.fsum(weights)!r}")
        masses.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "lines", lines)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "weights", weights)

    def moment(self, k: int) -> float:
        return math.fsum(w * mu**k for mu, w in self.lines)

    def to_config(self) -> dict:
        return {"kind": "discrete", "lines": [[mu, w] for mu, w in self.lines]}


ContinuousDensity = Union[BreitWignerDensity, UniformDensity]
MassDensity = Union[BreitWignerDensity, UniformDensity, DiscreteDensity]


def lorentz_mass(mu, m, width):
    """Unnormalized full-line Breit-Wigner ``(G/2pi) / ((mu-m)^2 + G^2/4)``."""
    mu = np.asarray(mu, dtype=float)
    return (width / (2.0 * np.pi)) / ((mu - m) ** 2 + 0.25 * width * width)


def bw_construct(m: float, gamma: float, tail_sigmas: float = DEFAULT_TAIL_SIGMAS) -> BreitWignerDensity:
    """Breit-Wigner density truncated to ``[0, m + tail_sigmas*gamma]``.

    The normalization uses the closed-form arctan antiderivative and is
    cross-checked with adaptive quadrature.

    Parameters
    ----------
    m : float
        Centre (most probable) mass, > 0.
    gamma : float
        Full width at half maximum, > 0.
    tail_sigmas : float
        Upper cutoff distance from ``m`` in units of ``gamma``.
    """
    if not (m > 0 and math.isfinite(m)):
        raise ConfigError(f"Breit-Wigner mass must be positive, got m={m}")
    if not (gamma > 0 and math.isfinite(gamma)):
        raise ConfigError(f"Breit-Wigner width must be positive, got gamma={gamma}")
    if not (tail_sigmas > 0 and math.isfinite(tail_sigmas)):
        raise ConfigError(f"tail_sigmas must be positive, got {tail_sigmas}")
    cutoff = m + tail_sigmas * gamma
    mass = (math.atan(2.0 * (cutoff - m) / gamma) + math.atan(2.0 * m / gamma)) / math.pi
    norm = 1.0 / mass

    pts = [x for k in PEAK_OFFSETS for x in (m - k * gamma, m + k * gamma) if 0.0 < x < cutoff]
    check, _ = integrate.quad(lorentz_mass, 0.0, cutoff, args=(m, gamma), points=sorted(pts),
                              limit=500, epsabs=1e-14, epsrel=1e-11)
    if abs(check - mass) > 1e-8 * mass:
        raise MovingDecayError(
            f"normalization cross-check failed: arctan {mass!r} vs quadrature {check!r}")
    return BreitWignerDensity(m=float(m), width=float(gamma), cutoff_hi=cutoff, norm=norm)


def bw_evaluate(d: BreitWignerDensity, mu: float) -> float:
    """Density value at ``mu``; zero above the cutoff."""
    if mu < 0:
        raise DomainError(f"mass must be >= 0, got mu={mu}")
    return float(d(mu))


def density_moment(d: MassDensity, k: int) -> float:
    """``int mu^k |c(mu)|^2 dmu`` for ``k`` in {0, 1, 2}."""
    if k not in (0, 1, 2):
        raise DomainError(f"only moments k=0,1,2 are supported, got k={k}")
    return d.moment(k)


def density_from_config(cfg: dict) -> MassDensity:
    """Build a density from its key/value description.

    ``{"kind": "breit-wigner", "m": .., "gamma": .., "tail_sigmas": ..}``,
    ``{"kind": "discrete", "lines": [[mu, w], ...]}`` or
    ``{"kind": "uniform", "lo": .., "hi": ..}``.
    """
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ConfigError("density config must be an object with a 'kind' key")
    kind = cfg["kind"]
    try:
        if kind == "breit-wigner":
            return bw_construct(float(cfg["m"]), float(cfg["gamma"]),
                                float(cfg.get("tail_sigmas", DEFAULT_TAIL_SIGMAS)))
        if kind == "discrete":
            return DiscreteDensity(tuple((mu, w) for mu, w in cfg["lines"]))
        if kind == "uniform":
            return UniformDensity(float(cfg.get("lo", 0.0)), float(cfg["hi"]))
    except KeyError as exc:
        raise ConfigError(f"density config of kind {kind!r} is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed density config: {exc}") from None
    raise ConfigError(f"unknown density kind {kind!r}")


def is_continuous(d: MassDensity) -> bool:
    return not isinstance(d, DiscreteDensity)
