"""Lifetime fits and dilation/contraction reports.

Lifetimes come from a straight-line least-squares fit of ``ln|A|^2``
against ``t``; ``tau = -1/slope``.  Reports compare the measured ratio of
a moving preparation to rest against the Einstein factor and against the
law that actually applies to that preparation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import twomass
from .amplitude import (DEFAULT_TOLERANCES, AmplitudeSeries, DefiniteMomentum, DefiniteVelocity,
                        KinematicPreparation, Rest, Tolerances, amplitude_series, approximant,
                        gamma_m, lorentz_gamma)
from .errors import DomainError, FitError
from .spectral import BreitWignerDensity, DiscreteDensity, MassDensity

MIN_FIT_POINTS = 8
MIN_FIT_PROBABILITY = 1e-3
DEFAULT_WINDOW = (0.2, 3.0)  # in units of 1/width_eff
DEFAULT_FIT_POINTS = 64


@dataclass(frozen=True)
class LifetimeFit:
    tau: float
    log_residual_rms: float
    window: tuple[float, float]
    n_points: int


@dataclass(frozen=True)
class ComparisonReport:
    preparation: str
    parameter: float
    ratio_measured: float
    ratio_einstein: float
    ratio_paper_law: float
    max_pointwise_gap: float
    tau_rest: Optional[float] = None
    tau_moving: Optional[float] = None
    window: Optional[tuple[float, float]] = None

    def to_dict(self) -> dict:
        out = asdict(self)
        if self.window is not None:
            out["window"] = list(self.window)
        return out


def fit_lifetime(series: AmplitudeSeries, window: tuple[float, float]) -> LifetimeFit:
    """Fit ``tau`` to the probabilities of ``series`` inside ``window``."""
    t_lo, t_hi = window
    if not t_lo < t_hi:
        raise FitError(f"fit window must have t_lo < t_hi, got {window}")
    t = np.asarray(series.times)
    mask = (t >= t_lo) & (t <= t_hi)
    n = int(mask.sum())
    if n < MIN_FIT_POINTS:
        raise FitError(f"need at least {MIN_FIT_POINTS} points in the fit window, got {n}")
    prob = np.asarray(series.probabilities)[mask]
    if np.any(prob <= MIN_FIT_PROBABILITY):
        raise FitError(f"probabilities in the fit window must exceed {MIN_FIT_PROBABILITY}")
    x = t[mask]
    y = np.log(prob)
    slope, intercept = np.polyfit(x, y, 1)
    if not slope < 0:
        raise FitError(f"log-probability is not decreasing (slope {slope:.3e})")
    resid = y - (slope * x + intercept)
    return LifetimeFit(float(-1.0 / slope), float(np.sqrt(np.mean(resid**2))), (float(t_lo), float(t_hi)), n)


def effective_width(d: BreitWignerDensity, prep: KinematicPreparation) -> float:
    """Decay rate of the matching exponential approximant."""
    if isinstance(prep, Rest):
        return d.width
    if isinstance(prep, DefiniteVelocity):
        return d.width * lorentz_gamma(prep.v)
    return d.width / gamma_m(prep.p, d.m)


def default_window(d: BreitWignerDensity, prep: KinematicPreparation) -> tuple[float, float]:
    w = effective_width(d, prep)
    return DEFAULT_WINDOW[0] / w, DEFAULT_WINDOW[1] / w


def _fit_grid(window, n=DEFAULT_FIT_POINTS):
    return np.linspace(window[0], window[1], n)


def _prep_parameter(prep):
    if isinstance(prep, DefiniteVelocity):
        return prep.v
    if isinstance(prep, DefiniteMomentum):
        return prep.p
    return 0.0


def dilation_report(d: MassDensity, prep: KinematicPreparation,
                    window: Optional[tuple[float, float]] = None,
                    rest_window: Optional[tuple[float, float]] = None,
                    tol: Tolerances = DEFAULT_TOLERANCES,
                    n_points: int = DEFAULT_FIT_POINTS) -> ComparisonReport:
    """Compare a moving preparation with rest on the same density.

    Breit-Wigner densities are compared through fitted lifetimes; a
    two-line discrete density through its oscillation period.  For
    definite velocity the moving series is integrated directly (phase
    ``mu*gamma*t``) so the pointwise gap tests the contraction identity
    rather than restating it.
    """
    if isinstance(prep, Rest):
        raise DomainError("dilation_report needs a moving preparation")
    if isinstance(d, DiscreteDensity):
        return _two_mass_report(d, prep, window, n_points)
    if not isinstance(d, BreitWignerDensity):
        raise DomainError("lifetime reports need a Breit-Wigner density")

    if isinstance(prep, DefiniteVelocity):
        g = lorentz_gamma(prep.v)
        einstein, law, scale = g, 1.0 / g, g
    else:
        g = gamma_m(prep.p, d.m)
        einstein, law, scale = g, g, 1.0 / g

    window = window or default_window(d, prep)
    rest_window = rest_window or default_window(d, Rest())
    t_move = _fit_grid(window, n_points)
    moving = amplitude_series(d, prep, t_move, tol, direct=True)
    rest = amplitude_series(d, Rest(), _fit_grid(rest_window, n_points), tol)
    fit_move = fit_lifetime(moving, window)
    fit_rest = fit_lifetime(rest, rest_window)

    rest_scaled = amplitude_series(d, Rest(), t_move * scale, tol)
    gap = float(np.max(np.abs(moving.probabilities - rest_scaled.probabilities)))
    return ComparisonReport(prep.label, _prep_parameter(prep), fit_move.tau / fit_rest.tau,
                            einstein, law, gap, fit_rest.tau, fit_move.tau,
                            (float(window[0]), float(window[1])))


def _two_mass_report(d, prep, window, n_points):
    s = twomass.TwoMassState.from_density(d)
    ratio = twomass.measured_period(s, prep) / twomass.measured_period(s, Rest())
    m_bar = 0.5 * (s.m1 + s.m2)
    if isinstance(prep, DefiniteVelocity):
        g = lorentz_gamma(prep.v)
        einstein, law, scale = g, 1.0 / g, g
    else:
        einstein = gamma_m(prep.p, m_bar)
        law = twomass.effective_gamma_tilde(prep.p, s.m1, s.m2)
        scale = 1.0 / law
    if window is None:
        window = (0.0, 3.0 * twomass.oscillation_period(s, Rest()))
    t = np.linspace(window[0], window[1], max(n_points, 2))
    moving = np.abs(twomass.osc_amplitude(s, prep, t)) ** 2
    rest = np.abs(twomass.osc_amplitude(s, Rest(), t * scale)) ** 2
    gap = float(np.max(np.abs(moving - rest)))
    return ComparisonReport(prep.label, _prep_parameter(prep), ratio, einstein, law, gap,
                            window=tuple(float(x) for x in window))


def _scan_grid(d, prep, t_max_units, n):
    w = effective_width(d, prep)
    return np.geomspace(1e-2 / w, t_max_units / w, n)


def exponential_window_scan(d: MassDensity, prep: KinematicPreparation, rel_dev: float,
                            times=None, tol: Tolerances = DEFAULT_TOLERANCES,
                            series: Optional[AmplitudeSeries] = None) -> tuple[float, float]:
    """Largest contiguous stretch of the scan grid where ``|A|^2`` stays
    within ``rel_dev`` (relative) of its exponential approximant.

    The stretch is the one containing the grid point nearest ``1/width_eff``,
    so shrinking ``rel_dev`` always yields a nested window.  Pass a
    precomputed ``series`` to scan several thresholds without recomputing.
    """
    if not 0 < rel_dev < 1:
        raise DomainError(f"rel_dev must lie in (0, 1), got {rel_dev}")
    if not isinstance(d, BreitWignerDensity):
        raise FitError("no exponential approximant exists for this density")
    if series is None:
        if times is None:
            times = _scan_grid(d, prep, 40.0, 96)
        series = amplitude_series(d, prep, times, tol)
    t = series.times
    approx = np.abs(approximant(d, prep, t)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        dev = np.abs(series.probabilities - approx) / approx
    ok = dev < rel_dev
    anchor = int(np.argmin(np.abs(t - 1.0 / effective_width(d, prep))))
    if not ok[anchor]:
        raise FitError(f"no window with relative deviation below {rel_dev}")
    lo = anchor
    while lo > 0 and ok[lo - 1]:
        lo -= 1
    hi = anchor
    while hi < t.size - 1 and ok[hi + 1]:
        hi += 1
    return float(t[lo]), float(t[hi])


def tail_crossover(d: BreitWignerDensity, times, factor: float = 10.0,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> Optional[float]:
    """First grid time where ``|A0|^2`` exceeds ``factor * exp(-width*t)``.

    Returns ``None`` if the exponential law holds over the whole grid.
    """
    series = amplitude_series(d, Rest(), times, tol)
    ratio = series.probabilities / np.exp(-d.width * series.times)
    hits = np.nonzero(ratio > factor)[0]
    return float(series.times[hits[0]]) if hits.size else None


def candidate_lorentz_gammas(p: float, m1: float, m2: float) -> dict:
    """Lorentz factors for momentum ``p`` built from each plausible single mass."""
    return {name: lorentz_gamma(p / math.hypot(p, m)) for name, m in
            (("m1", m1), ("m2", m2), ("mean", 0.5 * (m1 + m2)))}
