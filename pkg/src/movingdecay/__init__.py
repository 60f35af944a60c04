"""Survival amplitudes and decay laws of moving unstable quantum states."""

from .amplitude import (AmplitudeSeries, DefiniteMomentum, DefiniteVelocity, Rest, Tolerances,
                        amplitude_series, approx_momentum, approx_rest, approx_velocity,
                        exponent_compare, gamma_m, lorentz_gamma, survival_momentum,
                        survival_rest, survival_velocity)
from .analysis import (ComparisonReport, LifetimeFit, dilation_report, exponential_window_scan,
                       fit_lifetime)
from .errors import ConfigError, ConvergenceError, DomainError, FitError, MovingDecayError
from .quadrature import (IntegralResult, OscillatoryIntegralSpec, integrate_oracle,
                         integrate_oscillatory)
from .spectral import (BreitWignerDensity, DiscreteDensity, UniformDensity, bw_construct,
                       bw_evaluate, density_from_config, density_moment)
from .twomass import (TwoMassState, effective_gamma_tilde, osc_amplitude,
                      osc_probability_equal_weights, oscillation_period)

__version__ = "0.1.0"
