import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from movingdecay.amplitude import (DefiniteMomentum, DefiniteVelocity, Rest, gamma_m,
                                   lorentz_gamma, survival)
from movingdecay.errors import ConfigError, DomainError
from movingdecay.twomass import (PRESETS, TwoMassState, effective_gamma_tilde, measured_period,
                                 osc_amplitude, osc_probability_equal_weights, oscillation_period,
                                 preset)
from movingdecay.analysis import candidate_lorentz_gammas

CLOCK = TwoMassState(1.0, 2.0)
PREPS = [Rest(), DefiniteVelocity(0.6), DefiniteMomentum(2.0)]


@pytest.mark.parametrize("prep", PREPS)
def test_unit_at_zero(prep):
    assert osc_amplitude(CLOCK, prep, 0.0) == 1.0
    assert osc_probability_equal_weights(CLOCK, prep, 0.0) == 1.0


def test_rest_zero_at_pi():
    assert abs(osc_amplitude(CLOCK, Rest(), math.pi)) ** 2 <= 1e-30
    assert osc_probability_equal_weights(CLOCK, Rest(), math.pi) == pytest.approx(0.0, abs=1e-30)


def test_momentum_zero_is_rest():
    t = np.linspace(0, 20, 50)
    assert np.array_equal(osc_amplitude(CLOCK, DefiniteMomentum(0.0), t), osc_amplitude(CLOCK, Rest(), t))


def test_state_validation():
    for args in [(1.0, 1.0), (-1.0, 2.0), (1.0, 2.0, 0.3, 0.3), (1.0, 2.0, 0.0, 1.0)]:
        with pytest.raises(ConfigError):
            TwoMassState(*args)


def test_closed_form_gated():
    s = TwoMassState(1.0, 2.0, 0.3, 0.7)
    with pytest.raises(ConfigError):
        osc_probability_equal_weights(s, Rest(), 1.0)
    with pytest.raises(ConfigError):
        oscillation_period(s, Rest())
    # the general amplitude still works
    assert abs(osc_amplitude(s, Rest(), 0.0) - 1) < 1e-15


def test_velocity_is_rest_at_scaled_time():
    t = np.linspace(0, 30, 301)
    assert np.allclose(osc_probability_equal_weights(CLOCK, DefiniteVelocity(0.6), t),
                       osc_probability_equal_weights(CLOCK, Rest(), 1.25 * t), rtol=0, atol=1e-13)


def test_momentum_is_rest_at_dilated_time():
    t = np.linspace(0, 30, 301)
    g = effective_gamma_tilde(2.0, 1.0, 2.0)
    assert np.allclose(osc_probability_equal_weights(CLOCK, DefiniteMomentum(2.0), t),
                       osc_probability_equal_weights(CLOCK, Rest(), t / g), rtol=0, atol=1e-13)


def test_gamma_tilde_values():
    assert effective_gamma_tilde(0.0, 1.0, 2.0) == 1.0
    assert effective_gamma_tilde(2.0, 1.0, 2.0) == pytest.approx((math.sqrt(5) + math.sqrt(8)) / 3, rel=1e-15)
    assert effective_gamma_tilde(2.0, 1.0, 2.0) == pytest.approx(1.6881650340819931, rel=1e-14)
    assert effective_gamma_tilde(0.7, 1.3, 1.3) == gamma_m(0.7, 1.3)
    with pytest.raises(DomainError):
        effective_gamma_tilde(-1.0, 1.0, 2.0)


def test_periods():
    assert oscillation_period(CLOCK, Rest()) == pytest.approx(2 * math.pi, rel=1e-15)
    rest = oscillation_period(CLOCK, Rest())
    assert oscillation_period(CLOCK, DefiniteMomentum(2.0)) / rest == pytest.approx(
        effective_gamma_tilde(2.0, 1.0, 2.0), rel=1e-14)
    assert oscillation_period(CLOCK, DefiniteVelocity(0.6)) / rest == pytest.approx(0.8, rel=1e-14)


def test_measured_period_matches_closed_form():
    for prep in PREPS:
        assert measured_period(CLOCK, prep) == pytest.approx(oscillation_period(CLOCK, prep), rel=1e-13)


@settings(max_examples=200, deadline=None)
@given(m1=st.floats(0.0, 10.0), dm=st.floats(0.01, 10.0), p=st.floats(0.0, 20.0),
       v=st.floats(0.0, 0.99), t=st.floats(0.0, 50.0))
def test_generic_path_matches_closed_form(m1, dm, p, v, t):
    s = TwoMassState(m1, m1 + dm)
    d = s.as_density()
    for prep in (Rest(), DefiniteVelocity(v), DefiniteMomentum(p)):
        a = survival(d, prep, t).value
        assert abs(a - osc_amplitude(s, prep, t)) <= 1e-12
        assert abs(abs(a) ** 2 - osc_probability_equal_weights(s, prep, t)) <= 1e-12


@settings(max_examples=300)
@given(m1=st.floats(0.01, 10.0), dm=st.floats(1e-3, 10.0), p=st.floats(1e-3, 50.0))
def test_gamma_tilde_sandwich(m1, dm, p):
    m2 = m1 + dm
    g = effective_gamma_tilde(p, m1, m2)
    assert gamma_m(p, m2) < g < gamma_m(p, m1)


def test_non_einsteinian():
    g = effective_gamma_tilde(2.0, 1.0, 2.0)
    for value in candidate_lorentz_gammas(2.0, 1.0, 2.0).values():
        assert abs(g - value) > 1e-2


@pytest.mark.parametrize("prep", PREPS)
def test_periodicity(prep):
    T = oscillation_period(CLOCK, prep)
    t = np.linspace(0, 3 * T, 97)
    a = osc_probability_equal_weights(CLOCK, prep, t)
    b = osc_probability_equal_weights(CLOCK, prep, t + T)
    assert np.max(np.abs(a - b)) <= 1e-12
    assert np.all((a >= 0) & (a <= 1))


def test_presets():
    assert preset("clock") == CLOCK
    for s in PRESETS.values():
        assert s.equal_weights
        assert math.isfinite(oscillation_period(s, DefiniteMomentum(1.0)))
    with pytest.raises(ConfigError):
        preset("nope")


def test_negative_time():
    with pytest.raises(DomainError):
        osc_amplitude(CLOCK, Rest(), -1.0)
