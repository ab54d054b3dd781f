import numpy as np
import pytest

from sta_tradeoff.errors import DomainError, ValidationError
from sta_tradeoff.schedules import Ramp, linear_ramp, ramp_derivative, ramp_value


def test_value_examples():
    assert ramp_value(linear_ramp(1, 4, 1), 0.0) == 1.0
    assert ramp_value(linear_ramp(1, 4, 1), 0.5) == 3.0
    assert ramp_value(linear_ramp(0.2, -0.4, 2), 1.0) == pytest.approx(0.0, abs=1e-16)


@pytest.mark.parametrize("start, delta, tau, expected", [
    (1, 4, 1, 4.0),
    (1, 4, 2, 2.0),
    (0.2, -0.4, 1000, -0.0004),
])
def test_derivative_examples(start, delta, tau, expected):
    r = linear_ramp(start, delta, tau)
    for t in np.linspace(0, tau, 7):
        assert ramp_derivative(r, t) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("t", [-1e-9, 1.0 + 1e-9, 5.0])
def test_outside_window_is_an_error(t):
    r = linear_ramp(1, 4, 1)
    with pytest.raises(DomainError):
        r.value(t)
    with pytest.raises(DomainError):
        r.derivative(t)


def test_invalid_construction():
    with pytest.raises(ValidationError):
        Ramp(1, 4, 0.0)
    with pytest.raises(ValidationError):
        Ramp(1, 4, 1.0, kind="cubic")


def test_finite_difference_matches_derivative(rng):
    for start, delta, tau in [(1, 4, 1), (1, -0.75, 2), (0.2, -0.4, 1000)]:
        r = linear_ramp(start, delta, tau)
        h = 1e-6 * tau
        for t in rng.uniform(h, tau - h, size=100):
            fd = (r.value(t + h) - r.value(t - h)) / (2 * h)
            assert abs(fd - r.derivative(t)) <= 1e-6


@pytest.mark.parametrize("start, delta, tau", [(1, 4, 0.5), (1, 4, 1), (1, 4, 2), (1, -0.75, 1), (0.2, -0.4, 1000)])
def test_endpoint_difference_is_delta(start, delta, tau):
    r = linear_ramp(start, delta, tau)
    assert r.value(tau) - r.value(0.0) == delta
