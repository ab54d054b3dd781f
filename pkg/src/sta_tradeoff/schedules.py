"""Scalar control ramps with exact time derivatives."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, ValidationError

RAMP_KINDS = ("linear",)


@dataclass(frozen=True)
class Ramp:
    """Control schedule ``value(t) = start + delta * shape(t / tau)`` on ``[0, tau]``.

    Only the linear shape ships. Evaluation outside the protocol window is an
    error rather than an extrapolation.
    """

    start: float
    delta: float
    tau: float
    kind: str = "linear"

    def __post_init__(self):
        if self.kind not in RAMP_KINDS:
            raise ValidationError(f"unknown ramp kind {self.kind!r}; expected one of {RAMP_KINDS}")
        if not self.tau > 0:
            raise ValidationError(f"ramp duration must be positive, got tau={self.tau}")

    def _check(self, t):
        if not 0.0 <= t <= self.tau:
            raise DomainError(f"t={t} outside protocol window [0, {self.tau}]")

    def value(self, t: float) -> float:
        self._check(t)
        if t == self.tau:
            return self.start + self.delta
        return self.start + self.delta * (t / self.tau)

    def derivative(self, t: float) -> float:
        self._check(t)
        return self.delta / self.tau

    @property
    def end(self) -> float:
        return self.start + self.delta


def linear_ramp(start: float, delta: float, tau: float) -> Ramp:
    return Ramp(start=float(start), delta=float(delta), tau=float(tau))


def ramp_value(r: Ramp, t: float) -> float:
    return r.value(t)


def ramp_derivative(r: Ramp, t: float) -> float:
    return r.derivative(t)
