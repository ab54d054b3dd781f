"""Counterdiabatic driving for an arbitrary finite-dimensional schedule.

For a tracked level ``n`` the correction is

    H1 = i (|dn><n| - |n><dn|),

the single-level commutator form with the parallel-transport gauge
``<n|dn> = 0``. Eigenstate derivatives come from gauge-aligned central
differences of numerically computed eigenvectors with one Richardson
extrapolation step. This module is deliberately independent of the closed
forms in :mod:`oscillator` and :mod:`landau_zener` so it can check them.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BoundaryError, NumericError, TruncationWarning, ValidationError
from .schedules import Ramp
from .spectral import as_hermitian, bures_angle, eigensystem_hermitian

DEFAULT_FD_FRACTION = 1e-6
STENCILS = ("central", "forward", "backward", "auto")


@dataclass(frozen=True)
class HamiltonianSchedule:
    """``evaluate(t)`` returns the Hamiltonian at time ``t`` in ``[0, tau]``.

    ``evaluate`` must be a pure function so that schedules can be shared
    between workers.
    """

    dim: int
    evaluate: Callable[[float], np.ndarray]
    tau: float
    notes: tuple = ()

    def at(self, t: float) -> np.ndarray:
        H = as_hermitian(self.evaluate(t))
        if H.shape[0] != self.dim:
            raise ValidationError(f"schedule returned dimension {H.shape[0]}, expected {self.dim}")
        return H

    def default_fd_step(self) -> float:
        return DEFAULT_FD_FRACTION * self.tau


@dataclass(frozen=True)
class CDResult:
    t: float
    level: int
    eigenvalue: float
    eigenstate: np.ndarray
    eigenstate_derivative: np.ndarray
    h1: np.ndarray

    @property
    def cost_rate(self) -> float:
        return float(np.linalg.norm(self.eigenstate_derivative))

    @property
    def energy_norm(self) -> float:
        return math.hypot(self.eigenvalue, self.cost_rate)


def _eigenpair(s: HamiltonianSchedule, t: float, level: int):
    es = eigensystem_hermitian(s.at(t))
    if not 0 <= level < es.dim:
        raise ValidationError(f"level {level} out of range for dimension {es.dim}")
    return es.eigenvalues[level], es.vector(level)


def _aligned(s, t, level, ref):
    _, v = _eigenpair(s, t, level)
    ov = np.vdot(ref, v)
    if abs(ov) < 0.5:
        raise NumericError(f"eigenvector at t={t} rotated too far from the stencil centre; reduce fd_step")
    return v * (np.conj(ov) / abs(ov))


def _stencil_derivative(s, t, level, ref, h, kind):
    if kind == "central":
        return (_aligned(s, t + h, level, ref) - _aligned(s, t - h, level, ref)) / (2.0 * h)
    sign = 1.0 if kind == "forward" else -1.0
    v1 = _aligned(s, t + sign * h, level, ref)
    v2 = _aligned(s, t + 2.0 * sign * h, level, ref)
    return sign * (-3.0 * ref + 4.0 * v1 - v2) / (2.0 * h)


def _resolve_stencil(s, t, h, stencil):
    if stencil not in STENCILS:
        raise ValidationError(f"unknown stencil {stencil!r}")
    fits_central = t - h >= 0.0 and t + h <= s.tau
    if stencil == "auto":
        if fits_central:
            return "central"
        return "forward" if t + 2.0 * h <= s.tau else "backward"
    ok = {
        "central": fits_central,
        "forward": t >= 0.0 and t + 2.0 * h <= s.tau,
        "backward": t - 2.0 * h >= 0.0 and t <= s.tau,
    }[stencil]
    if not ok:
        raise BoundaryError(f"{stencil} stencil of half-width {h} at t={t} leaves [0, {s.tau}]")
    return stencil


def project_out(d: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Remove the component of ``d`` along the unit vector ``n``.

    A component already at rounding level is left alone, which makes the
    operation exactly idempotent.
    """
    c = np.vdot(n, d)
    if abs(c) <= 4.0 * np.finfo(float).eps * max(np.linalg.norm(d), np.finfo(float).tiny):
        return d
    return d - c * n


def finite_difference_derivative(s, t, level=0, fd_step=None, richardson=True, stencil="central"):
    """Raw gauge-aligned derivative of the tracked eigenvector (no projection)."""
    h = s.default_fd_step() if fd_step is None else float(fd_step)
    if not h > 0:
        raise ValidationError("fd_step must be positive")
    kind = _resolve_stencil(s, t, h, stencil)
    _, n = _eigenpair(s, t, level)
    d = _stencil_derivative(s, t, level, n, h, kind)
    if richardson:
        d = (4.0 * _stencil_derivative(s, t, level, n, 0.5 * h, kind) - d) / 3.0
    return d


def counterdiabatic(s: HamiltonianSchedule, t: float, level: int = 0, fd_step: float | None = None,
                    richardson: bool = True, stencil: str = "central") -> CDResult:
    """Tracked eigenpair, its projected derivative and the correction ``H1`` at ``t``.

    Raises
    ------
    BoundaryError
        If the stencil leaves ``[0, tau]`` (use ``stencil="auto"`` to switch to
        a one-sided stencil at the edges).
    DegeneracyError
        Propagated from the eigen-decomposition.
    """
    h = s.default_fd_step() if fd_step is None else float(fd_step)
    if not h > 0:
        raise ValidationError("fd_step must be positive")
    kind = _resolve_stencil(s, t, h, stencil)
    eps, n = _eigenpair(s, t, level)
    d = _stencil_derivative(s, t, level, n, h, kind)
    if richardson:
        d = (4.0 * _stencil_derivative(s, t, level, n, 0.5 * h, kind) - d) / 3.0
    d = project_out(d, n)
    h1 = 1j * (np.outer(d, n.conj()) - np.outer(n, d.conj()))
    return CDResult(t=t, level=level, eigenvalue=float(eps), eigenstate=n, eigenstate_derivative=d, h1=h1)


def eigenstate_derivative(s, t, level=0, fd_step=None, **kw) -> np.ndarray:
    return counterdiabatic(s, t, level, fd_step, **kw).eigenstate_derivative


def cd_hamiltonian(s, t, level=0, fd_step=None, **kw) -> np.ndarray:
    return counterdiabatic(s, t, level, fd_step, **kw).h1


def energy_norm_generic(s, t, level=0, fd_step=None, **kw) -> float:
    return counterdiabatic(s, t, level, fd_step, **kw).energy_norm


def richardson_consistency(s, t, level=0, fd_step=None, rtol=1e-6):
    """Compare central-difference derivative norms at ``h``, ``h/2`` and ``h/4``.

    Returns ``(change_1, change_2, error_estimate, ok)`` where ``change_k`` are
    successive norm differences. For a second-order stencil the second change
    is about a quarter of the first. The check passes when the changes do not
    grow and the stencil error estimate ``change_1 / 3`` is within ``rtol``
    of the derivative norm (floored at 1).
    """
    h = s.default_fd_step() if fd_step is None else float(fd_step)
    norms = [
        float(np.linalg.norm(project_out(finite_difference_derivative(s, t, level, h / 2 ** k, richardson=False),
                                         _eigenpair(s, t, level)[1])))
        for k in range(3)
    ]
    d1 = abs(norms[1] - norms[0])
    d2 = abs(norms[2] - norms[1])
    noise = 1e-9 * max(1.0, norms[2])
    err = d1 / 3.0
    ok = (d2 <= max(d1, noise)) and err <= rtol * max(1.0, norms[2])
    return d1, d2, err, ok


# --- oscillator in a truncated Fock basis -------------------------------------------------------

def _ladder(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1)


def build_oscillator_fock(p, n_trunc: int, t: float, omega_ref: float | None = None,
                          check: bool = True) -> np.ndarray:
    """Matrix of ``p^2/2m + m omega_t^2 x^2 / 2`` in the number basis of ``omega_ref``.

    The squares of position and momentum are assembled from the exact
    ladder identities ``(a +- a^dag)^2 = a^2 + a^dag^2 +- (2N + 1)``, so the
    truncated matrix has no spurious corner element. The mass drops out.
    """
    if n_trunc < 40:
        raise ValidationError(f"n_trunc must be at least 40, got {n_trunc}")
    w = p.omega(t)
    wr = w if omega_ref is None else float(omega_ref)
    if not wr > 0:
        raise ValidationError("omega_ref must be positive")
    a = _ladder(n_trunc)
    a2 = a @ a
    squeeze = a2 + a2.T
    number = np.arange(n_trunc, dtype=float) + 0.5
    H = (w * w - wr * wr) / (4.0 * wr) * squeeze + np.diag((w * w + wr * wr) / (2.0 * wr) * number)
    H = H.astype(complex)
    if check:
        es = eigensystem_hermitian(H)
        tail = float(np.max(np.abs(es.vector(0)[-5:])))
        if tail > 1e-10:
            warnings.warn(f"Fock truncation n={n_trunc}: ground-state amplitude {tail:.2e} in the top 5 levels "
                          f"(omega={w}, omega_ref={wr})", TruncationWarning, stacklevel=2)
    return H


def oscillator_fock_schedule(p, n_trunc: int = 80, omega_ref: float | None = None) -> HamiltonianSchedule:
    """Fixed-basis schedule for the whole protocol.

    The reference frequency defaults to the geometric mean of the end
    frequencies. A note is attached when the frequency changes by more than
    a factor of 5 over the protocol.
    """
    w0, w1 = p.omega0, p.omega0 + p.omega_d
    wr = math.sqrt(w0 * w1) if omega_ref is None else float(omega_ref)
    notes = ()
    if max(w0, w1) / min(w0, w1) > 5.0:
        notes = (f"frequency changes by {max(w0, w1) / min(w0, w1):.3g}x; Fock truncation is stressed",)
        warnings.warn(notes[0], TruncationWarning, stacklevel=2)
    build_oscillator_fock(p, n_trunc, 0.0, wr)
    build_oscillator_fock(p, n_trunc, p.tau, wr)
    return HamiltonianSchedule(dim=n_trunc, tau=p.tau, notes=notes,
                               evaluate=lambda t: build_oscillator_fock(p, n_trunc, t, wr, check=False))


def oscillator_cd(p, t: float, n_trunc: int = 80, level: int = 0, fd_step: float | None = None,
                  stencil: str = "central") -> CDResult:
    """Counterdiabatic data for the oscillator with the basis centred on ``omega_t``."""
    wr = p.omega(t)
    s = HamiltonianSchedule(dim=n_trunc, tau=p.tau,
                            evaluate=lambda u: build_oscillator_fock(p, n_trunc, u, wr, check=False))
    return counterdiabatic(s, t, level, fd_step, stencil=stencil)


# --- generic schedules and protocol adapter -----------------------------------------------------

def linear_interpolation_schedule(h_start, h_end, tau: float) -> HamiltonianSchedule:
    """``H(t) = H_start + s(t) (H_end - H_start)`` with ``s`` a linear ramp from 0 to 1."""
    A = as_hermitian(h_start)
    B = as_hermitian(h_end)
    if A.shape != B.shape:
        raise ValidationError("start and end Hamiltonians differ in shape")
    ramp = Ramp(start=0.0, delta=1.0, tau=tau)
    D = B - A
    return HamiltonianSchedule(dim=A.shape[0], tau=float(tau), evaluate=lambda t: A + ramp.value(t) * D)


def driven_schedule(s: HamiltonianSchedule, level: int = 0, fd_step: float | None = None) -> HamiltonianSchedule:
    """Schedule of ``H0 + H1`` built numerically; edge times use one-sided stencils."""
    def evaluate(t):
        return s.at(t) + counterdiabatic(s, t, level, fd_step, stencil="auto").h1
    return HamiltonianSchedule(dim=s.dim, tau=s.tau, evaluate=evaluate, notes=s.notes)


class GenericProtocol:
    """Protocol adapter for a numerical schedule; the control is the ramp fraction ``t/tau``."""

    def __init__(self, schedule: HamiltonianSchedule, level: int = 0, fd_step: float | None = None):
        self.schedule = schedule
        self.level = level
        self.fd_step = fd_step
        self.tau = schedule.tau
        self._n0 = _eigenpair(schedule, 0.0, level)[1]

    def _cd(self, t):
        return counterdiabatic(self.schedule, t, self.level, self.fd_step, stencil="auto")

    def control(self, t):
        return t / self.tau

    def epsilon(self, t):
        return self._cd(t).energy_norm

    def cost_rate(self, t):
        return self._cd(t).cost_rate

    def angle(self, t):
        return bures_angle(self._n0, _eigenpair(self.schedule, t, self.level)[1])
