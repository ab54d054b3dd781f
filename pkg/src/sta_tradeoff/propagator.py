"""Fixed-step RK4 integration of the time-dependent Schroedinger equation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import landau_zener as lz
from .cd_generic import HamiltonianSchedule
from .errors import StepSizeError, ValidationError
from .spectral import as_state, eigensystem_hermitian

MIN_STEPS = 1000
DEFAULT_MIN_STEPS = 10_000
MAX_NORM_DRIFT = 1e-6


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), dim)
    norm_drift: float
    warnings: list = field(default_factory=list)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


def max_operator_norm(s: HamiltonianSchedule, samples: int = 1001) -> float:
    ts = np.linspace(0.0, s.tau, samples)
    return max(float(np.linalg.norm(s.at(float(t)), ord=2)) for t in ts)


def default_steps(s: HamiltonianSchedule) -> int:
    """``max(10^4, ceil(50 tau max_t ||H(t)||))``: at most ~0.02 rad of phase per step."""
    return max(DEFAULT_MIN_STEPS, math.ceil(50.0 * s.tau * max_operator_norm(s)))


def propagate(s: HamiltonianSchedule, psi0, steps: int | None = None) -> Trajectory:
    """Integrate ``d psi/dt = -i H(t) psi`` from 0 to ``tau``.

    Classical RK4 with the Hamiltonian evaluated at the start, midpoint and
    end of each step. The state is renormalized after every step; the
    largest pre-renormalization deviation of the norm is reported as
    ``norm_drift``.

    Raises
    ------
    StepSizeError
        If any step changes the norm by more than 1e-6.
    """
    psi = as_state(psi0, dim=s.dim).copy()
    n = default_steps(s) if steps is None else int(steps)
    if n < MIN_STEPS:
        raise ValidationError(f"steps must be at least {MIN_STEPS}, got {n}")
    times = np.linspace(0.0, s.tau, n + 1)
    times[-1] = s.tau
    states = np.empty((n + 1, s.dim), dtype=complex)
    states[0] = psi
    drift = 0.0
    H_next = s.at(float(times[0]))
    for k in range(n):
        t0, t1 = float(times[k]), float(times[k + 1])
        dt = t1 - t0
        H0 = H_next
        Hm = s.at(0.5 * (t0 + t1))
        H_next = s.at(t1)
        k1 = -1j * (H0 @ psi)
        k2 = -1j * (Hm @ (psi + 0.5 * dt * k1))
        k3 = -1j * (Hm @ (psi + 0.5 * dt * k2))
        k4 = -1j * (H_next @ (psi + dt * k3))
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        nrm = float(np.linalg.norm(psi))
        drift = max(drift, abs(nrm - 1.0))
        if drift > MAX_NORM_DRIFT:
            raise StepSizeError(
                f"norm drift {drift:.3e} at t={t1} exceeds {MAX_NORM_DRIFT:.0e}; increase steps (now {n})",
                estimate=psi / nrm, error_bound=drift,
            )
        psi = psi / nrm
        states[k + 1] = psi
    return Trajectory(times=times, states=states, norm_drift=drift, warnings=list(s.notes))


def instantaneous_fidelities(traj: Trajectory, s: HamiltonianSchedule, level: int = 0) -> np.ndarray:
    """``|<n_t|psi_t>|^2`` at each time of the trajectory."""
    if traj.states.shape[1] != s.dim:
        raise ValidationError("trajectory and schedule dimensions differ")
    if not math.isclose(float(traj.times[-1]), s.tau, rel_tol=1e-12) or traj.times[0] != 0.0:
        raise ValidationError("trajectory grid does not span the schedule window")
    out = np.empty(len(traj.times))
    for k, t in enumerate(traj.times):
        v = eigensystem_hermitian(s.at(float(t))).vector(level)
        out[k] = abs(np.vdot(v, traj.states[k])) ** 2
    return out


def min_instantaneous_fidelity(traj: Trajectory, s: HamiltonianSchedule, level: int = 0) -> float:
    return float(np.min(instantaneous_fidelities(traj, s, level)))


def final_fidelity(traj: Trajectory, s: HamiltonianSchedule, level: int = 0) -> float:
    v = eigensystem_hermitian(s.at(s.tau)).vector(level)
    return float(abs(np.vdot(v, traj.final_state)) ** 2)


def reversed_schedule(s: HamiltonianSchedule) -> HamiltonianSchedule:
    """Generator of the inverse evolution: ``t -> -H(tau - t)``."""
    return HamiltonianSchedule(dim=s.dim, tau=s.tau, notes=s.notes,
                               evaluate=lambda t: -s.at(max(0.0, s.tau - t)))


def lz_schedule(p, driven: bool = True) -> HamiltonianSchedule:
    """Closed-form Landau-Zener schedule, with or without the counterdiabatic term."""
    fn = lz.lz_driven_hamiltonian if driven else lz.lz_hamiltonian
    return HamiltonianSchedule(dim=2, tau=p.tau, evaluate=lambda t: fn(p, t))
