"""Cross-checks between the closed forms and the numerical engines.

Each check returns a :class:`CheckResult`; ``run_all`` drives the
``validate`` command. Closed forms are looked up through their modules at
call time so a patched implementation is what gets checked.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import cd_generic as cg
from . import landau_zener as lz
from . import oscillator as osc
from . import propagator as pr
from .errors import StaError

FIG1_RAMPS = ((1.0, 4.0), (1.0, -0.75))
FIG2_RAMP = (0.2, -0.4)


@dataclass(frozen=True)
class CheckResult:
    name: str
    achieved: float
    required: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        msg = f"{tag} {self.name}: achieved {self.achieved:.3e} (required <= {self.required:.1e})"
        if self.required < 0:
            msg = f"{tag} {self.name}: achieved {self.achieved:.6g}"
        return msg + (f" [{self.detail}]" if self.detail else "")


def interior_points(tau: float, count: int = 50) -> np.ndarray:
    return tau * np.arange(1, count + 1) / (count + 1)


def _guard(name, required, fn):
    try:
        return fn()
    except StaError as exc:
        return CheckResult(name, math.inf, required, False, f"{type(exc).__name__}: {exc}")


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def check_oscillator_oracle(n_trunc=80, fd_fraction=1e-6, taus=(0.5, 1.0, 2.0), rtol=1e-5):
    """Fock-basis engine against the closed-form cost rate and energy norm."""
    def run():
        worst_cost = worst_eps = 0.0
        for w0, wd in FIG1_RAMPS:
            for tau in taus:
                p = osc.OscillatorParams(w0, wd, tau)
                for t in interior_points(tau):
                    r = cg.oscillator_cd(p, float(t), n_trunc=n_trunc, fd_step=fd_fraction * tau)
                    worst_cost = max(worst_cost, _rel(r.cost_rate, osc.osc_cost_rate(p, t)))
                    worst_eps = max(worst_eps, _rel(r.energy_norm, osc.osc_epsilon(p, t)))
        return [CheckResult("osc_cost_rate", worst_cost, rtol, worst_cost <= rtol, f"Fock n={n_trunc}"),
                CheckResult("osc_energy_norm", worst_eps, rtol, worst_eps <= rtol, f"Fock n={n_trunc}")]
    out = _guard("osc_cost_rate", rtol, run)
    return out if isinstance(out, list) else [out]


def check_lz_oracle(deltas=(0.001, 0.01), taus=(1.0, 1e3), fd_fraction=1e-6, atol=1e-6, rtol=1e-6):
    """Finite-difference correction against the closed-form sigma_y term."""
    def run():
        worst_h1 = worst_cost = 0.0
        for d in deltas:
            for tau in taus:
                p = lz.LZParams(d, *FIG2_RAMP, tau)
                s = cg.HamiltonianSchedule(2, lambda t, p=p: lz.lz_hamiltonian(p, t), tau)
                for t in interior_points(tau):
                    r = cg.counterdiabatic(s, float(t), 0, fd_fraction * tau)
                    worst_h1 = max(worst_h1, float(np.max(np.abs(r.h1 - lz.lz_cd_term(p, t)))))
                    worst_cost = max(worst_cost, _rel(r.cost_rate, lz.lz_cost_rate(p, t)))
        return [CheckResult("lz_cd_term", worst_h1, atol, worst_h1 <= atol, "elementwise"),
                CheckResult("lz_cost_rate", worst_cost, rtol, worst_cost <= rtol, "relative")]
    out = _guard("lz_cd_term", atol, run)
    return out if isinstance(out, list) else [out]


def check_richardson(fd_fraction=1e-6, rtol=1e-6):
    def run():
        worst = 0.0
        ok = True
        p = lz.LZParams(0.01, *FIG2_RAMP, 1.0)
        s = cg.HamiltonianSchedule(2, lambda t: lz.lz_hamiltonian(p, t), 1.0)
        po = osc.OscillatorParams(1.0, 4.0, 1.0)
        so = cg.HamiltonianSchedule(80, lambda t: cg.build_oscillator_fock(po, 80, t, 3.0, check=False), 1.0)
        for sched, t in ((s, 0.5), (s, 0.45), (so, 0.5)):
            d1, d2, err, passed = cg.richardson_consistency(sched, t, 0, fd_fraction * sched.tau, rtol)
            worst = max(worst, err)
            ok = ok and passed
        return CheckResult("richardson_consistency", worst, rtol, ok, f"fd_step={fd_fraction:g} tau")
    return [_guard("richardson_consistency", rtol, run)]


def check_osc_angle(atol=1e-6):
    def run():
        worst = 0.0
        for w0, wd in FIG1_RAMPS:
            p = osc.OscillatorParams(w0, wd, 1.0)
            for t in np.linspace(0.0, 1.0, 11):
                worst = max(worst, abs(osc.osc_angle(p, t) - osc.gaussian_overlap_angle(w0, p.omega(t))))
        return CheckResult("osc_angle", worst, atol, worst <= atol, "Gaussian overlap")
    return [_guard("osc_angle", atol, run)]


def check_tqd_fidelity(delta=0.01, tau=1.0, steps=10_000, tol=1e-6):
    """Driven evolution stays on the ground state; bare evolution does not."""
    def run():
        p = lz.LZParams(delta, *FIG2_RAMP, tau)
        bare = pr.lz_schedule(p, driven=False)
        psi0 = lz.lz_ground_state(p, 0.0)[0]
        traj = pr.propagate(pr.lz_schedule(p, driven=True), psi0, steps)
        loss = 1.0 - pr.min_instantaneous_fidelity(traj, bare)
        traj0 = pr.propagate(bare, psi0, steps)
        f0 = pr.final_fidelity(traj0, bare)
        return [CheckResult("tqd_fidelity", loss, tol, loss <= tol, f"delta={delta}, tau={tau}"),
                CheckResult("bare_sweep_fidelity", f0, 0.5, f0 < 0.5, "must be diabatic")]
    out = _guard("tqd_fidelity", tol, run)
    return out if isinstance(out, list) else [out]


def run_all(fd_fraction: float = 1e-6) -> list[CheckResult]:
    results = []
    results += check_lz_oracle(fd_fraction=fd_fraction)
    results += check_oscillator_oracle(fd_fraction=fd_fraction)
    results += check_richardson(fd_fraction=fd_fraction)
    results += check_osc_angle()
    results += check_tqd_fidelity()
    return results
