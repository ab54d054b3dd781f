"""Adaptive Simpson quadrature with a global error budget."""
from __future__ import annotations

import math

from .errors import NumericError

ABS_TOL = 1e-10
REL_TOL = 1e-8
MAX_DEPTH = 48
INITIAL_PANELS = 8
MAX_EVALS = 2_000_000


def _simpson(h, fa, fm, fb):
    return h / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_quadrature(f, a: float, b: float, abs_tol: float = ABS_TOL, rel_tol: float = REL_TOL,
                        max_depth: int = MAX_DEPTH, initial_panels: int = INITIAL_PANELS) -> float:
    """Integrate ``f`` over ``[a, b]`` by adaptive Simpson refinement.

    The interval is first cut into ``initial_panels`` equal panels so that a
    narrow feature near the centre or the edges is sampled from the start.
    The target error ``max(abs_tol, rel_tol * |I|)`` is set from the coarse
    composite estimate and shared between panels in proportion to width; a
    panel is accepted when ``|S_left + S_right - S| <= 15 * tol`` and the
    accepted value carries the Richardson correction.

    Raises
    ------
    NumericError
        When a panel still fails the test at ``max_depth``, or the integrand
        has been evaluated ``MAX_EVALS`` times. The exception carries the
        integral estimate and the accumulated error bound.
    """
    value, err, ok = _integrate(f, a, b, abs_tol, rel_tol, max_depth, initial_panels)
    if not ok:
        raise NumericError(
            f"adaptive quadrature exceeded depth {max_depth} on [{a}, {b}]",
            estimate=value, error_bound=err,
        )
    return value


def adaptive_quadrature_with_error(f, a, b, abs_tol=ABS_TOL, rel_tol=REL_TOL, max_depth=MAX_DEPTH,
                                   initial_panels=INITIAL_PANELS):
    """Like :func:`adaptive_quadrature` but return ``(value, error_bound)``."""
    value, err, ok = _integrate(f, a, b, abs_tol, rel_tol, max_depth, initial_panels)
    if not ok:
        raise NumericError(f"adaptive quadrature exceeded depth {max_depth} on [{a}, {b}]",
                           estimate=value, error_bound=err)
    return value, err


def _integrate(f, a, b, abs_tol, rel_tol, max_depth, initial_panels):
    if not b > a:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if abs_tol <= 0 or rel_tol < 0:
        raise ValueError("tolerances must be positive")
    n = max(1, int(initial_panels))
    width = (b - a) / n
    xs = [a + k * 0.5 * width for k in range(2 * n)] + [b]
    fs = [float(f(x)) for x in xs]
    if not all(math.isfinite(v) for v in fs):
        raise NumericError("integrand is not finite on the initial grid")

    panels = []
    coarse = 0.0
    for k in range(n):
        x0, xm, x1 = xs[2 * k], xs[2 * k + 1], xs[2 * k + 2]
        f0, fm, f1 = fs[2 * k], fs[2 * k + 1], fs[2 * k + 2]
        s = _simpson(x1 - x0, f0, fm, f1)
        coarse += s
        panels.append((x0, x1, f0, fm, f1, s))

    target = max(abs_tol, rel_tol * abs(coarse))
    total = 0.0
    err_total = 0.0
    ok = True
    # explicit stack: (a, b, fa, fm, fb, whole, tol, depth); left-first for determinism
    stack = [(x0, x1, f0, fm, f1, s, target * (x1 - x0) / (b - a), 0)
             for (x0, x1, f0, fm, f1, s) in reversed(panels)]
    evals = len(fs)
    while stack:
        if evals >= MAX_EVALS:
            rest = sum(item[5] for item in stack)
            raise NumericError(f"adaptive quadrature used {evals} evaluations without converging on [{a}, {b}]",
                               estimate=total + rest, error_bound=math.inf)
        x0, x1, f0, fm, f1, whole, tol, depth = stack.pop()
        evals += 2
        xm = 0.5 * (x0 + x1)
        fl = float(f(0.5 * (x0 + xm)))
        fr = float(f(0.5 * (xm + x1)))
        left = _simpson(xm - x0, f0, fl, fm)
        right = _simpson(x1 - xm, fm, fr, f1)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol or depth >= max_depth:
            if abs(delta) > 15.0 * tol or not (math.isfinite(fl) and math.isfinite(fr)):
                ok = False
            total += left + right + delta / 15.0
            err_total += abs(delta) / 15.0
            continue
        stack.append((xm, x1, fm, fr, f1, right, 0.5 * tol, depth + 1))
        stack.append((x0, xm, f0, fl, fm, left, 0.5 * tol, depth + 1))
    return total, err_total, ok
