"""Numerical oracles: 5-point Laplacian residuals with Richardson ratios,
finite-difference Wirtinger derivatives, winding integrals and branch-gauged
distances. Everything here is deterministic for fixed inputs."""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LoopHitsSingularity, SingularPoint, StencilHitsSingularity

DEFAULT_SEED = 0
LOOP_STEPS = 4096
EXACT_FLOOR = 1e-7
RATIO_BAND = (0.2, 0.35)


@dataclass(frozen=True)
class VerificationReport:
    check: str
    name: str
    probe: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.check:<22} {self.name:<28} residual={self.residual:.3e} "
                f"tol={self.tolerance:.1e}  [{self.probe}]")


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "name", "residual", "tolerance", "pass"])
    for r in reports:
        w.writerow([r.check, r.name, f"{r.residual:.12e}", f"{r.tolerance:.3e}", int(r.passed)])
    return buf.getvalue()


def _call(h, z):
    try:
        out = np.asarray(h(z), dtype=float)
    except (SingularPoint, DomainError) as exc:
        raise StencilHitsSingularity(str(exc)) from exc
    if not np.all(np.isfinite(out)):
        raise StencilHitsSingularity("stencil produced non-finite values")
    return out


def _diff(h, z, w):
    """h(w) - h(z); branch-corrected when h is a HarmonicScalar, so a stencil
    straddling a principal-branch cut still sees the continuous field."""
    if hasattr(h, "step"):
        try:
            out = np.asarray(h.step(z, w), dtype=float)
        except (SingularPoint, DomainError) as exc:
            raise StencilHitsSingularity(str(exc)) from exc
        if not np.all(np.isfinite(out)):
            raise StencilHitsSingularity("stencil produced non-finite values")
        return out
    return _call(h, w) - _call(h, z)


def laplacian_stencil(h, grid, delta: float):
    """(h(x+d) + h(x-d) + h(y+d) + h(y-d) - 4h) / d^2 at every grid point."""
    z = np.asarray(grid, dtype=complex)
    s = sum(_diff(h, z, z + e) for e in (delta, -delta, 1j * delta, -1j * delta))
    return s / delta ** 2


def discrete_laplacian_residual(h, grid, delta: float) -> float:
    return float(np.max(np.abs(laplacian_stencil(h, grid, delta))))


def richardson_residuals(h, grid, delta: float, levels: int = 3):
    """Residuals at delta, delta/2, ... and the successive ratios (about 1/4
    for a harmonic function whose fourth derivatives do not vanish)."""
    res = [discrete_laplacian_residual(h, grid, delta / 2 ** j) for j in range(levels)]
    ratios = [res[j + 1] / res[j] if res[j] > 0 else math.nan for j in range(levels - 1)]
    return res, ratios


def harmonicity_report(name: str, h, grid, delta: float = 0.02, floor: float = EXACT_FLOOR):
    """Pass if the stencil residual shrinks by a factor in [0.2, 0.35] per
    halving of delta (order delta^2), or if it sits below ``floor`` at every
    level (the stencil is exact for polynomials of degree <= 3)."""
    res, ratios = richardson_residuals(h, grid, delta)
    probe = f"{np.size(grid)} pts, d={delta:g}/{delta / 2:g}/{delta / 4:g}"
    if max(res) <= floor:
        return VerificationReport("laplacian-exact", name, probe, max(res), floor)
    lo, hi = RATIO_BAND
    mid, half = (lo + hi) / 2, (hi - lo) / 2
    worst = max(abs(r - mid) if np.isfinite(r) else math.inf for r in ratios)
    return VerificationReport("laplacian-richardson", name, probe + f", ratios={ratios[0]:.3f},{ratios[1]:.3f}",
                              worst, half)


def wirtinger_fd(F, z, delta: float = 1e-5):
    """Central-difference d/dz = (d/dx - i d/dy)/2 of a real function."""
    z = np.asarray(z, dtype=complex)
    fx = (np.asarray(F(z + delta)) - np.asarray(F(z - delta))) / (2 * delta)
    fy = (np.asarray(F(z + 1j * delta)) - np.asarray(F(z - 1j * delta))) / (2 * delta)
    return 0.5 * (fx - 1j * fy)


def loop_points(center, radius: float, n_steps: int = LOOP_STEPS):
    # fixed fractional offset keeps samples off axis-aligned branch cuts
    t = 2 * np.pi * (np.arange(n_steps + 1) + 0.1234) / n_steps
    return complex(center) + radius * np.exp(1j * t)


def winding_integral(h, center, radius: float, n_steps: int = LOOP_STEPS, method: str = "unwrap") -> float:
    """Enclosed total pitch (1/2 pi) * (change of h around the circle).

    method="unwrap" sums branch-corrected increments of h (needs
    ``h.increments``); method="trapezoid" integrates dh = 2 Re(h_z dz) with
    the periodic trapezoid rule (needs ``h.dz``).
    """
    pts = loop_points(center, radius, n_steps)
    try:
        if method == "unwrap":
            total = float(np.sum(h.increments(pts)))
        elif method == "trapezoid":
            zz = pts[:-1]
            dz_dt = 1j * (zz - complex(center))
            vals = 2 * np.real(np.asarray(h.dz(zz)) * dz_dt)
            total = float(np.sum(vals) * 2 * np.pi / n_steps)
        else:
            raise ValueError("method must be 'unwrap' or 'trapezoid'")
    except (SingularPoint, DomainError) as exc:
        raise LoopHitsSingularity(str(exc)) from exc
    if not math.isfinite(total):
        raise LoopHitsSingularity("loop produced non-finite increments")
    return total / (2 * np.pi)


def winding_report(name: str, h, center, radius: float, expected: float, tol: float = 1e-8,
                   n_steps: int = LOOP_STEPS, method: str = "unwrap") -> VerificationReport:
    """Winding check; the residual is inflated to inf when doubling the step
    count moves the result by 1e-10 or more (non-convergence)."""
    w1 = winding_integral(h, center, radius, n_steps, method)
    w2 = winding_integral(h, center, radius, 2 * n_steps, method)
    residual = abs(w1 - expected) if abs(w2 - w1) < 1e-10 else math.inf
    probe = f"circle c={complex(center):.4g} r={radius:.4g} n={n_steps}"
    return VerificationReport("winding", name, probe, residual, tol)


def periodic_distance(delta, period):
    """min over integers m of |delta - m * period|; ``period`` may be a
    sequence, in which case integer combinations with |m_j| <= 2 are searched."""
    delta = np.asarray(delta, dtype=float)
    if np.ndim(period) == 0:
        period = float(period)
        if period == 0:
            return np.abs(delta)
        return np.abs(delta - period * np.round(delta / period))
    periods = [float(p) for p in period if p != 0]
    if not periods:
        return np.abs(delta)
    best = np.full(delta.shape, np.inf)
    for ms in itertools.product(range(-2, 3), repeat=len(periods)):
        shift = sum(m * p for m, p in zip(ms, periods))
        best = np.minimum(best, np.abs(delta - shift))
    return best


def gauged_distance(h1, h2, z, period):
    """min_m |h1(z) - h2(z) - m * period|. h1, h2 may be callables or values."""
    v1 = h1(z) if callable(h1) else h1
    v2 = h2(z) if callable(h2) else h2
    return periodic_distance(np.asarray(v1) - np.asarray(v2), period)


def probe_grid(xlim, ylim, n: int = 17):
    x = np.linspace(xlim[0], xlim[1], n)
    y = np.linspace(ylim[0], ylim[1], n)
    return (x[None, :] + 1j * y[:, None]).ravel()


def random_probes(xlim, ylim, n: int = 50, seed: int = DEFAULT_SEED):
    rng = np.random.default_rng(seed)
    return rng.uniform(*xlim, n) + 1j * rng.uniform(*ylim, n)
