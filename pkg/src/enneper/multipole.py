"""Two-dimensional multipole expansion of helicoidal charges.

Motifs of pitch p_j at z_j act as point charges. Outside the smallest disc
about the expansion centre c that holds every charge,

    h(z) = Im( p log(z - c) + sum_k c_k / (z - c)^k ),
    p = sum_j p_j,   c_k = -(1/k) sum_j p_j (z_j - c)^k.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsideConvergenceRadius
from .motifs import MotifConfiguration

RHO_MARGIN = 1.05


@dataclass(frozen=True)
class MultipoleExpansion:
    p: float
    c: tuple
    center: complex
    r_min: float

    @property
    def K(self) -> int:
        return len(self.c)


def multipole_coeffs(cfg: MotifConfiguration, K: int, center=0j) -> MultipoleExpansion:
    if K < 0:
        raise ValueError("truncation order K must be >= 0")
    center = complex(center)
    w = cfg.centers - center
    p = cfg.pitches
    coeffs = []
    wk = np.ones_like(w)
    for k in range(1, K + 1):
        wk = wk * w
        coeffs.append(complex(-np.sum(p * wk) / k) + 0j)  # no signed zeros
    return MultipoleExpansion(float(np.sum(p)), tuple(coeffs), center, float(np.max(np.abs(w))))


def _check_outside(exp: MultipoleExpansion, r, rho: float):
    r = np.asarray(r, dtype=float)
    limit = rho * exp.r_min
    if np.any(r <= limit) or np.any(r == 0):
        raise InsideConvergenceRadius(
            f"|z - center| = {float(np.min(r)):.6g} is not beyond {rho:g} * r_min = {limit:.6g}"
        )


def multipole_eval(exp: MultipoleExpansion, z, rho: float = RHO_MARGIN):
    """Truncated expansion with the principal arg for the log term."""
    zeta = np.asarray(z, dtype=complex) - exp.center
    _check_outside(exp, np.abs(zeta), rho)
    inv = 1.0 / zeta
    series = np.zeros_like(zeta)
    for ck in reversed(exp.c):  # Horner in 1/zeta
        series = (series + ck) * inv
    out = exp.p * np.angle(zeta) + np.imag(series)
    return out[()] if out.ndim == 0 else out


def truncation_error_estimate(exp: MultipoleExpansion, cfg: MotifConfiguration, r) -> float:
    """sum_j |p_j| (r_j/r)^(K+1) / ((K+1)(1 - r_j/r)), an upper bound for
    |h_exact - h_K| on the circle |z - center| = r."""
    r = np.asarray(r, dtype=float)
    _check_outside(exp, r, 1.0)
    K = exp.K
    rj = np.abs(cfg.centers - exp.center)
    q = rj[:, None] / np.atleast_1d(r)[None, :]
    bound = np.sum(np.abs(cfg.pitches)[:, None] * q ** (K + 1) / ((K + 1) * (1 - q)), axis=0)
    return bound[0] if r.ndim == 0 else bound


def exact_field(cfg: MotifConfiguration, z, center=0j, gauge: str = "principal"):
    """sum_j p_j arg(z - z_j).

    gauge="matched" writes each term as arg(z - c) + arg(1 - (z_j - c)/(z - c)),
    the branch the expansion itself uses, so the two can be compared directly
    outside the convergence disc.
    """
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape)
    if gauge == "principal":
        for m in cfg.motifs:
            out = out + m.pitch * np.angle(z - m.center)
    elif gauge == "matched":
        zeta = z - complex(center)
        for m in cfg.motifs:
            out = out + m.pitch * (np.angle(zeta) + np.angle(1 - (m.center - complex(center)) / zeta))
    else:
        raise ValueError("gauge must be 'principal' or 'matched'")
    return out[()] if out.ndim == 0 else out


def error_table(cfg: MotifConfiguration, exp: MultipoleExpansion, radii, n_theta: int = 64):
    """Rows (r, theta, h_exact, h_K, bound) on circles about the centre."""
    rows = []
    theta = 2 * np.pi * (np.arange(n_theta) + 0.5) / n_theta - np.pi
    for r in radii:
        z = exp.center + r * np.exp(1j * theta)
        exact = exact_field(cfg, z, exp.center, gauge="matched")
        approx = multipole_eval(exp, z)
        bound = float(truncation_error_estimate(exp, cfg, r))
        for t, e, a in zip(theta, exact, approx):
            rows.append((float(r), float(t), float(e), float(a), bound))
    return rows
