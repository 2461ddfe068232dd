"""Twist-grain-boundary fields.

* single TGB row:  h = (b / 2 pi lambda) Im ln sin(pi z / d)
* pi/2 TGB:        h = (b / 2 pi lambda) Im ln sn(theta x + i psi y, k)
* untwisted GB:    h = p Im ln sin(pi z / 2d) - p Im ln cos(pi z / 2d)

plus the partial Weierstrass products of sin that rebuild the single row from
individual helicoids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic as an
from .domain import Domain, Puncture
from .elliptic import EllipticModulus, jacobi_sn, sn_lattice
from .errors import ConfigError
from .harmonic import HarmonicScalar
from .immersion import EnneperImmersion
from .verify import periodic_distance

PUNCTURE_FRACTION = 1e-3


@dataclass(frozen=True)
class TgbParams:
    b: float
    lam: float
    d: float

    def __post_init__(self):
        if self.lam == 0:
            raise ConfigError("tgb.lambda must be non-zero")
        if not self.d > 0:
            raise ConfigError(f"tgb.d must be positive, got {self.d!r}")

    @property
    def scale(self) -> float:
        """b / (2 pi lambda)."""
        return self.b / (2 * math.pi * self.lam)


@dataclass(frozen=True)
class Pi2TgbParams:
    b: float
    lam: float
    theta: float
    psi: float
    modulus: EllipticModulus
    gamma: float = 1.0  # layer coefficient of the phase field only

    def __post_init__(self):
        if self.lam == 0:
            raise ConfigError("tgb_pi2.lambda must be non-zero")
        if not (self.theta > 0 and self.psi > 0):
            raise ConfigError("tgb_pi2.theta and tgb_pi2.psi must be positive")

    @property
    def scale(self) -> float:
        return self.b / (2 * math.pi * self.lam)

    @property
    def isotropic(self) -> bool:
        return abs(self.theta - self.psi) <= 1e-12 * max(self.theta, self.psi)


def equal_aspect_psi(k: float, theta: float) -> float:
    """psi with theta/psi = K/K', making the zero lattice of sn(theta x + i psi y)
    square in (x, y). The resulting h is harmonic only when psi == theta."""
    m = EllipticModulus(k)
    return theta * m.Kprime / m.K


def _lattice_domain(points, spacing, window):
    r = PUNCTURE_FRACTION * spacing
    pts = [complex(p) for p in points]
    return Domain.rectangle(*window, punctures=[Puncture(p, r) for p in pts])


def tgb_single(p: TgbParams, window=None) -> EnneperImmersion:
    """Graph of (b / 2 pi lambda) Im ln sin(pi z / d), punctured at z = n d."""
    window = window or (-2 * p.d, 2 * p.d, -p.d, p.d)
    h = HarmonicScalar.im(an.log(an.sin(an.affine(math.pi / p.d))), p.scale)
    n = np.arange(math.floor(window[0] / p.d), math.ceil(window[1] / p.d) + 1)
    lattice = [x * p.d for x in n if window[0] <= x * p.d <= window[1] and window[2] <= 0 <= window[3]]
    dom = _lattice_domain(lattice, p.d, window)
    return EnneperImmersion.graph(h, dom, name=f"tgb(b={p.b:g},lambda={p.lam:g},d={p.d:g})")


def tgb_phase(p: TgbParams, x1, x2, x3):
    """lambda x3 - (b / 2 pi) Im ln sin(pi (x1 + i x2) / d)."""
    w = np.sin(math.pi * (np.asarray(x1) + 1j * np.asarray(x2)) / p.d)
    return p.lam * np.asarray(x3) - p.b / (2 * math.pi) * np.angle(w)


def pi2_singularities(p: Pi2TgbParams, window):
    """(zeros, poles) of sn(theta z, k) in the z-window."""
    xlim = (window[0] * p.theta, window[1] * p.theta)
    ylim = (window[2] * p.psi, window[3] * p.psi)
    k = p.modulus.k
    zeros = sn_lattice(k, xlim, ylim, "zeros")
    poles = sn_lattice(k, xlim, ylim, "poles")
    scale = lambda u: u.real / p.theta + 1j * u.imag / p.psi  # noqa: E731
    return scale(zeros), scale(poles)


def tgb_pi2(p: Pi2TgbParams, window=None) -> EnneperImmersion:
    """Graph of (b / 2 pi lambda) Im ln sn(theta z, k).

    Only the isotropic case theta == psi gives a function of z alone, hence a
    harmonic graph; anisotropic scalings are available through ``tgb_pi2_phase``.
    """
    if not p.isotropic:
        raise ConfigError(
            "tgb_pi2 needs theta == psi for a harmonic graph "
            f"(got theta={p.theta!r}, psi={p.psi!r}); use tgb_pi2_phase for level sets"
        )
    K, Kp = p.modulus.K, p.modulus.Kprime
    window = window or (-2 * K / p.theta, 2 * K / p.theta, -1.5 * Kp / p.theta, 1.5 * Kp / p.theta)
    h = HarmonicScalar.im(an.log(an.sn(an.affine(p.theta), p.modulus.k)), p.scale)
    zeros, poles = pi2_singularities(p, window)
    spacing = 2 * min(K, Kp) / p.theta
    dom = _lattice_domain(list(zeros) + list(poles), spacing, window)
    return EnneperImmersion.graph(h, dom, name=f"tgb_pi2(k={p.modulus.k:g},theta={p.theta:g})")


def tgb_pi2_phase(p: Pi2TgbParams, x, y, z3):
    """gamma z3 - (b / 2 pi) Im ln sn(theta x + i psi y, k), any theta, psi."""
    u = p.theta * np.asarray(x, dtype=float) + 1j * p.psi * np.asarray(y, dtype=float)
    s = jacobi_sn(u, p.modulus.k, errors="mask")
    return p.gamma * np.asarray(z3) - p.b / (2 * math.pi) * np.angle(s)


def utgb(pitch: float, d: float, window=None) -> EnneperImmersion:
    """Graph of p Im ln sin(pi z / 2d) - p Im ln cos(pi z / 2d).

    Motifs of pitch +p sit at the zeros 2nd of the sine and -p at the zeros
    (2n+1)d of the cosine, so neighbouring opposite motifs are d apart.
    """
    if not d > 0:
        raise ConfigError(f"utgb.d must be positive, got {d!r}")
    window = window or (-2 * d, 2 * d, -d, d)
    arg = an.affine(math.pi / (2 * d))
    h = HarmonicScalar.im(an.log(an.sin(arg)), pitch) + HarmonicScalar.im(an.log(an.cos(arg)), -pitch)
    n = np.arange(math.floor(window[0] / d), math.ceil(window[1] / d) + 1)
    lattice = [x * d for x in n if window[0] <= x * d <= window[1] and window[2] <= 0 <= window[3]]
    dom = _lattice_domain(lattice, d, window)
    return EnneperImmersion.graph(h, dom, name=f"utgb(p={pitch:g},d={d:g})")


@dataclass(frozen=True)
class ScherkGap:
    partial: np.ndarray
    closed: np.ndarray
    gap: np.ndarray


def scherk_row_check(p: TgbParams, N: int, z) -> ScherkGap:
    """Compare the closed TGB field with the truncated product

        sin(pi z/d) = (pi z/d) prod_{n=1..N} (1 - z^2 / (n d)^2),

    summing Im ln of each factor (each factor tends to 1, so the sum converges
    without per-term branch constants). ``gap`` is the distance modulo the
    layer period 2 pi (b / 2 pi lambda).
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    z = np.asarray(z, dtype=complex)
    s = p.scale
    lead = an.evaluate(an.log(an.affine(math.pi / p.d)), z)
    acc = np.imag(lead)
    if N:
        n = np.arange(1, N + 1, dtype=float)
        w = (z[..., None] / (n * p.d)) ** 2
        if np.any(np.abs(1 - w) < an.EPS_SING):
            raise ConfigError("z lies on the puncture lattice")
        acc = acc + np.sum(np.angle(1 - w), axis=-1)
    partial = s * acc
    closed = np.asarray(tgb_single(p, window=_window_for(z, p.d)).h(z))
    gap = periodic_distance(partial - closed, 2 * math.pi * abs(s))
    return ScherkGap(partial, closed, gap)


def _window_for(z, d):
    z = np.atleast_1d(z)
    pad = d
    return (float(z.real.min()) - pad, float(z.real.max()) + pad,
            float(z.imag.min()) - pad, float(z.imag.max()) + pad)


def layer_offsets(lam: float, m_values) -> np.ndarray:
    """Vertical offsets m / lambda of the phase-field level sets Phi = m."""
    return np.asarray(list(m_values), dtype=float) / lam


__all__ = [
    "TgbParams", "Pi2TgbParams", "ScherkGap", "equal_aspect_psi", "tgb_single", "tgb_phase",
    "tgb_pi2", "tgb_pi2_phase", "pi2_singularities", "utgb", "scherk_row_check", "layer_offsets",
]
