"""Complete elliptic integrals and Jacobi elliptic functions.

K(k) comes from the arithmetic-geometric mean. Real-argument sn/cn/dn use the
descending Landen (AGM) recursion; complex arguments are assembled from two
real evaluations (modulus k on Re u, complementary modulus on Im u) through the
addition theorem, after reducing u into the fundamental rectangle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import OutOfRange, SingularPoint

_EPS = np.finfo(float).eps


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two non-negative numbers."""
    if a < 0 or b < 0:
        raise OutOfRange("agm needs non-negative arguments")
    for _ in range(64):
        if abs(a - b) <= 2 * _EPS * max(a, b):
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def _check_k(k: float) -> float:
    k = float(k)
    if not (0.0 <= k < 1.0) or not math.isfinite(k):
        raise OutOfRange(f"elliptic modulus must satisfy 0 <= k < 1, got {k!r}")
    return k


def _complement(k: float) -> float:
    return math.sqrt((1.0 - k) * (1.0 + k))


def complete_elliptic_K(k: float) -> float:
    """K(k) = pi / (2 agm(1, sqrt(1 - k^2)))."""
    k = _check_k(k)
    return math.pi / (2.0 * agm(1.0, _complement(k)))


def complete_elliptic_Kprime(k: float) -> float:
    """K'(k) = K(sqrt(1 - k^2)), computed without forming the complement."""
    k = _check_k(k)
    if k == 0.0:
        raise OutOfRange("K'(0) is infinite")
    return math.pi / (2.0 * agm(1.0, k))


@dataclass(frozen=True)
class EllipticModulus:
    k: float

    def __post_init__(self):
        if not (0.0 < self.k < 1.0):
            raise OutOfRange(f"modulus k must lie in (0, 1), got {self.k!r}")

    @cached_property
    def K(self) -> float:
        return complete_elliptic_K(self.k)

    @cached_property
    def Kprime(self) -> float:
        return complete_elliptic_Kprime(self.k)

    @property
    def kprime(self) -> float:
        return _complement(self.k)


def _sncndn_real(x, k: float, kc: float):
    """sn, cn, dn for real x; ``kc`` is the complementary modulus, passed
    separately so that k close to 1 keeps full precision in kc."""
    x = np.asarray(x, dtype=float)
    if k == 0.0:
        return np.sin(x), np.cos(x), np.ones_like(x)
    if kc == 0.0:
        sech = 1.0 / np.cosh(x)
        return np.tanh(x), sech, sech
    a, b, c = [1.0], [kc], [k]
    while abs(c[-1]) > _EPS * a[-1] and len(a) < 40:
        a_n, b_n = a[-1], b[-1]
        a.append(0.5 * (a_n + b_n))
        b.append(math.sqrt(a_n * b_n))
        c.append(0.5 * (a_n - b_n))
    n = len(a) - 1
    if n == 0:  # k below rounding: sn = sin to working precision
        sn = np.sin(x)
        return sn, np.cos(x), np.sqrt((1.0 - k * sn) * (1.0 + k * sn))
    phi = (2.0 ** n) * a[n] * x
    phi_prev = phi
    for j in range(n, 0, -1):
        phi_prev = phi
        phi = 0.5 * (phi + np.arcsin(c[j] / a[j] * np.sin(phi)))
    sn, cn = np.sin(phi), np.cos(phi)
    with np.errstate(divide="ignore", invalid="ignore"):
        dn_ratio = cn / np.cos(phi_prev - phi)
    dn_sqrt = np.sqrt((1.0 - k * sn) * (1.0 + k * sn))
    dn = np.where(np.abs(cn) > 1e-3, dn_ratio, dn_sqrt)
    return sn, cn, dn


def jacobi_sncndn(u, k: float, errors: str = "raise", eps: float = 1e-8):
    """Return (sn, cn, dn) of u for modulus k.

    Complex u is reduced modulo 2K and 2iK' (tracking the sign flips of cn and
    dn) and then combined by the addition theorem. Points within ``eps`` of a
    pole raise SingularPoint, or become NaN when ``errors="mask"``.
    """
    k = _check_k(k)
    u_arr = np.asarray(u)
    scalar = u_arr.ndim == 0
    if not np.iscomplexobj(u_arr):
        if k == 0.0:
            out = (np.sin(u_arr), np.cos(u_arr), np.ones_like(u_arr, dtype=float))
        else:
            out = _sncndn_real(u_arr, k, _complement(k))
        return tuple(o[()] if scalar else o for o in out)

    u_arr = u_arr.astype(complex)
    if k == 0.0:
        out = (np.sin(u_arr), np.cos(u_arr), np.ones_like(u_arr))
        return tuple(o[()] if scalar else o for o in out)

    kc = _complement(k)
    K = math.pi / (2.0 * agm(1.0, kc))
    Kp = math.pi / (2.0 * agm(1.0, k))
    x, y = u_arr.real, u_arr.imag
    m1 = np.round(x / (2 * K))
    m2 = np.round(y / (2 * Kp))
    x = x - 2 * K * m1
    y = y - 2 * Kp * m2
    flip_x = np.where(np.mod(m1, 2) == 1, -1.0, 1.0)
    flip_y = np.where(np.mod(m2, 2) == 1, -1.0, 1.0)

    pole_dist = np.abs(x + 1j * (np.abs(y) - Kp))
    bad = pole_dist < eps
    if np.any(bad) and errors == "raise":
        raise SingularPoint(u_arr[bad].ravel()[0], "pole of sn")

    s, c, d = _sncndn_real(x, k, kc)
    s1, c1, d1 = _sncndn_real(y, kc, k)
    den = c1 * c1 + (k * k) * (s * s) * (s1 * s1)
    with np.errstate(divide="ignore", invalid="ignore"):
        sn = (s * d1 + 1j * c * d * s1 * c1) / den
        cn = (c * c1 - 1j * s * d * s1 * d1) / den
        dn = (d * c1 * d1 - 1j * (k * k) * s * c * s1) / den
    sn = sn * flip_x
    cn = cn * flip_x * flip_y
    dn = dn * flip_y
    if np.any(bad):
        sn, cn, dn = (np.where(bad, np.nan + 0j, v) for v in (sn, cn, dn))
    out = (sn, cn, dn)
    return tuple(o[()] if scalar else o for o in out)


def jacobi_sn(u, k: float, errors: str = "raise", eps: float = 1e-8):
    return jacobi_sncndn(u, k, errors, eps)[0]


def jacobi_cn(u, k: float, errors: str = "raise", eps: float = 1e-8):
    return jacobi_sncndn(u, k, errors, eps)[1]


def jacobi_dn(u, k: float, errors: str = "raise", eps: float = 1e-8):
    return jacobi_sncndn(u, k, errors, eps)[2]


def sn_lattice(k: float, xlim, ylim, which: str = "zeros"):
    """Zeros (2mK + 2inK') or poles (iK' + 2mK + 2inK') of sn(u, k) inside
    the u-box ``xlim`` x ``ylim``."""
    K, Kp = complete_elliptic_K(k), complete_elliptic_Kprime(k)
    shift = 0.0 if which == "zeros" else Kp
    m = np.arange(math.floor(xlim[0] / (2 * K)) - 1, math.ceil(xlim[1] / (2 * K)) + 2)
    n = np.arange(
        math.floor((ylim[0] - shift) / (2 * Kp)) - 1,
        math.ceil((ylim[1] - shift) / (2 * Kp)) + 2,
    )
    pts = (2 * K * m[:, None] + 1j * (shift + 2 * Kp * n[None, :])).ravel()
    keep = (
        (pts.real >= xlim[0]) & (pts.real <= xlim[1])
        & (pts.imag >= ylim[0]) & (pts.imag <= ylim[1])
    )
    return np.sort_complex(pts[keep])
