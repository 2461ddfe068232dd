"""Harmonic Enneper immersions X = (L + conj(P), h).

Holds the Hopf differential, the analytic dilatation nu = P'/L', the
immersion and harmonic-graph predicates, and superposition of immersions that
share a dilatation.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from . import analytic as an
from .domain import Domain
from .errors import (
    DegeneratePlanarPart,
    DilatationMismatch,
    EmptyDomainIntersection,
    ZeroPlanarSum,
)
from .harmonic import HarmonicScalar

log = logging.getLogger(__name__)

TAU_NU = 1e-9
TAU_IMM = 1e-10
TAU_GRAPH = 1e-12
EPS_PLANAR = 1e-12


@dataclass(frozen=True)
class EnneperImmersion:
    L: an.AnalyticFn
    P: an.AnalyticFn
    h: HarmonicScalar
    domain: Domain = field(default_factory=Domain.plane)
    name: str = ""
    verified: bool = True
    immersed_on_probes: bool | None = None

    @cached_property
    def dL(self) -> an.AnalyticFn:
        return self.L.deriv()

    @cached_property
    def dP(self) -> an.AnalyticFn:
        return self.P.deriv()

    @property
    def reciprocal(self) -> bool:
        """Planar part purely anti-holomorphic (L constant, P not): nu is
        infinite and the reciprocal L'/P' is used instead."""
        return self.L.is_constant() and not self.P.is_constant()

    @property
    def flat(self) -> bool:
        return self.L.is_constant() and self.P.is_constant()

    @classmethod
    def graph(cls, h: HarmonicScalar, domain: Domain | None = None, name: str = ""):
        """The harmonic graph (z, h)."""
        return cls(an.Z, an.ZERO, h, domain or Domain.plane(), name)

    @classmethod
    def from_real_parts(cls, A, B, C, domain: Domain | None = None, name: str = ""):
        """X = Re(A, B, C) for holomorphic A, B, C; then
        L = (A + iB)/2, P = (A - iB)/2 and h = Re C."""
        A, B, C = map(an._lift, (A, B, C))
        L = (A + 1j * B) * 0.5
        P = (A - 1j * B) * 0.5
        return cls(L, P, HarmonicScalar.re(C), domain or Domain.plane(), name)

    def planar(self, z, errors="raise"):
        return an.evaluate(self.L, z, errors) + np.conj(an.evaluate(self.P, z, errors))

    def __call__(self, z, errors="raise"):
        """Points of the surface, shape z.shape + (3,)."""
        f = self.planar(z, errors)
        return np.stack([np.real(f), np.imag(f), self.h(z, errors)], axis=-1)

    def coordinate(self, j: int):
        """Real coordinate function X_j as a callable (for stencil checks)."""
        if j == 2:
            return self.h
        part = np.real if j == 0 else np.imag
        return lambda z, errors="raise": part(self.planar(z, errors))

    def phi(self, z, errors="raise"):
        """Complex derivative vector (d X_1/dz, d X_2/dz, d X_3/dz)."""
        lz = an.evaluate(self.dL, z, errors)
        pz = an.evaluate(self.dP, z, errors)
        return np.stack([(lz + pz) / 2, (lz - pz) / 2j, self.h.dz(z, errors)], axis=-1)

    def map_domain(self, domain: Domain) -> "EnneperImmersion":
        return replace(self, domain=domain)

    def reflected(self, signs) -> "EnneperImmersion":
        """diag(signs) X in Enneper form (first two signs act on the planar
        part, the third on h)."""
        s1, s2, s3 = signs
        # s1 Re f + i s2 Im f expressed through L, P
        if (s1, s2) == (1, 1):
            L, P = self.L, self.P
        elif (s1, s2) == (-1, -1):
            L, P = -self.L, -self.P
        elif (s1, s2) == (1, -1):  # conj(f)
            L, P = self.P, self.L
        elif (s1, s2) == (-1, 1):  # -conj(f)
            L, P = -self.P, -self.L
        else:
            raise ValueError("signs must be +-1")
        return EnneperImmersion(L, P, self.h.scaled(s3), self.domain, self.name, self.verified)


def hopf_differential(X: EnneperImmersion, z, errors="raise"):
    """L'(z) P'(z) + (dh/dz)^2."""
    return (
        an.evaluate(X.dL, z, errors) * an.evaluate(X.dP, z, errors) + X.h.dz(z, errors) ** 2
    )


def dilatation(X: EnneperImmersion, z, eps: float = an.EPS_SING):
    """nu = P'/L'. Raises DegeneratePlanarPart where |L'| < eps."""
    lz = np.asarray(an.evaluate(X.dL, z))
    pz = np.asarray(an.evaluate(X.dP, z))
    if X.P.is_constant():
        return np.zeros(lz.shape, dtype=complex)[()]
    if np.any(np.abs(lz) < eps):
        raise DegeneratePlanarPart(
            f"|L'| < {eps:g} in {X.name or 'immersion'}; "
            + ("use reciprocal_dilatation" if X.reciprocal else "dilatation undefined")
        )
    out = pz / lz
    return out[()] if out.ndim == 0 else out


def reciprocal_dilatation(X: EnneperImmersion, z, eps: float = an.EPS_SING):
    """1/nu = L'/P', used for anti-holomorphic planar parts."""
    lz = np.asarray(an.evaluate(X.dL, z))
    pz = np.asarray(an.evaluate(X.dP, z))
    if np.any(np.abs(pz) < eps):
        raise DegeneratePlanarPart(f"|P'| < {eps:g}; reciprocal dilatation undefined")
    out = lz / pz
    return out[()] if out.ndim == 0 else out


def _enneper_margin(lz, pz, tau):
    a, b = np.abs(lz), np.abs(pz)
    return np.abs(a - b) > tau * np.maximum(a, b)


def _rank_margin(X, z, tau, errors):
    ph = X.phi(z, errors)
    norm2 = np.sum(np.abs(ph) ** 2, axis=-1)
    hopf = np.abs(np.sum(ph ** 2, axis=-1))
    return (norm2 - hopf) > tau * norm2


def is_immersion_at(X: EnneperImmersion, z, tau: float = TAU_IMM, criterion: str = "enneper") -> bool:
    """criterion="enneper": | |L'| - |P'| | > tau max(|L'|, |P'|), the
    sufficient condition of the representation. criterion="rank": the full
    differential has rank 2, i.e. sum |phi_j|^2 > |sum phi_j^2|."""
    return bool(np.all(immersion_map(X, np.atleast_1d(z), tau, criterion)))


def immersion_map(X: EnneperImmersion, grid, tau: float = TAU_IMM, criterion: str = "enneper"):
    """Per-sample immersion mask (raises SingularPoint on singular samples)."""
    grid = np.asarray(grid, dtype=complex)
    if criterion == "rank":
        return _rank_margin(X, grid, tau, "raise")
    if criterion != "enneper":
        raise ValueError("criterion must be 'enneper' or 'rank'")
    lz = np.asarray(an.evaluate(X.dL, grid))
    pz = np.asarray(an.evaluate(X.dP, grid))
    return _enneper_margin(lz, pz, tau)


def is_harmonic_graph(X: EnneperImmersion, grid, tau: float = TAU_GRAPH) -> bool:
    """|nu| < 1 - tau on every grid sample (Lewy: local univalence and
    orientation preservation)."""
    nu = np.asarray(dilatation(X, np.asarray(grid, dtype=complex)))
    return bool(np.all(np.abs(nu) < 1.0 - tau))


@dataclass(frozen=True)
class Part:
    X: EnneperImmersion
    a: float = 1.0
    b: float = 1.0


def _as_parts(parts):
    out = []
    for p in parts:
        if isinstance(p, Part):
            out.append(p)
        elif isinstance(p, EnneperImmersion):
            out.append(Part(p))
        else:
            out.append(Part(*p))
    if not out:
        raise ValueError("superpose needs at least one part")
    return out


def _combine(parts, domain, verified, name):
    L = an.add(*(an.mul(an.const(p.a), p.X.L) for p in parts))
    P = an.add(*(an.mul(an.const(p.a), p.X.P) for p in parts))
    h = HarmonicScalar()
    for p in parts:
        h = h + p.X.h.scaled(p.b)
    return EnneperImmersion(L, P, h, domain, name, verified)


def _probe_set(domain, probes, seed, window):
    if probes is not None:
        pts = np.asarray(probes, dtype=complex).ravel()
        return pts[domain.contains(pts)]
    return domain.probe_points(seed=seed, window=window)


def check_common_dilatation(parts, probes, tau_nu: float = TAU_NU):
    """Raise DilatationMismatch unless all non-flat planar parts share nu on
    ``probes``; returns the reference dilatation samples (None if reciprocal)."""
    active = [p.X for p in parts if not p.X.flat]
    if not active:
        return None
    recip = [X.reciprocal for X in active]
    if any(recip) and not all(recip):
        X = active[recip.index(False)]
        z0 = probes[0]
        raise DilatationMismatch(z0, complex(an.evaluate(X.dP, z0) / an.evaluate(X.dL, z0)), complex("inf"))
    if all(recip):
        return None
    lz = [np.asarray(an.evaluate(X.dL, probes, "mask")) for X in active]
    pz = [np.asarray(an.evaluate(X.dP, probes, "mask")) for X in active]
    ok = np.ones(probes.shape, dtype=bool)
    for a, b in zip(lz, pz):
        ok &= np.isfinite(a) & np.isfinite(b) & (np.abs(a) > an.EPS_SING)
    if not np.any(ok):
        raise DegeneratePlanarPart("no probe point where every L' is non-zero")
    nus = [b[ok] / a[ok] for a, b in zip(lz, pz)]
    ref = nus[0]
    for nu in nus[1:]:
        diff = np.abs(nu - ref)
        j = int(np.argmax(diff))
        if diff[j] > tau_nu:
            raise DilatationMismatch(probes[ok][j], complex(nu[j]), complex(ref[j]))
    return probes[ok], ref


def superpose(parts, tau_nu: float = TAU_NU, probes=None, seed: int = 0, window=None,
              name: str = "superposition") -> EnneperImmersion:
    """X = (sum a_i L_i + conj(sum a_i P_i), sum b_i h_i) for immersions that
    share a dilatation, checked numerically on a probe set (17x17 grid plus 50
    seeded points by default). Parts may be ``Part`` objects, bare immersions
    (a = b = 1) or ``(X, a, b)`` tuples."""
    parts = _as_parts(parts)
    domain = parts[0].X.domain
    for p in parts[1:]:
        domain = domain.intersect(p.X.domain)
    pts = _probe_set(domain, probes, seed, window)
    if pts.size == 0:
        raise EmptyDomainIntersection("the parts' domains have no common probe point")
    check_common_dilatation(parts, pts, tau_nu)
    X = _combine(parts, domain, True, name)
    f = np.asarray(X.planar(pts, "mask"))
    if not np.any(np.abs(f[np.isfinite(f)]) > EPS_PLANAR):
        raise ZeroPlanarSum("sum of a_i f_i vanishes at every probe point")
    lz = np.asarray(an.evaluate(X.dL, pts, "mask"))
    pz = np.asarray(an.evaluate(X.dP, pts, "mask"))
    fin = np.isfinite(lz) & np.isfinite(pz)
    immersed = bool(np.all(_enneper_margin(lz[fin], pz[fin], TAU_IMM)))
    if not immersed:
        log.warning("superposition %s fails |L'| != |P'| at some probe points", name)
    return replace(X, immersed_on_probes=immersed)


def unchecked_sum(parts, name: str = "unchecked sum") -> EnneperImmersion:
    """Superposition without the common-dilatation hypothesis. The result is
    marked ``verified=False``; callers must check the immersion property."""
    parts = _as_parts(parts)
    domain = parts[0].X.domain
    for p in parts[1:]:
        domain = domain.intersect(p.X.domain)
    return _combine(parts, domain, False, name)
