"""Minimal and maximal surfaces from Weierstrass data (F, G), split into two
harmonic immersions.

With Phi = int F, Psi = int F G^2 and chi = int F G,

    X1 = Re int (1, -i, G) F         -> L = Phi, P = 0,    h = Re chi
    X2 = Re int (1, -i, 1/G) F G^2   -> L = Psi, P = 0,    h = Re chi
    X_min = X1 + A X2,  A = diag(-1, 1, 1)   (planar part Phi - conj(Psi))
    X_max = X1 + B X2,  B = diag(1, -1, 1)   (planar part Phi + conj(Psi))

so X_min = Re int ((1 - G^2) F, -i (1 + G^2) F, 2 G F) and
X_max = Re int ((1 + G^2) F, -i (1 - G^2) F, 2 G F). X2 is stored without the
reflection; ``HarmonicPair.second()`` applies it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import analytic as an
from .domain import Domain
from .errors import (
    DegenerateGaussMap,
    DomainError,
    NonremovableSingularity,
    SingularPoint,
)
from .harmonic import HarmonicScalar
from .immersion import EnneperImmersion, unchecked_sum

SIGNS = {"A": (-1, 1, 1), "B": (1, -1, 1)}
GAUSS_TOL = 1e-8
BLOWUP = 1e12


@dataclass(frozen=True)
class WeierstrassData:
    F: an.AnalyticFn
    G: an.AnalyticFn
    basepoint: complex = 0j
    region: Domain = field(default_factory=Domain.plane)
    name: str = "custom"
    # optional closed primitives keyed "F", "FG2", "FG"
    primitives: dict | None = field(default=None, compare=False, hash=False)
    # optional independent closed form of X_min, z -> (..., 3)
    closed_minimal: object = field(default=None, compare=False, hash=False)
    via: tuple = ()
    window: tuple = (-1.0, 1.0, -1.0, 1.0)

    @cached_property
    def integrands(self) -> dict:
        F, G = an._lift(self.F), an._lift(self.G)
        return {"F": F, "FG2": an.mul(F, an.power(G, 2)), "FG": an.mul(F, G)}

    def primitive(self, key: str, method: str = "auto") -> an.AnalyticFn:
        """Antiderivative of the integrand ``key``.

        method="closed" needs a catalog primitive or a Laurent-polynomial
        integrand; "quad" always integrates numerically from the basepoint
        (shifted by the closed primitive's basepoint value when one exists, so
        both methods share a constant); "auto" prefers closed forms.
        """
        f = self.integrands[key]
        closed = None
        if self.primitives and key in self.primitives:
            closed = an._lift(self.primitives[key])
        elif (anti := an.antiderivative(f)) is not None:
            closed = anti
        if method in ("auto", "closed") and closed is not None:
            return closed
        if method == "closed":
            raise ValueError(f"no closed primitive for {key} of {self.name}")
        offset = complex(an.evaluate(closed, self.basepoint)) if closed is not None else 0j
        prim = an.Primitive(f, complex(self.basepoint), tuple(complex(v) for v in self.via))
        return an.add(prim, an.const(offset)) if offset else prim


def _enneper():
    def closed(z):
        z = np.asarray(z, dtype=complex)
        return np.stack([np.real(z - z ** 3 / 3), np.real(-1j * (z + z ** 3 / 3)), np.real(z ** 2)], axis=-1)

    return WeierstrassData(an.ONE, an.Z, 0j, Domain.plane(), "enneper", None, closed,
                           window=(-1.0, 1.0, -1.0, 1.0))


def _catenoid():
    ez, emz = an.exp(an.Z), an.exp(-an.Z)
    prims = {"F": -0.5 * emz, "FG2": 0.5 * ez, "FG": 0.5 * an.Z}

    def closed(z):
        z = np.asarray(z, dtype=complex)
        return np.stack([np.real(-np.cosh(z)), np.real(-1j * np.sinh(z)), np.real(z)], axis=-1)

    strip = Domain.rectangle(-1.5, 1.5, -3.0, 3.0)
    return WeierstrassData(0.5 * emz, ez, 0j, strip, "catenoid", prims, closed,
                           window=(-1.5, 1.5, -3.0, 3.0))


def _helicoid():
    ez, emz = an.exp(an.Z), an.exp(-an.Z)
    prims = {"F": -0.5j * emz, "FG2": 0.5j * ez, "FG": 0.5j * an.Z}

    def closed(z):
        z = np.asarray(z, dtype=complex)
        x, y = z.real, z.imag
        return np.stack([np.sinh(x) * np.sin(y), np.sinh(x) * np.cos(y), -y], axis=-1)

    strip = Domain.rectangle(-1.5, 1.5, -3.0, 3.0)
    return WeierstrassData(0.5j * emz, ez, 0j, strip, "helicoid", prims, closed,
                           window=(-1.5, 1.5, -3.0, 3.0))


CATALOG = {"enneper": _enneper(), "catenoid": _catenoid(), "helicoid": _helicoid()}


def from_expressions(F: str, G: str, basepoint=0j, window=(-1.0, 1.0, -1.0, 1.0)) -> WeierstrassData:
    from .parse import parse_expression

    dom = Domain.rectangle(*window)
    return WeierstrassData(parse_expression(F), parse_expression(G), complex(basepoint), dom,
                           f"F={F}; G={G}", window=tuple(window))


def _primitives(w: WeierstrassData, method: str):
    return w.primitive("F", method), w.primitive("FG2", method), w.primitive("FG", method)


def weierstrass_minimal(w: WeierstrassData, z, method: str = "auto"):
    """Re int ((1 - G^2) F, -i (1 + G^2) F, 2 G F) dz, shape z.shape + (3,)."""
    Phi, Psi, chi = (an.evaluate(p, z) for p in _primitives(w, method))
    return np.stack([np.real(Phi - Psi), np.imag(Phi + Psi), 2 * np.real(chi)], axis=-1)


def weierstrass_maximal(w: WeierstrassData, z, method: str = "auto"):
    """Re int ((1 + G^2) F, -i (1 - G^2) F, 2 G F) dz."""
    Phi, Psi, chi = (an.evaluate(p, z) for p in _primitives(w, method))
    return np.stack([np.real(Phi + Psi), np.imag(Phi - Psi), 2 * np.real(chi)], axis=-1)


@dataclass(frozen=True)
class HarmonicPair:
    X1: EnneperImmersion
    X2: EnneperImmersion
    sign_matrix: str = "A"

    def second(self) -> EnneperImmersion:
        """The reflected component (A X2 or B X2)."""
        return self.X2.reflected(SIGNS[self.sign_matrix])

    def recomposed(self) -> EnneperImmersion:
        kind = "minimal" if self.sign_matrix == "A" else "maximal"
        X = unchecked_sum([self.X1, self.second()], name=f"{self.X1.name} {kind}")
        return X

    def evaluate(self, z):
        return {"X1": self.X1(z), "X2": self.X2(z), "X": self.recomposed()(z)}


def _probes(w: WeierstrassData):
    return w.region.probe_points(window=w.window)


def _check_removable(w: WeierstrassData):
    pts = _probes(w)
    for key in ("F", "FG2", "FG"):
        try:
            v = np.asarray(an.evaluate(w.integrands[key], pts))
        except (SingularPoint, DomainError) as exc:
            raise NonremovableSingularity(f"{key} is singular at a probe of {w.name}: {exc}") from exc
        if not np.all(np.isfinite(v)) or np.any(np.abs(v) > BLOWUP):
            raise NonremovableSingularity(f"{key} blows up at a probe of {w.name}")


def _components(w: WeierstrassData, method: str):
    Phi, Psi, chi = _primitives(w, method)
    h = HarmonicScalar.re(chi)
    X1 = EnneperImmersion(Phi, an.ZERO, h, w.region, f"{w.name} X1")
    X2 = EnneperImmersion(Psi, an.ZERO, h, w.region, f"{w.name} X2")
    return X1, X2


def decompose_minimal(w: WeierstrassData, method: str = "auto") -> HarmonicPair:
    _check_removable(w)
    return HarmonicPair(*_components(w, method), "A")


def decompose_maximal(w: WeierstrassData, method: str = "auto") -> HarmonicPair:
    _check_removable(w)
    pts = _probes(w)
    g = np.abs(np.asarray(an.evaluate(w.G, pts)))
    bad = np.abs(g - 1) < GAUSS_TOL
    if np.any(bad):
        raise DegenerateGaussMap(f"|G| = 1 at probe {complex(pts[bad][0])!r} of {w.name}")
    return HarmonicPair(*_components(w, method), "B")


def conformality_residual(X: EnneperImmersion, z, signature=(1, 1, 1)):
    """max |sum_j s_j phi_j^2| with phi = dX/dz from the exact derivatives."""
    ph = X.phi(np.asarray(z, dtype=complex))
    s = np.asarray(signature, dtype=float)
    return float(np.max(np.abs(np.sum(s * ph ** 2, axis=-1))))


def conformality_residual_fd(X: EnneperImmersion, z, signature=(1, 1, 1), delta: float = 1e-5):
    """Same quantity from central differences of the coordinate functions."""
    from .verify import wirtinger_fd

    z = np.asarray(z, dtype=complex)
    ph = np.stack([wirtinger_fd(X.coordinate(j), z, delta) for j in range(3)], axis=-1)
    s = np.asarray(signature, dtype=float)
    return float(np.max(np.abs(np.sum(s * ph ** 2, axis=-1))))


EUCLIDEAN = (1, 1, 1)
LORENTZIAN = (1, 1, -1)

__all__ = [
    "WeierstrassData", "HarmonicPair", "CATALOG", "from_expressions", "weierstrass_minimal",
    "weierstrass_maximal", "decompose_minimal", "decompose_maximal", "conformality_residual",
    "conformality_residual_fd", "EUCLIDEAN", "LORENTZIAN", "SIGNS",
]
