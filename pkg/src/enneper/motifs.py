"""Elementary harmonic graphs: helicoids, logarithmic membranes and finite
arrangements of helical motifs h(z) = sum_k a_k arg(z - z_k)."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .domain import Cut, Domain, Puncture
from .errors import ConfigError, ZeroPitch
from .harmonic import HarmonicScalar
from .immersion import EnneperImmersion


@dataclass(frozen=True)
class Motif:
    pitch: float
    center: complex

    def __post_init__(self):
        if not math.isfinite(self.pitch):
            raise ConfigError(f"motif pitch must be finite, got {self.pitch!r}")


def default_exclusion(centers) -> float:
    centers = [complex(c) for c in centers]
    if len(centers) < 2:
        return 1e-3
    return 1e-3 * min(abs(a - b) for a, b in itertools.combinations(centers, 2))


@dataclass(frozen=True)
class MotifConfiguration:
    motifs: tuple
    domain: Domain

    def __post_init__(self):
        centers = [m.center for m in self.motifs]
        if not centers:
            raise ConfigError("a motif configuration needs at least one motif")
        for a, b in itertools.combinations(centers, 2):
            if a == b:
                raise ConfigError(f"motif centres must be distinct, {a!r} repeats")
        holes = {p.point for p in self.domain.punctures}
        missing = [c for c in centers if c not in holes]
        if missing:
            raise ConfigError(f"motif centres {missing!r} are not punctures of the domain")

    @classmethod
    def build(cls, motifs, domain: Domain | None = None, exclusion: float | None = None):
        ms = tuple(m if isinstance(m, Motif) else Motif(float(m[0]), complex(m[1])) for m in motifs)
        centers = [m.center for m in ms]
        radius = default_exclusion(centers) if exclusion is None else exclusion
        base = domain or Domain.plane()
        base = Domain(
            base.regions,
            base.punctures + tuple(Puncture(c, radius) for c in centers),
            base.cuts + tuple(Cut(c, math.pi) for c in centers),
            base.theta0,
        )
        return cls(ms, base)

    @property
    def centers(self) -> np.ndarray:
        return np.array([m.center for m in self.motifs], dtype=complex)

    @property
    def pitches(self) -> np.ndarray:
        return np.array([m.pitch for m in self.motifs], dtype=float)

    @property
    def total_pitch(self) -> float:
        return float(np.sum(self.pitches))

    def merged(self, other: "MotifConfiguration") -> "MotifConfiguration":
        return MotifConfiguration.build(self.motifs + other.motifs)


def helicoid(a: float, z0=0j, domain: Domain | None = None) -> EnneperImmersion:
    """X(z) = (z, a arg(z - z0)): helicoid of pitch a centred at z0."""
    if a == 0:
        raise ZeroPitch("helicoid pitch must be non-zero")
    z0 = complex(z0)
    cfg = MotifConfiguration.build([(a, z0)], domain)
    return EnneperImmersion.graph(HarmonicScalar.arg(z0, a), cfg.domain, name=f"helicoid(a={a:g})")


def log_membrane(a: float, b: float, domain: Domain | None = None) -> EnneperImmersion:
    """X(z) = (z, a + b ln|z|)."""
    h = HarmonicScalar.constant(a) + HarmonicScalar.lnabs(0j, b)
    dom = (domain or Domain.plane()).with_punctures([0j], 1e-3)
    return EnneperImmersion.graph(h, dom, name=f"log_membrane(a={a:g}, b={b:g})")


def motif_field(cfg: MotifConfiguration) -> EnneperImmersion:
    """X(z) = (z, sum_k a_k arg(z - z_k))."""
    h = HarmonicScalar()
    for m in cfg.motifs:
        h = h + HarmonicScalar.arg(m.center, m.pitch)
    return EnneperImmersion.graph(h, cfg.domain, name=f"motifs(n={len(cfg.motifs)})")


def dipole(a: float, R: float, domain: Domain | None = None) -> MotifConfiguration:
    """Pitches +a at R/2 and -a at -R/2."""
    return MotifConfiguration.build([(a, R / 2), (-a, -R / 2)], domain)


def symmetric_pair(a: float, R: float, domain: Domain | None = None) -> MotifConfiguration:
    """Two motifs of equal pitch a at +-R/2."""
    return MotifConfiguration.build([(a, R / 2), (a, -R / 2)], domain)


def helicoid_graphs(cfg: MotifConfiguration):
    """The individual helicoids of a configuration, each on the shared domain."""
    return [helicoid(m.pitch, m.center).map_domain(cfg.domain) for m in cfg.motifs]


def unwrapped_height(X: EnneperImmersion, path):
    """h continued along ``path`` (single sheet, no principal-branch jumps)."""
    return X.h.unwrap_along(np.asarray(path, dtype=complex))

