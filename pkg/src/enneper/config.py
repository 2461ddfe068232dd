"""JSON run configuration and field construction for the CLI.

Exactly one field source is allowed: ``motifs``, ``tgb``, ``tgb_pi2`` or
``utgb``. Every validation failure raises ConfigError naming the offending
key, e.g. ``tgb.d must be positive``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .domain import Domain
from .elliptic import EllipticModulus
from .errors import ConfigError, IoError
from .immersion import EnneperImmersion
from .motifs import Motif, MotifConfiguration, default_exclusion, motif_field
from . import tgb as tg

SOURCES = ("motifs", "tgb", "tgb_pi2", "utgb")
KNOWN = set(SOURCES) | {"domain", "grid", "output", "multipole", "seed", "test_hook", "scherk", "name"}


@dataclass(frozen=True)
class Charge:
    point: complex
    pitch: float


@dataclass(frozen=True)
class Field:
    """A built field plus the singularities it declares, for audits."""

    kind: str
    X: EnneperImmersion
    window: tuple
    charges: tuple  # Charge
    neutral_loops: tuple = ()  # (center, radius) circles with zero net pitch
    motif_cfg: MotifConfiguration | None = None
    params: object = None


@dataclass(frozen=True)
class Config:
    raw: dict
    source: str
    grid: tuple = (41, 41)
    seed: int = 0
    output: dict = field(default_factory=dict)
    multipole: dict = field(default_factory=dict)
    test_hook: dict = field(default_factory=dict)
    scherk: dict = field(default_factory=dict)
    name: str = ""


def _num(sec: dict, key: str, where: str, default=None):
    if key not in sec:
        if default is None:
            raise ConfigError(f"{where}.{key} is required")
        return default
    v = sec[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{where}.{key} must be a finite number, got {v!r}")
    return float(v)


def _point(v, where: str) -> complex:
    if (not isinstance(v, (list, tuple)) or len(v) != 2
            or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v)):
        raise ConfigError(f"{where} must be a pair [x, y], got {v!r}")
    return complex(float(v[0]), float(v[1]))


def parse_config(doc: dict) -> Config:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(doc) - KNOWN)
    if unknown:
        raise ConfigError(f"unknown config section(s): {', '.join(unknown)}")
    present = [s for s in SOURCES if s in doc]
    if len(present) != 1:
        raise ConfigError(f"exactly one field source ({', '.join(SOURCES)}) is required, found {present or 'none'}")
    grid = doc.get("grid", {})
    nx = grid.get("nx", 41)
    ny = grid.get("ny", 41)
    for k, v in (("nx", nx), ("ny", ny)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 2:
            raise ConfigError(f"grid.{k} must be an integer >= 2, got {v!r}")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    cfg = Config(doc, present[0], (nx, ny), seed, dict(doc.get("output", {})), dict(doc.get("multipole", {})),
                 dict(doc.get("test_hook", {})), dict(doc.get("scherk", {})), str(doc.get("name", present[0])))
    build_field(cfg)  # validates the field section eagerly
    return cfg


def load_config(path) -> Config:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(doc)


def _domain(cfg: Config, default_window):
    """(Domain, sampling window, exclusion radius or None)."""
    sec = cfg.raw.get("domain")
    if sec is None:
        return None, tuple(default_window), None
    kind = sec.get("kind", "rectangle")
    exclusion = sec.get("exclusion")
    if exclusion is not None:
        exclusion = _num(sec, "exclusion", "domain")
        if exclusion <= 0:
            raise ConfigError("domain.exclusion must be positive")
    b = sec.get("bounds")
    if kind == "plane":
        return Domain.plane(), tuple(b) if b else tuple(default_window), exclusion
    if not isinstance(b, (list, tuple)) or len(b) != 4 or not all(isinstance(t, (int, float)) for t in b):
        raise ConfigError(f"domain.bounds must be four numbers, got {b!r}")
    b = [float(t) for t in b]
    if kind == "rectangle":
        if not (b[0] < b[1] and b[2] < b[3]):
            raise ConfigError("domain.bounds must satisfy xmin < xmax and ymin < ymax")
        return Domain.rectangle(*b), tuple(b), exclusion
    if kind == "annulus":
        cx, cy, r_in, r_out = b
        if not (0 <= r_in < r_out):
            raise ConfigError("domain.bounds must satisfy 0 <= r_in < r_out for an annulus")
        dom = Domain.annulus(complex(cx, cy), r_in, r_out)
        return dom, dom.bbox(), exclusion
    raise ConfigError(f"domain.kind must be rectangle, annulus or plane, got {kind!r}")


def _motifs(cfg: Config) -> Field:
    items = cfg.raw["motifs"]
    if not isinstance(items, list) or not items:
        raise ConfigError("motifs must be a non-empty list")
    ms = []
    for j, it in enumerate(items):
        where = f"motifs[{j}]"
        if not isinstance(it, dict):
            raise ConfigError(f"{where} must be an object")
        pitch = _num(it, "pitch", where)
        if pitch == 0:
            raise ConfigError(f"{where}.pitch must be non-zero")
        ms.append(Motif(pitch, _point(it.get("center"), f"{where}.center")))
    centers = [m.center for m in ms]
    if len(set(centers)) != len(centers):
        raise ConfigError("motifs centres must be distinct")
    xs = [c.real for c in centers]
    ys = [c.imag for c in centers]
    spread = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    default_window = (min(xs) - spread, max(xs) + spread, min(ys) - spread, max(ys) + spread)
    base, window, exclusion = _domain(cfg, default_window)
    mc = MotifConfiguration.build(ms, base, exclusion)
    charges = tuple(Charge(m.center, m.pitch) for m in ms)
    loops = ()
    if abs(sum(m.pitch for m in ms)) < 1e-12:
        c = complex(np.mean(centers))
        r = max(abs(z - c) for z in centers)
        loops = ((c, 2 * r + default_exclusion(centers)),)
    X = motif_field(mc)
    return Field("motifs", X, window, charges, loops, mc)


def _tgb(cfg: Config) -> Field:
    sec = cfg.raw["tgb"]
    lam = _num(sec, "lambda", "tgb")
    if lam == 0:
        raise ConfigError("tgb.lambda must be non-zero")
    d = _num(sec, "d", "tgb")
    if d <= 0:
        raise ConfigError(f"tgb.d must be positive, got {d:g}")
    p = tg.TgbParams(_num(sec, "b", "tgb"), lam, d)
    default = (-2 * d, 2 * d, -d, d)
    base, window, _ = _domain(cfg, default)
    if base is not None and base.kind != "rectangle":
        raise ConfigError("tgb needs a rectangle domain")
    X = tg.tgb_single(p, window)
    charges = tuple(Charge(q.point, p.scale) for q in X.domain.punctures)
    return Field("tgb", X, window, charges, (), None, p)


def _tgb_pi2(cfg: Config) -> Field:
    sec = cfg.raw["tgb_pi2"]
    lam = _num(sec, "lambda", "tgb_pi2")
    if lam == 0:
        raise ConfigError("tgb_pi2.lambda must be non-zero")
    k = _num(sec, "k", "tgb_pi2")
    if not 0 < k < 1:
        raise ConfigError(f"tgb_pi2.k must lie in (0, 1), got {k:g}")
    theta = _num(sec, "theta", "tgb_pi2")
    psi = _num(sec, "psi", "tgb_pi2", default=theta)
    if theta <= 0 or psi <= 0:
        raise ConfigError("tgb_pi2.theta and tgb_pi2.psi must be positive")
    p = tg.Pi2TgbParams(_num(sec, "b", "tgb_pi2"), lam, theta, psi, EllipticModulus(k))
    if not p.isotropic:
        raise ConfigError("tgb_pi2.psi must equal tgb_pi2.theta for a harmonic graph")
    K, Kp = p.modulus.K, p.modulus.Kprime
    default = (-2 * K / theta, 2 * K / theta, -1.5 * Kp / theta, 1.5 * Kp / theta)
    base, window, _ = _domain(cfg, default)
    if base is not None and base.kind != "rectangle":
        raise ConfigError("tgb_pi2 needs a rectangle domain")
    X = tg.tgb_pi2(p, window)
    zeros, poles = tg.pi2_singularities(p, window)
    charges = tuple(Charge(complex(z), p.scale) for z in zeros) + tuple(Charge(complex(z), -p.scale) for z in poles)
    # zero at 0 paired with the pole at i K'/theta
    cell = ((0.5j * Kp / theta, 0.75 * Kp / theta),)
    return Field("tgb_pi2", X, window, charges, cell, None, p)


def _utgb(cfg: Config) -> Field:
    sec = cfg.raw["utgb"]
    d = _num(sec, "d", "utgb")
    if d <= 0:
        raise ConfigError(f"utgb.d must be positive, got {d:g}")
    pitch = _num(sec, "pitch", "utgb")
    if pitch == 0:
        raise ConfigError("utgb.pitch must be non-zero")
    default = (-2 * d, 2 * d, -d, d)
    base, window, _ = _domain(cfg, default)
    if base is not None and base.kind != "rectangle":
        raise ConfigError("utgb needs a rectangle domain")
    X = tg.utgb(pitch, d, window)
    charges = tuple(Charge(q.point, pitch if round(q.point.real / d) % 2 == 0 else -pitch)
                    for q in X.domain.punctures)
    cell = ((0.5 * d + 0j, 0.75 * d),)
    return Field("utgb", X, window, charges, cell, None, (pitch, d))


_BUILDERS = {"motifs": _motifs, "tgb": _tgb, "tgb_pi2": _tgb_pi2, "utgb": _utgb}


def build_field(cfg: Config) -> Field:
    try:
        return _BUILDERS[cfg.source](cfg)
    except (TypeError, AttributeError, KeyError) as exc:
        raise ConfigError(f"malformed {cfg.source} section: {exc}") from exc
