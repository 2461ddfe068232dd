"""Real harmonic functions built from analytic pieces.

A HarmonicScalar is a finite weighted sum of Re W, Im W, arg(z - c) and
ln|z - c| terms. Its Wirtinger derivative is exact:
d/dz Re W = W'/2, d/dz Im W = W'/(2i), d/dz arg(z-c) = 1/(2i(z-c)),
d/dz ln|z-c| = 1/(2(z-c)).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import analytic as an
from .errors import DomainError, SingularPoint

_KINDS = ("re", "im", "arg", "lnabs")


@lru_cache(maxsize=4096)
def _deriv(fn: an.AnalyticFn) -> an.AnalyticFn:
    return fn.deriv()


@dataclass(frozen=True)
class Term:
    kind: str
    weight: float
    fn: an.AnalyticFn | None = None
    center: complex = 0j

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown term kind {self.kind!r}")
        if (self.kind in ("re", "im")) != (self.fn is not None):
            raise ValueError("re/im terms need fn; arg/lnabs terms must not have one")

    @property
    def angle_like(self) -> bool:
        """True when the term is w * (an angle), so it jumps by 2*pi*w across
        its branch cut."""
        return self.kind == "arg" or (
            self.kind == "im" and isinstance(self.fn, an.Func) and self.fn.name == "log"
        )

    def raw_angle(self, z, errors="raise", eps=an.EPS_SING):
        if self.kind == "arg":
            return _principal_arg(np.asarray(z, dtype=complex) - self.center, z, errors, eps)
        w = an.evaluate(self.fn.arg, z, errors=errors, eps=eps)
        return _principal_arg(np.asarray(w), z, errors, eps)

    def value(self, z, errors="raise", eps=an.EPS_SING):
        if self.kind == "re":
            return self.weight * np.real(an.evaluate(self.fn, z, errors=errors, eps=eps))
        if self.kind == "im":
            return self.weight * np.imag(an.evaluate(self.fn, z, errors=errors, eps=eps))
        w = np.asarray(z, dtype=complex) - self.center
        if self.kind == "arg":
            return self.weight * _principal_arg(w, z, errors, eps)
        small = np.abs(w) < eps
        if np.any(small) and errors == "raise":
            raise SingularPoint(np.asarray(z)[small].ravel()[0], "log-modulus centre")
        with np.errstate(divide="ignore"):
            return self.weight * np.where(small, np.nan, np.log(np.abs(w)))

    def dz(self, z, errors="raise", eps=an.EPS_SING):
        if self.kind == "re":
            return self.weight * an.evaluate(_deriv(self.fn), z, errors=errors, eps=eps) / 2
        if self.kind == "im":
            return self.weight * an.evaluate(_deriv(self.fn), z, errors=errors, eps=eps) / 2j
        w = np.asarray(z, dtype=complex) - self.center
        small = np.abs(w) < eps
        if np.any(small) and errors == "raise":
            raise SingularPoint(np.asarray(z)[small].ravel()[0], "motif centre")
        with np.errstate(divide="ignore", invalid="ignore"):
            d = 1.0 / (2j * w) if self.kind == "arg" else 1.0 / (2 * w)
        return self.weight * np.where(small, np.nan + 0j, d)

    def scaled(self, c: float) -> "Term":
        return Term(self.kind, self.weight * c, self.fn, self.center)


def _principal_arg(w, z, errors, eps):
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < eps
    on_cut = (w.imag == 0) & (w.real < 0)
    if errors == "raise":
        if np.any(small):
            raise SingularPoint(np.asarray(z)[small].ravel()[0], "angular singularity")
        if np.any(on_cut):
            raise DomainError(np.asarray(z)[on_cut].ravel()[0], "arg branch cut")
    return np.where(small | on_cut, np.nan, np.angle(w))


def _any_angle(t: Term, z, errors, eps):
    # either side of a cut is fine when only differences modulo 2 pi matter
    w = np.asarray(z, dtype=complex) - t.center if t.kind == "arg" else \
        np.asarray(an.evaluate(t.fn.arg, z, errors=errors, eps=eps), dtype=complex)
    small = np.abs(w) < eps
    if np.any(small) and errors == "raise":
        raise SingularPoint(np.asarray(z)[small].ravel()[0], "angular singularity")
    return np.where(small, np.nan, np.angle(w))


@dataclass(frozen=True)
class HarmonicScalar:
    terms: tuple = ()

    # constructors
    @classmethod
    def re(cls, fn, weight: float = 1.0):
        return cls((Term("re", float(weight), an._lift(fn)),))

    @classmethod
    def im(cls, fn, weight: float = 1.0):
        return cls((Term("im", float(weight), an._lift(fn)),))

    @classmethod
    def arg(cls, center=0j, pitch: float = 1.0):
        return cls((Term("arg", float(pitch), None, complex(center)),))

    @classmethod
    def lnabs(cls, center=0j, weight: float = 1.0):
        return cls((Term("lnabs", float(weight), None, complex(center)),))

    @classmethod
    def constant(cls, c: float):
        return cls.re(an.const(c)) if c != 0 else cls()

    # algebra
    def __add__(self, other: "HarmonicScalar") -> "HarmonicScalar":
        if not isinstance(other, HarmonicScalar):
            return NotImplemented
        return HarmonicScalar(self.terms + other.terms)

    def scaled(self, c: float) -> "HarmonicScalar":
        if c == 0:
            return HarmonicScalar()
        return HarmonicScalar(tuple(t.scaled(float(c)) for t in self.terms))

    def __mul__(self, c):
        return self.scaled(c)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scaled(-1.0)

    def __sub__(self, other):
        return self + (-other)

    # evaluation
    def __call__(self, z, errors: str = "raise", eps: float = an.EPS_SING):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape)
        for t in self.terms:
            out = out + t.value(z, errors, eps)
        return out[()] if out.ndim == 0 else out

    def dz(self, z, errors: str = "raise", eps: float = an.EPS_SING):
        """Exact Wirtinger derivative d h / d z."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for t in self.terms:
            out = out + t.dz(z, errors, eps)
        return out[()] if out.ndim == 0 else out

    def increments(self, path, errors: str = "raise", eps: float = an.EPS_SING):
        """Changes of h between consecutive points of ``path`` with every
        angle-like term's principal-branch jump removed (steps must be short
        enough that each true angular change is below pi)."""
        path = np.asarray(path, dtype=complex)
        total = np.zeros(len(path) - 1)
        for t in self.terms:
            if t.angle_like:
                d = np.diff(t.raw_angle(path, errors, eps))
                d = (d + np.pi) % (2 * np.pi) - np.pi
                total += t.weight * d
            else:
                total += np.diff(t.value(path, errors, eps))
        return total

    def step(self, za, zb, errors: str = "raise", eps: float = an.EPS_SING):
        """Elementwise h(zb) - h(za) with angle-like jumps removed; the
        pointwise counterpart of ``increments``."""
        za = np.asarray(za, dtype=complex)
        zb = np.asarray(zb, dtype=complex)
        total = np.zeros(np.broadcast(za, zb).shape)
        for t in self.terms:
            if t.angle_like:
                d = _any_angle(t, zb, errors, eps) - _any_angle(t, za, errors, eps)
                total = total + t.weight * ((d + np.pi) % (2 * np.pi) - np.pi)
            else:
                total = total + (t.value(zb, errors, eps) - t.value(za, errors, eps))
        return total

    def unwrap_along(self, path, errors: str = "raise", eps: float = an.EPS_SING):
        """Values of h continued continuously along ``path`` from its start."""
        path = np.asarray(path, dtype=complex)
        start = self(path[0], errors, eps)
        return start + np.concatenate([[0.0], np.cumsum(self.increments(path, errors, eps))])

    def angular_charges(self) -> dict:
        """Pitch attached to each explicit arg(z - c) centre."""
        out: dict[complex, float] = {}
        for t in self.terms:
            if t.kind == "arg":
                out[t.center] = out.get(t.center, 0.0) + t.weight
        return out

    def singular_points(self) -> np.ndarray:
        pts = [t.center for t in self.terms if t.kind in ("arg", "lnabs")]
        for t in self.terms:
            if t.fn is not None:
                pts.extend(t.fn.singularities().points().tolist())
        return np.array(pts, dtype=complex)
