"""Closed-form holomorphic functions as immutable expression trees.

Every node evaluates on numpy arrays and reports its exact derivative as
another tree. The basis is constants, z, integer powers, exp, log (principal
branch, cut on (-inf, 0]), sin, cos, sinh, cosh and the Jacobi functions
sn/cn/dn; trees are closed under sums, products and composition.
``Primitive`` wraps a numerically integrated antiderivative so that Weierstrass
primitives without a closed form still live in the same algebra.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from numbers import Number
from typing import Callable

import numpy as np
from scipy import integrate

from . import elliptic
from .errors import DomainError, PathThroughSingularity, SingularPoint

EPS_SING = 1e-8

_UNARY: dict[str, Callable] = {
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
}


@dataclass(frozen=True)
class Singularities:
    """Poles, branch points and cuts that can be located in closed form.

    ``complete`` is False when some node has a non-affine argument (for example
    1/sin z), whose singular set is infinite or not computed; evaluation still
    detects those points dynamically.
    """

    poles: tuple = ()
    branch_points: tuple = ()
    cuts: tuple = ()  # (origin, unit direction) rays
    complete: bool = True

    def __or__(self, other: "Singularities") -> "Singularities":
        return Singularities(
            self.poles + other.poles,
            self.branch_points + other.branch_points,
            self.cuts + other.cuts,
            self.complete and other.complete,
        )

    def points(self) -> np.ndarray:
        return np.array(self.poles + self.branch_points, dtype=complex)


class _Ctx:
    __slots__ = ("errors", "eps", "bad")

    def __init__(self, errors: str, eps: float):
        if errors not in ("raise", "mask"):
            raise ValueError("errors must be 'raise' or 'mask'")
        self.errors = errors
        self.eps = eps
        self.bad = None

    def flag(self, mask, z, exc):
        if not np.any(mask):
            return
        if self.errors == "raise":
            raise exc(np.asarray(z)[mask].ravel()[0])
        self.bad = mask if self.bad is None else (self.bad | mask)


def _lift(x) -> "AnalyticFn":
    if isinstance(x, AnalyticFn):
        return x
    if isinstance(x, Number):
        return Const(complex(x))
    raise TypeError(f"cannot use {type(x).__name__} as an analytic function")


class AnalyticFn:
    """Base class; subclasses are frozen dataclasses, hence hashable."""

    def __call__(self, z, errors: str = "raise", eps: float = EPS_SING):
        return evaluate(self, z, errors=errors, eps=eps)

    def _ev(self, z, ctx: _Ctx):
        raise NotImplementedError

    def deriv(self) -> "AnalyticFn":
        raise NotImplementedError

    def compose(self, inner: "AnalyticFn") -> "AnalyticFn":
        """Return self(inner(z))."""
        raise NotImplementedError

    def singularities(self) -> Singularities:
        return Singularities()

    def is_constant(self) -> bool:
        return False

    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __sub__(self, other):
        return add(self, mul(Const(-1), _lift(other)))

    def __rsub__(self, other):
        return add(_lift(other), mul(Const(-1), self))

    def __mul__(self, other):
        return mul(self, _lift(other))

    def __rmul__(self, other):
        return mul(_lift(other), self)

    def __neg__(self):
        return mul(Const(-1), self)

    def __truediv__(self, other):
        return mul(self, power(_lift(other), -1))

    def __rtruediv__(self, other):
        return mul(_lift(other), power(self, -1))

    def __pow__(self, n):
        if isinstance(n, Const) and n.value.imag == 0 and float(n.value.real).is_integer():
            n = int(n.value.real)
        if not isinstance(n, (int, np.integer)):
            raise TypeError("only integer powers are in the function basis")
        return power(self, int(n))


@dataclass(frozen=True)
class Const(AnalyticFn):
    value: complex

    def _ev(self, z, ctx):
        return np.full(np.shape(z), self.value, dtype=complex)

    def deriv(self):
        return ZERO

    def compose(self, inner):
        return self

    def is_constant(self):
        return True

    def __str__(self):
        v = self.value
        if v.imag == 0:
            return repr(float(v.real))
        if v.real == 0:
            return f"({float(v.imag)!r}*i)"
        return f"({float(v.real)!r} + {float(v.imag)!r}*i)"


@dataclass(frozen=True)
class Var(AnalyticFn):
    def _ev(self, z, ctx):
        return np.asarray(z, dtype=complex)

    def deriv(self):
        return ONE

    def compose(self, inner):
        return inner

    def __str__(self):
        return "z"


@dataclass(frozen=True)
class Add(AnalyticFn):
    terms: tuple

    def _ev(self, z, ctx):
        out = self.terms[0]._ev(z, ctx)
        for t in self.terms[1:]:
            out = out + t._ev(z, ctx)
        return out

    def deriv(self):
        return add(*(t.deriv() for t in self.terms))

    def compose(self, inner):
        return add(*(t.compose(inner) for t in self.terms))

    def singularities(self):
        out = Singularities()
        for t in self.terms:
            out = out | t.singularities()
        return out

    def is_constant(self):
        return all(t.is_constant() for t in self.terms)

    def __str__(self):
        return "(" + " + ".join(str(t) for t in self.terms) + ")"


@dataclass(frozen=True)
class Mul(AnalyticFn):
    factors: tuple

    def _ev(self, z, ctx):
        out = self.factors[0]._ev(z, ctx)
        for f in self.factors[1:]:
            out = out * f._ev(z, ctx)
        return out

    def deriv(self):
        parts = []
        for i, f in enumerate(self.factors):
            rest = self.factors[:i] + self.factors[i + 1:]
            parts.append(mul(f.deriv(), *rest))
        return add(*parts)

    def compose(self, inner):
        return mul(*(f.compose(inner) for f in self.factors))

    def singularities(self):
        out = Singularities()
        for f in self.factors:
            out = out | f.singularities()
        return out

    def is_constant(self):
        return all(f.is_constant() for f in self.factors)

    def __str__(self):
        return "(" + "*".join(str(f) for f in self.factors) + ")"


@dataclass(frozen=True)
class Pow(AnalyticFn):
    base: AnalyticFn
    n: int

    def _ev(self, z, ctx):
        b = self.base._ev(z, ctx)
        if self.n < 0:
            small = np.abs(b) < ctx.eps
            ctx.flag(small, z, lambda p: SingularPoint(p, "pole"))
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(small, np.nan + 0j, b ** self.n)
        return b ** self.n

    def deriv(self):
        return mul(Const(self.n), power(self.base, self.n - 1), self.base.deriv())

    def compose(self, inner):
        return power(self.base.compose(inner), self.n)

    def singularities(self):
        inner = self.base.singularities()
        if self.n >= 0:
            return inner
        aff = as_affine(self.base)
        if aff is not None and aff[0] != 0:
            return inner | Singularities(poles=(-aff[1] / aff[0],))
        return inner | Singularities(complete=False)

    def is_constant(self):
        return self.base.is_constant()

    def __str__(self):
        if self.n < 0:
            return f"{_atom(self.base)}^({self.n})"
        return f"{_atom(self.base)}^{self.n}"


@dataclass(frozen=True)
class Func(AnalyticFn):
    name: str
    arg: AnalyticFn

    def __post_init__(self):
        if self.name not in _UNARY:
            raise ValueError(f"unknown function {self.name!r}")

    def _ev(self, z, ctx):
        g = self.arg._ev(z, ctx)
        if self.name == "log":
            small = np.abs(g) < ctx.eps
            ctx.flag(small, z, lambda p: SingularPoint(p, "log branch point"))
            on_cut = (g.imag == 0) & (g.real < 0)
            ctx.flag(on_cut, z, lambda p: DomainError(p, "log branch cut"))
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(small | on_cut, np.nan + 0j, np.log(g))
        return _UNARY[self.name](g)

    def deriv(self):
        g, dg = self.arg, self.arg.deriv()
        outer = {
            "exp": lambda: self,
            "log": lambda: power(g, -1),
            "sin": lambda: Func("cos", g),
            "cos": lambda: mul(Const(-1), Func("sin", g)),
            "sinh": lambda: Func("cosh", g),
            "cosh": lambda: Func("sinh", g),
        }[self.name]()
        return mul(outer, dg)

    def compose(self, inner):
        return Func(self.name, self.arg.compose(inner))

    def singularities(self):
        inner = self.arg.singularities()
        if self.name != "log":
            return inner
        aff = as_affine(self.arg)
        if aff is None or aff[0] == 0:
            return inner | Singularities(complete=aff is not None)
        alpha, beta = aff
        origin = -beta / alpha
        direction = -1 / alpha
        direction /= abs(direction)
        return inner | Singularities(branch_points=(origin,), cuts=((origin, direction),))

    def is_constant(self):
        return self.arg.is_constant()

    def __str__(self):
        return f"{self.name}({self.arg})"


@dataclass(frozen=True)
class Jacobi(AnalyticFn):
    name: str  # "sn" | "cn" | "dn"
    arg: AnalyticFn
    k: float

    def _ev(self, z, ctx):
        u = self.arg._ev(z, ctx)
        sn, cn, dn = elliptic.jacobi_sncndn(u, self.k, errors="mask", eps=ctx.eps)
        out = {"sn": sn, "cn": cn, "dn": dn}[self.name]
        ctx.flag(~np.isfinite(out) & np.isfinite(u), z, lambda p: SingularPoint(p, "pole of sn"))
        return np.asarray(out, dtype=complex)

    def deriv(self):
        g, dg = self.arg, self.arg.deriv()
        sn, cn, dn = (Jacobi(n, g, self.k) for n in ("sn", "cn", "dn"))
        outer = {
            "sn": lambda: mul(cn, dn),
            "cn": lambda: mul(Const(-1), sn, dn),
            "dn": lambda: mul(Const(-self.k * self.k), sn, cn),
        }[self.name]()
        return mul(outer, dg)

    def compose(self, inner):
        return Jacobi(self.name, self.arg.compose(inner), self.k)

    def singularities(self):
        return self.arg.singularities() | Singularities(complete=self.k == 0.0)

    def is_constant(self):
        return self.arg.is_constant()

    def __str__(self):
        return f"{self.name}({self.arg}; {self.k!r})"


@dataclass(frozen=True)
class Primitive(AnalyticFn):
    """Antiderivative of ``integrand`` vanishing at ``basepoint``, evaluated by
    adaptive Gauss-Kronrod quadrature along the polyline
    basepoint -> via[0] -> ... -> z."""

    integrand: AnalyticFn
    basepoint: complex = 0j
    via: tuple = field(default=())

    def _ev(self, z, ctx):
        zz = np.asarray(z, dtype=complex)
        out = np.empty(zz.shape, dtype=complex)
        bad = np.zeros(zz.shape, dtype=bool)
        for idx, zi in np.ndenumerate(zz):
            try:
                out[idx] = _path_integral(
                    self.integrand, (complex(self.basepoint),) + tuple(self.via) + (complex(zi),)
                )
            except PathThroughSingularity:
                if ctx.errors == "raise":
                    raise
                bad[idx] = True
                out[idx] = np.nan
        ctx.flag(bad, zz, lambda p: SingularPoint(p, "integration path singularity"))
        return out

    def deriv(self):
        return self.integrand

    def compose(self, inner):
        raise NotImplementedError("composition of a numeric primitive is not supported")

    def singularities(self):
        return self.integrand.singularities()

    def __str__(self):
        return f"integral({self.integrand}, {self.basepoint!r})"


ZERO = Const(0j)
ONE = Const(1 + 0j)
Z = Var()


def _atom(f: AnalyticFn) -> str:
    s = str(f)
    if isinstance(f, (Var, Func, Jacobi)) or s.startswith("("):
        return s
    return f"({s})"


# -- smart constructors ------------------------------------------------------

def add(*terms) -> AnalyticFn:
    flat, c = [], 0j
    for t in map(_lift, terms):
        parts = t.terms if isinstance(t, Add) else (t,)
        for p in parts:
            if isinstance(p, Const):
                c += p.value
            else:
                flat.append(p)
    if c != 0 or not flat:
        flat.append(Const(c))
    return flat[0] if len(flat) == 1 else Add(tuple(flat))


def mul(*factors) -> AnalyticFn:
    flat, c = [], 1 + 0j
    for f in map(_lift, factors):
        parts = f.factors if isinstance(f, Mul) else (f,)
        for p in parts:
            if isinstance(p, Const):
                c *= p.value
            else:
                flat.append(p)
    if c == 0:
        return ZERO
    if c != 1 or not flat:
        flat.insert(0, Const(c))
    return flat[0] if len(flat) == 1 else Mul(tuple(flat))


def power(base, n: int) -> AnalyticFn:
    base = _lift(base)
    if n == 0:
        return ONE
    if n == 1:
        return base
    if isinstance(base, Const):
        return Const(base.value ** n)
    if isinstance(base, Pow):
        return power(base.base, base.n * n)
    return Pow(base, n)


def const(c) -> Const:
    return Const(complex(c))


def _unary(name):
    def make(f=Z):
        return Func(name, _lift(f))

    make.__name__ = name
    return make


exp = _unary("exp")
log = _unary("log")
sin = _unary("sin")
cos = _unary("cos")
sinh = _unary("sinh")
cosh = _unary("cosh")


def sn(f=Z, k: float = 0.0) -> Jacobi:
    elliptic._check_k(k)
    return Jacobi("sn", _lift(f), float(k))


def cn(f=Z, k: float = 0.0) -> Jacobi:
    elliptic._check_k(k)
    return Jacobi("cn", _lift(f), float(k))


def dn(f=Z, k: float = 0.0) -> Jacobi:
    elliptic._check_k(k)
    return Jacobi("dn", _lift(f), float(k))


def affine(alpha, beta=0) -> AnalyticFn:
    return add(mul(Const(complex(alpha)), Z), Const(complex(beta)))


# -- public operations -------------------------------------------------------

def evaluate(f: AnalyticFn, z, errors: str = "raise", eps: float = EPS_SING):
    """Evaluate f at z (scalar or array).

    errors="raise" raises SingularPoint within ``eps`` of a pole or log branch
    point and DomainError exactly on a log cut; errors="mask" returns NaN there.
    """
    zz = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(zz)):
        raise ValueError("evaluation points must be finite")
    ctx = _Ctx(errors, eps)
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.asarray(f._ev(zz, ctx), dtype=complex)
    if ctx.bad is not None:
        out = np.where(ctx.bad, np.nan + 0j, out)
    return out[()] if out.ndim == 0 else out


def deriv(f: AnalyticFn) -> AnalyticFn:
    return f.deriv()


def as_affine(f: AnalyticFn):
    """(alpha, beta) with f(z) = alpha z + beta, or None."""
    if isinstance(f, Const):
        return 0j, f.value
    if isinstance(f, Var):
        return 1 + 0j, 0j
    if isinstance(f, Add):
        a, b = 0j, 0j
        for t in f.terms:
            r = as_affine(t)
            if r is None:
                return None
            a, b = a + r[0], b + r[1]
        return a, b
    if isinstance(f, Mul):
        consts = [x for x in f.factors if x.is_constant()]
        rest = [x for x in f.factors if not x.is_constant()]
        if len(rest) > 1:
            return None
        c = 1 + 0j
        for x in consts:
            c *= complex(evaluate(x, 0j))
        if not rest:
            return 0j, c
        r = as_affine(rest[0])
        return None if r is None else (c * r[0], c * r[1])
    if f.is_constant():
        return 0j, complex(evaluate(f, 0j))
    return None


def laurent(f: AnalyticFn):
    """Coefficients {n: c_n} when f is a finite Laurent polynomial in z."""
    if isinstance(f, Const):
        return {0: f.value} if f.value != 0 else {}
    if isinstance(f, Var):
        return {1: 1 + 0j}
    if isinstance(f, Add):
        out: dict[int, complex] = {}
        for t in f.terms:
            c = laurent(t)
            if c is None:
                return None
            for n, v in c.items():
                out[n] = out.get(n, 0j) + v
        return {n: v for n, v in out.items() if v != 0}
    if isinstance(f, Mul):
        out = {0: 1 + 0j}
        for fac in f.factors:
            c = laurent(fac)
            if c is None:
                return None
            nxt: dict[int, complex] = {}
            for n1, v1 in out.items():
                for n2, v2 in c.items():
                    nxt[n1 + n2] = nxt.get(n1 + n2, 0j) + v1 * v2
            out = nxt
        return {n: v for n, v in out.items() if v != 0}
    if isinstance(f, Pow):
        c = laurent(f.base)
        if c is None:
            return None
        if f.n >= 0:
            out = {0: 1 + 0j}
            for _ in range(f.n):
                nxt = {}
                for n1, v1 in out.items():
                    for n2, v2 in c.items():
                        nxt[n1 + n2] = nxt.get(n1 + n2, 0j) + v1 * v2
                out = nxt
            return {n: v for n, v in out.items() if v != 0}
        if len(c) == 1:
            (m, v), = c.items()
            return {m * f.n: v ** f.n}
    return None


def from_laurent(coeffs: dict) -> AnalyticFn:
    return add(*(mul(Const(v), power(Z, n)) for n, v in sorted(coeffs.items()) if v != 0))


def antiderivative(f: AnalyticFn):
    """Closed-form primitive for Laurent polynomials without a 1/z term,
    otherwise None. The constant of integration is zero."""
    c = laurent(f)
    if c is None or c.get(-1, 0) != 0:
        return None
    return from_laurent({n + 1: v / (n + 1) for n, v in c.items()})


@lru_cache(maxsize=65536)
def _path_integral(f: AnalyticFn, points: tuple) -> complex:
    total = 0j
    for a, b in zip(points[:-1], points[1:]):
        if a == b:
            continue
        span = b - a

        def integrand(t, a=a, span=span):
            return complex(evaluate(f, a + t * span)) * span

        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                val, _ = integrate.quad(
                    integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12, limit=200, complex_func=True
                )
        except (SingularPoint, DomainError, integrate.IntegrationWarning) as exc:
            raise PathThroughSingularity(f"segment {a!r} -> {b!r}: {exc}") from exc
        if not math.isfinite(abs(val)):
            raise PathThroughSingularity(f"segment {a!r} -> {b!r}: non-finite integral")
        total += val
    return total


def integrate_path(f: AnalyticFn, points) -> complex:
    """Integral of f along the polyline through ``points``."""
    return _path_integral(f, tuple(complex(p) for p in points))
