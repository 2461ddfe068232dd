"""Parameter domains: rectangles, annuli and the plane, with punctures and
declared branch cuts. A Domain is the intersection of its regions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_WINDOW = (-1.0, 1.0, -1.0, 1.0)


@dataclass(frozen=True)
class Rect:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def contains(self, z, closed=False):
        x, y = z.real, z.imag
        if closed:
            return (x >= self.xmin) & (x <= self.xmax) & (y >= self.ymin) & (y <= self.ymax)
        return (x > self.xmin) & (x < self.xmax) & (y > self.ymin) & (y < self.ymax)

    def bbox(self):
        return (self.xmin, self.xmax, self.ymin, self.ymax)


@dataclass(frozen=True)
class Annulus:
    center: complex
    r_in: float
    r_out: float

    def contains(self, z, closed=False):
        r = np.abs(z - self.center)
        if closed:
            tol = 1e-12 * self.r_out  # grid radii carry rounding
            return (r >= self.r_in - tol) & (r <= self.r_out + tol)
        return (r > self.r_in) & (r < self.r_out)

    def bbox(self):
        c = self.center
        return (c.real - self.r_out, c.real + self.r_out, c.imag - self.r_out, c.imag + self.r_out)


@dataclass(frozen=True)
class Plane:
    def contains(self, z, closed=False):
        return np.ones(np.shape(z), dtype=bool)

    def bbox(self):
        return None


@dataclass(frozen=True)
class Puncture:
    point: complex
    radius: float


@dataclass(frozen=True)
class Cut:
    """Ray origin + t * exp(i angle), t >= 0."""

    origin: complex
    angle: float

    def crosses(self, a, b):
        """Whether segments a->b (arrays) intersect the ray."""
        d = complex(math.cos(self.angle), math.sin(self.angle))
        # rotate so the ray is the positive real axis from 0
        pa = (np.asarray(a) - self.origin) / d
        pb = (np.asarray(b) - self.origin) / d
        straddle = (pa.imag > 0) != (pb.imag > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = pa.imag / (pa.imag - pb.imag)
            xcross = pa.real + t * (pb.real - pa.real)
        return straddle & (xcross >= 0)


@dataclass(frozen=True)
class Domain:
    regions: tuple = (Plane(),)
    punctures: tuple = ()
    cuts: tuple = ()
    theta0: float = field(default=-math.pi / 2)  # annulus sampling seam

    @classmethod
    def plane(cls, punctures=(), cuts=()):
        return cls((Plane(),), tuple(punctures), tuple(cuts))

    @classmethod
    def rectangle(cls, xmin, xmax, ymin, ymax, punctures=(), cuts=()):
        if not (xmin < xmax and ymin < ymax):
            raise ValueError("rectangle bounds must satisfy min < max")
        return cls((Rect(float(xmin), float(xmax), float(ymin), float(ymax)),), tuple(punctures), tuple(cuts))

    @classmethod
    def annulus(cls, center, r_in, r_out, punctures=(), cuts=()):
        if not (0 <= r_in < r_out):
            raise ValueError("annulus radii must satisfy 0 <= r_in < r_out")
        return cls((Annulus(complex(center), float(r_in), float(r_out)),), tuple(punctures), tuple(cuts))

    @classmethod
    def disk(cls, center, radius, punctures=(), cuts=()):
        return cls.annulus(center, 0.0, radius, punctures, cuts)

    @property
    def kind(self) -> str:
        real = [r for r in self.regions if not isinstance(r, Plane)]
        if not real:
            return "plane"
        if len(real) == 1:
            return "rectangle" if isinstance(real[0], Rect) else "annulus"
        return "intersection"

    def with_punctures(self, points, radius):
        extra = tuple(Puncture(complex(p), float(radius)) for p in points)
        return Domain(self.regions, self.punctures + extra, self.cuts, self.theta0)

    def with_cuts(self, cuts):
        return Domain(self.regions, self.punctures, self.cuts + tuple(cuts), self.theta0)

    def intersect(self, other: "Domain") -> "Domain":
        regions = tuple(r for r in self.regions + other.regions if not isinstance(r, Plane)) or (Plane(),)
        return Domain(regions, self.punctures + other.punctures, self.cuts + other.cuts, self.theta0)

    def contains(self, z, closed=False):
        z = np.asarray(z, dtype=complex)
        ok = np.ones(z.shape, dtype=bool)
        for r in self.regions:
            ok &= r.contains(z, closed)
        for p in self.punctures:
            ok &= np.abs(z - p.point) > p.radius
        return ok

    def bbox(self, window=None):
        """Bounding box of the intersection; ``window`` for unbounded domains."""
        boxes = [r.bbox() for r in self.regions if r.bbox() is not None]
        if not boxes:
            return tuple(window or DEFAULT_WINDOW)
        xmin = max(b[0] for b in boxes)
        xmax = min(b[1] for b in boxes)
        ymin = max(b[2] for b in boxes)
        ymax = min(b[3] for b in boxes)
        return (xmin, xmax, ymin, ymax)

    def probe_points(self, n: int = 17, n_random: int = 50, seed: int = 0, window=None):
        """Default probe set: an n x n cell-centred grid plus ``n_random``
        seeded uniform points, restricted to the open domain."""
        xmin, xmax, ymin, ymax = self.bbox(window)
        if not (xmin < xmax and ymin < ymax):
            return np.empty(0, dtype=complex)
        gx = xmin + (np.arange(n) + 0.5) * (xmax - xmin) / n
        gy = ymin + (np.arange(n) + 0.5) * (ymax - ymin) / n
        grid = (gx[None, :] + 1j * gy[:, None]).ravel()
        rng = np.random.default_rng(seed)
        rnd = rng.uniform(xmin, xmax, n_random) + 1j * rng.uniform(ymin, ymax, n_random)
        pts = np.concatenate([grid, rnd])
        return pts[self.contains(pts)]

    def sample_grid(self, nx: int, ny: int, window=None):
        """Parameter grid of shape (ny, nx) covering the domain.

        Rectangles and unbounded domains use a closed Cartesian grid. A single
        annulus uses a polar grid: radius along rows, angle along columns,
        half-cell offset from ``theta0`` so no sample sits on the seam.
        """
        real = [r for r in self.regions if not isinstance(r, Plane)]
        if len(real) == 1 and isinstance(real[0], Annulus):
            a = real[0]
            r = np.linspace(a.r_in, a.r_out, ny)
            th = self.theta0 + 2 * np.pi * (np.arange(nx) + 0.5) / nx
            return a.center + r[:, None] * np.exp(1j * th[None, :])
        xmin, xmax, ymin, ymax = self.bbox(window)
        x = np.linspace(xmin, xmax, nx)
        y = np.linspace(ymin, ymax, ny)
        return x[None, :] + 1j * y[:, None]
