"""Command-line front end.

    enneper build CONFIG        build a field, run the mandatory checks, write outputs
    enneper verify CONFIG       full check suite for the configured field
    enneper multipole CONFIG    expansion coefficients and error-vs-radius table
    enneper decompose NAME      minimal/maximal decomposition (or --F/--G expressions)
    enneper mesh CONFIG         OBJ/CSV export only

Exit codes: 0 ok, 2 bad config or expression, 3 failed check, 4 IO error.
"""
from __future__ import annotations

import argparse
import itertools
import math
import os
import sys

import numpy as np

from . import decompose as dc
from . import mesh as ms
from . import multipole as mp
from . import tgb as tg
from . import verify as vf
from .config import Config, Field, build_field, load_config
from .errors import ConfigError, EnneperError, InsideConvergenceRadius, IoError
from .immersion import immersion_map, is_harmonic_graph

EXIT_OK, EXIT_CONFIG, EXIT_CHECK, EXIT_IO = 0, 2, 3, 4
WINDING_TOL = 1e-8
SCHERK_TOL = 1e-3


# ---------------------------------------------------------------- helpers

def _out_path(out_dir: str, name: str) -> str:
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out_dir}: {exc}") from exc
    return os.path.join(out_dir, name)


def _write_text(path: str, text: str):
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _parse_grid(text):
    if text is None:
        return None
    try:
        nx, ny = (int(t) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"--grid must be NX,NY, got {text!r}") from None
    if nx < 2 or ny < 2:
        raise ConfigError("--grid needs NX, NY >= 2")
    return nx, ny


def _with_overrides(cfg: Config, args) -> Config:
    grid = _parse_grid(getattr(args, "grid", None)) or cfg.grid
    seed = cfg.seed if getattr(args, "seed", None) is None else args.seed
    return Config(cfg.raw, cfg.source, grid, seed, cfg.output, cfg.multipole, cfg.test_hook, cfg.scherk, cfg.name)


def _min_spacing(points, fallback):
    pts = [complex(p) for p in points]
    if len(pts) < 2:
        return fallback
    return min(abs(a - b) for a, b in itertools.combinations(pts, 2))


# ---------------------------------------------------------------- checks

def safe_probes(f: Field, n: int = 9):
    """n x n grid inside the window, away from every declared charge."""
    xmin, xmax, ymin, ymax = f.window
    size = min(xmax - xmin, ymax - ymin)
    pts = [c.point for c in f.charges]
    margin = 0.25 * _min_spacing(pts, size)
    inset = 0.05 * size
    grid = vf.probe_grid((xmin + inset, xmax - inset), (ymin + inset, ymax - inset), n)
    # nudge off symmetry lines so no stencil is centred on a lattice row
    grid = grid + 0.0123 * size * (1 + 1j)
    keep = np.ones(grid.shape, dtype=bool)
    for p in pts:
        keep &= np.abs(grid - p) > margin
    keep &= f.X.domain.contains(grid)
    return grid[keep], margin


def harmonicity_check(f: Field, cfg: Config):
    probes, margin = safe_probes(f)
    h = f.X.h
    name = f"{cfg.name}:h"
    if cfg.test_hook.get("non_harmonic"):
        base = h
        h = lambda z: base(z) + np.real(z) ** 2  # noqa: E731
        name += "+x^2"
    return vf.harmonicity_report(name, h, probes, delta=min(0.02, margin / 8))


def graph_check(f: Field, cfg: Config):
    probes, _ = safe_probes(f)
    bad = 0 if is_harmonic_graph(f.X, probes) else 1
    bad += int(np.sum(~immersion_map(f.X, probes)))
    return vf.VerificationReport("graph-immersion", f"{cfg.name}:X", f"{probes.size} probes, seed {cfg.seed}",
                                 float(bad), 0.0)


def winding_checks(f: Field, cfg: Config):
    reports = []
    pts = [c.point for c in f.charges]
    xmin, xmax, ymin, ymax = f.window
    radius = 0.25 * _min_spacing(pts, min(xmax - xmin, ymax - ymin))
    for c in f.charges:
        reports.append(vf.winding_report(f"{cfg.name}:charge", f.X.h, c.point, radius, c.pitch, WINDING_TOL))
    for center, r in f.neutral_loops:
        reports.append(vf.winding_report(f"{cfg.name}:neutral", f.X.h, center, r, 0.0, WINDING_TOL))
    if f.motif_cfg is not None and len(f.charges) > 1:
        c = complex(np.mean(pts))
        r = 2 * max(abs(p - c) for p in pts) + radius
        reports.append(vf.winding_report(f"{cfg.name}:total", f.X.h, c, r, f.motif_cfg.total_pitch, WINDING_TOL))
    return reports


def scherk_points(p: tg.TgbParams, n: int = 10, seed: int = 0):
    """Seeded points in the fundamental cell |x| < d/2, 0.05 d < |y| < 0.8 d."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(-0.5, 0.5, n) * p.d
    y = rng.uniform(0.05, 0.8, n) * p.d * rng.choice([-1.0, 1.0], n)
    return x + 1j * y


def scherk_sweep(p: tg.TgbParams, Ns, z):
    return [(N, float(np.max(tg.scherk_row_check(p, N, z).gap))) for N in Ns]


def scherk_check(f: Field, cfg: Config, out=print):
    Ns = [int(n) for n in cfg.scherk.get("N", [1, 10, 100, 1000])]
    z = scherk_points(f.params, int(cfg.scherk.get("points", 10)), cfg.seed)
    table = scherk_sweep(f.params, Ns, z)
    out("scherk-row gap table")
    out(f"{'N':>8}  {'max gap':>12}")
    for N, g in table:
        out(f"{N:>8}  {g:12.4e}")
    gaps = [g for _, g in table]
    decreasing = all(b < a for a, b in zip(gaps, gaps[1:]))
    residual = gaps[-1] if decreasing else math.inf
    return vf.VerificationReport("scherk-gap", f"{cfg.name}:N={Ns[-1]}", f"{z.size} pts, seed {cfg.seed}",
                                 residual, SCHERK_TOL)


def field_reports(f: Field, cfg: Config, full: bool = False, out=print):
    reports = [harmonicity_check(f, cfg), graph_check(f, cfg)]
    reports += winding_checks(f, cfg)
    if full and f.kind == "tgb":
        reports.append(scherk_check(f, cfg, out))
    return reports


def _emit_reports(reports, out_dir, name, out=print):
    for r in reports:
        out(r.line())
    _write_text(_out_path(out_dir, name), vf.reports_to_csv(reports))
    return all(r.passed for r in reports)


def _field_csv(f: Field, cfg: Config, unwrap: bool, path):
    m = ms.sample_graph(f.X, *cfg.grid, unwrap=unwrap, window=f.window)
    v = m.vertices
    return ms.export_csv(path, v[:, 0], v[:, 1], v[:, 2]), m


# ---------------------------------------------------------------- commands

def cmd_build(args, out=print) -> int:
    cfg = _with_overrides(load_config(args.config), args)
    f = build_field(cfg)
    unwrap = bool(args.unwrap or cfg.output.get("unwrap", False))
    ok = _emit_reports(field_reports(f, cfg), args.out, "report.csv", out)
    csv_name = cfg.output.get("csv", "field.csv")
    n, m = _field_csv(f, cfg, unwrap, _out_path(args.out, csv_name))
    out(f"wrote {n} samples to {csv_name}")
    obj_name = cfg.output.get("obj", "field.obj")
    ms.export_obj(m, _out_path(args.out, obj_name))
    out(f"wrote {m.n_vertices} vertices, {m.n_faces} faces to {obj_name}")
    return EXIT_OK if ok else EXIT_CHECK


def cmd_verify(args, out=print) -> int:
    cfg = _with_overrides(load_config(args.config), args)
    f = build_field(cfg)
    ok = _emit_reports(field_reports(f, cfg, full=True, out=out), args.out, "verify.csv", out)
    out("all checks passed" if ok else "some checks FAILED")
    return EXIT_OK if ok else EXIT_CHECK


def cmd_mesh(args, out=print) -> int:
    cfg = _with_overrides(load_config(args.config), args)
    f = build_field(cfg)
    unwrap = bool(args.unwrap or cfg.output.get("unwrap", False))
    layers = int(cfg.output.get("layers", 1))
    spacing = float(cfg.output.get("layer_spacing", 0.0))
    m = ms.sample_graph(f.X, *cfg.grid, unwrap=unwrap, window=f.window, layers=layers,
                        layer_spacing=spacing, provenance=f"{cfg.name} grid={cfg.grid[0]}x{cfg.grid[1]}")
    obj_name = cfg.output.get("obj", "mesh.obj")
    ms.export_obj(m, _out_path(args.out, obj_name))
    out(f"wrote {m.n_vertices} vertices, {m.n_faces} faces to {obj_name}")
    if "csv" in cfg.output:
        v = m.vertices
        n = ms.export_csv(_out_path(args.out, cfg.output["csv"]), v[:, 0], v[:, 1], v[:, 2])
        out(f"wrote {n} samples to {cfg.output['csv']}")
    return EXIT_OK


def cmd_multipole(args, out=print) -> int:
    cfg = _with_overrides(load_config(args.config), args)
    f = build_field(cfg)
    if f.motif_cfg is None:
        raise ConfigError("multipole needs a motifs section")
    sec = cfg.multipole
    K = args.K if args.K is not None else sec.get("K", 8)
    if not isinstance(K, int) or K < 0:
        raise ConfigError(f"multipole.K must be a non-negative integer, got {K!r}")
    center = complex(*sec["center"]) if "center" in sec else 0j
    e = mp.multipole_coeffs(f.motif_cfg, K, center)
    radii = args.radii or sec.get("eval_radii") or [e.r_min * s for s in (2.0, 4.0, 8.0, 16.0)]
    try:
        rows = mp.error_table(f.motif_cfg, e, [float(r) for r in radii])
    except InsideConvergenceRadius as exc:
        raise ConfigError(f"multipole.eval_radii: {exc}") from exc
    out(f"p = {e.p:.16e}")
    if K:
        out(f"{'k':>4}  {'re c_k':>24}  {'im c_k':>24}")
        for k, c in enumerate(e.c, 1):
            out(f"{k:>4}  {c.real:24.16e}  {c.imag:24.16e}")
        ms.export_rows(_out_path(args.out, "multipole_coeffs.csv"), ["k", "re", "im"],
                       [(k, c.real, c.imag) for k, c in enumerate(e.c, 1)])
    table = [(r, t, ex, tr, abs(ex - tr), b) for r, t, ex, tr, b in rows]
    ms.export_rows(_out_path(args.out, "multipole_error.csv"),
                   ["r", "theta", "exact", "truncated", "abs_error", "bound"], table)
    worst = max(err - b for *_, err, b in table)
    report = vf.VerificationReport("multipole-bound", f"{cfg.name}:K={K}", f"{len(table)} samples",
                                   max(worst, 0.0), 1e-12)
    out(report.line())
    return EXIT_OK if report.passed else EXIT_CHECK


def _datum(args) -> dc.WeierstrassData:
    if args.F is not None or args.G is not None:
        if args.F is None or args.G is None:
            raise ConfigError("--F and --G must be given together")
        return dc.from_expressions(args.F, args.G)
    name = args.datum or "enneper"
    if name not in dc.CATALOG:
        raise ConfigError(f"unknown catalog surface {name!r}; choose from {', '.join(dc.CATALOG)}")
    return dc.CATALOG[name]


def decompose_reports(w: dc.WeierstrassData, maximal: bool, grid=(15, 15)):
    pair = dc.decompose_maximal(w) if maximal else dc.decompose_minimal(w)
    X = pair.recomposed()
    xmin, xmax, ymin, ymax = w.window
    z = (np.linspace(xmin, xmax, grid[0])[None, :] + 1j * np.linspace(ymin, ymax, grid[1])[:, None]).ravel()
    z = z[w.region.contains(z, closed=True)]
    if maximal:
        oracle = dc.weierstrass_maximal(w, z, method="quad")
        label = "quadrature"
    elif w.closed_minimal is not None:
        oracle = w.closed_minimal(z)
        label = "closed form"
    else:
        oracle = dc.weierstrass_minimal(w, z, method="quad")
        label = "quadrature"
    kind = "maximal" if maximal else "minimal"
    reports = [vf.VerificationReport("recomposition", f"{w.name}:{kind}", f"{z.size} pts vs {label}",
                                     float(np.max(np.abs(X(z) - oracle))), 1e-9)]
    sig = dc.LORENTZIAN if maximal else dc.EUCLIDEAN
    reports.append(vf.VerificationReport("conformality", f"{w.name}:{kind}", f"{z.size} pts, signature {sig}",
                                         dc.conformality_residual(X, z, sig), 1e-10))
    inset = 0.1 * min(xmax - xmin, ymax - ymin)
    probes = vf.probe_grid((xmin + inset, xmax - inset), (ymin + inset, ymax - inset), 7) + 0.0123 * (1 + 1j)
    for label, Y in (("X1", pair.X1), ("X2", pair.X2)):
        for j in range(3):
            reports.append(vf.harmonicity_report(f"{w.name}:{label}[{j + 1}]", Y.coordinate(j), probes))
    return pair, X, z, reports


def cmd_decompose(args, out=print) -> int:
    w = _datum(args)
    grid = _parse_grid(args.grid) or (15, 15)
    try:
        pair, X, z, reports = decompose_reports(w, args.maximal, grid)
    except (dc.DegenerateGaussMap, dc.NonremovableSingularity) as exc:
        out(f"FAIL  {type(exc).__name__}: {exc}")
        return EXIT_CHECK
    ok = _emit_reports(reports, args.out, "decompose_report.csv", out)
    tag = "x_max" if args.maximal else "x_min"
    for label, Y in ((tag, X), ("x1", pair.X1), ("x2", pair.X2)):
        p = Y(z)
        ms.export_csv(_out_path(args.out, f"{label}.csv"), z.real, z.imag, p[:, 2],
                      {"x1": p[:, 0], "x2": p[:, 1]})
        Yd = Y.map_domain(w.region)
        m = ms.sample_graph(Yd, *grid, window=w.window, provenance=f"{w.name} {label}")
        ms.export_obj(m, _out_path(args.out, f"{label}.obj"))
    out(f"wrote {tag}, x1, x2 CSV and OBJ files")
    return EXIT_OK if ok else EXIT_CHECK


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="enneper", description="Harmonic surfaces via the Enneper representation.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("config", help="JSON config file")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--grid", help="sampling grid NX,NY")
        p.add_argument("--seed", type=int, help="seed for probe points (default from config, else 0)")

    p = sub.add_parser("build", help="build a field, check it and write outputs")
    common(p)
    p.add_argument("--unwrap", action="store_true", help="continue h across branch cuts along grid rows")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run the full check suite")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mesh", help="export OBJ/CSV only")
    common(p)
    p.add_argument("--unwrap", action="store_true")
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("multipole", help="multipole coefficients and truncation errors")
    common(p)
    p.add_argument("--K", type=int, help="truncation order")
    p.add_argument("--radii", type=float, nargs="+", help="evaluation radii")
    p.set_defaults(func=cmd_multipole)

    p = sub.add_parser("decompose", help="split Weierstrass data into two harmonic immersions")
    common(p, config=False)
    p.add_argument("datum", nargs="?", help=f"catalog surface: {', '.join(dc.CATALOG)}")
    p.add_argument("--F", help="F as an expression in z")
    p.add_argument("--G", help="G as an expression in z")
    p.add_argument("--maximal", action="store_true", help="maximal surface in Lorentz-Minkowski space")
    p.set_defaults(func=cmd_decompose)
    return ap


def main(argv=None, out=print, err=None) -> int:
    err = err or (lambda s: print(s, file=sys.stderr))
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ConfigError as exc:
        err(f"config error: {exc}")
        return EXIT_CONFIG
    except IoError as exc:
        err(f"io error: {exc}")
        return EXIT_IO
    except EnneperError as exc:
        err(f"check failed: {type(exc).__name__}: {exc}")
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
