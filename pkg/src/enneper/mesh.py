"""Grid sampling of immersions into triangle meshes; OBJ and CSV output."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyMesh, IoError
from .immersion import EnneperImmersion

JUMP_TOL = 1e-9


@dataclass(frozen=True)
class SurfaceMesh:
    vertices: np.ndarray  # (n, 3)
    faces: np.ndarray  # (m, 3), 0-based
    valid_mask: np.ndarray  # (ny, nx)
    provenance: str = ""
    grid: np.ndarray | None = None

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)


def _edge_ok(X, grid, valid, H, a, b, unwrap):
    """Edges whose height change agrees with the continued increment of h and
    (without unwrapping) that do not cross a declared cut."""
    za, zb = grid[a], grid[b]
    ok = valid[a] & valid[b]
    idx = np.flatnonzero(ok)
    if idx.size:
        inc = X.h.step(za[idx], zb[idx], "mask")
        jump = np.abs((H[b][idx] - H[a][idx]) - inc)
        scale = 1.0 + np.abs(inc)
        good = np.isfinite(jump) & (jump <= JUMP_TOL * scale)
        ok[idx] = good
    if not unwrap:
        for cut in X.domain.cuts:
            ok &= ~cut.crosses(za, zb)
    return ok


def _unwrap(X, grid, valid, H):
    """Continue h down the first column, then along each row."""
    H = H.copy()
    ny, nx = grid.shape
    for i in range(1, ny):
        if valid[i, 0] and valid[i - 1, 0]:
            H[i, 0] = H[i - 1, 0] + X.h.step(grid[i - 1, 0], grid[i, 0], "mask")
    for i in range(ny):
        inc = X.h.step(grid[i, :-1], grid[i, 1:], "mask")
        for j in range(1, nx):
            if valid[i, j] and valid[i, j - 1]:
                H[i, j] = H[i, j - 1] + inc[j - 1]
    return H


def _param_area(za, zb, zc):
    return np.imag(np.conj(zb - za) * (zc - za)) / 2


def sample_graph(X: EnneperImmersion, nx: int, ny: int, unwrap: bool = False, window=None,
                 layers: int = 1, layer_spacing: float = 0.0, provenance: str = "") -> SurfaceMesh:
    """Sample X on the domain's grid (``Domain.sample_grid``) into a mesh.

    Samples outside the domain, inside punctures, on cuts or at singular
    points are masked. A triangle is kept only when its three samples are
    valid, no edge crosses a declared cut (unless ``unwrap``) and every edge's
    height change matches the continued change of h, which removes the one
    column of cells where the principal branch jumps. Quads are split along
    the shorter 3D diagonal; faces are counter-clockwise in the parameter
    plane. Annulus grids also close the ring across the sampling seam.
    ``layers`` > 1 stacks copies shifted by ``layer_spacing`` in x3.
    """
    if nx < 2 or ny < 2:
        raise ValueError("grid must be at least 2x2")
    grid = X.domain.sample_grid(nx, ny, window)
    valid = np.asarray(X.domain.contains(grid, closed=True))
    with np.errstate(all="ignore"):
        pts = np.asarray(X(grid, errors="mask"), dtype=float)
    valid &= np.all(np.isfinite(pts), axis=-1)
    if not np.any(valid):
        raise EmptyMesh(f"no valid samples for {X.name or 'immersion'} on a {nx}x{ny} grid")
    H = pts[..., 2]
    if unwrap:
        H = _unwrap(X, grid, valid, H)
        pts = pts.copy()
        pts[..., 2] = H

    ring = X.domain.kind == "annulus"
    cols = nx if ring else nx - 1
    quads = []
    for i in range(ny - 1):
        for j in range(cols):
            j1 = (j + 1) % nx
            quads.append(((i, j), (i, j1), (i + 1, j1), (i + 1, j)))
    quads = np.array(quads)  # (q, 4, 2)
    if quads.size == 0:
        raise EmptyMesh("grid has no cells")
    corner = [tuple(quads[:, c].T) for c in range(4)]
    p = [pts[c] for c in corner]
    d02 = np.linalg.norm(p[2] - p[0], axis=-1)
    d13 = np.linalg.norm(p[3] - p[1], axis=-1)
    use02 = ~(d13 < d02)  # NaN distances fall back to the 0-2 split
    tri_a = np.where(use02[:, None], [0, 1, 2], [0, 1, 3])
    tri_b = np.where(use02[:, None], [0, 2, 3], [1, 2, 3])

    flat = np.arange(nx * ny).reshape(ny, nx)
    tris = []
    for tri in (tri_a, tri_b):
        ids = np.stack([flat[tuple(quads[np.arange(len(quads)), tri[:, c]].T)] for c in range(3)], axis=1)
        tris.append(ids)
    tris = np.concatenate(tris)

    vflat, gflat, Hflat = valid.ravel(), grid.ravel(), H.ravel()
    keep = np.all(vflat[tris], axis=1)
    for a, b in ((0, 1), (1, 2), (2, 0)):
        keep &= _edge_ok(X, gflat, vflat, Hflat, tris[:, a], tris[:, b], unwrap)
    tris = tris[keep]

    # parameter-plane counter-clockwise orientation
    area = _param_area(gflat[tris[:, 0]], gflat[tris[:, 1]], gflat[tris[:, 2]])
    flip = area < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]

    index = -np.ones(nx * ny, dtype=int)
    index[vflat] = np.arange(int(vflat.sum()))
    verts = pts.reshape(-1, 3)[vflat]
    faces = index[tris]

    if layers > 1:
        n = len(verts)
        verts = np.concatenate([verts + [0.0, 0.0, m * layer_spacing] for m in range(layers)])
        faces = np.concatenate([faces + m * n for m in range(layers)])
    return SurfaceMesh(verts, faces.astype(int), valid, provenance or X.name, grid)


def planar_orientation(mesh: SurfaceMesh) -> np.ndarray:
    """Signed area of each face's (x1, x2) projection."""
    v = mesh.vertices
    a, b, c = (v[mesh.faces[:, j]] for j in range(3))
    return ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])) / 2


def max_edge_jump(mesh: SurfaceMesh) -> float:
    """Largest |x3| difference along any face edge."""
    z = mesh.vertices[:, 2]
    f = mesh.faces
    if len(f) == 0:
        return 0.0
    return float(max(np.max(np.abs(z[f[:, a]] - z[f[:, b]])) for a, b in ((0, 1), (1, 2), (2, 0))))


def obj_text(mesh: SurfaceMesh) -> str:
    v = np.asarray(mesh.vertices, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("mesh has non-finite vertices")
    lines = [f"# {mesh.provenance}"] if mesh.provenance else []
    lines += [f"v {x!r} {y!r} {z!r}" for x, y, z in v.tolist()]
    lines += [f"f {i + 1} {j + 1} {k + 1}" for i, j, k in np.asarray(mesh.faces, dtype=int).tolist()]
    return "\n".join(lines) + "\n"


def export_obj(mesh: SurfaceMesh, path) -> None:
    """``v x y z`` lines then 1-based ``f i j k`` lines."""
    text = obj_text(mesh)
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_obj(path):
    """(vertices, 0-based faces) from an OBJ written by ``export_obj``."""
    verts, faces = [], []
    try:
        with open(path, encoding="ascii") as fh:
            for line in fh:
                parts = line.split()
                if not parts:
                    continue
                if parts[0] == "v":
                    verts.append([float(t) for t in parts[1:4]])
                elif parts[0] == "f":
                    faces.append([int(t.split("/")[0]) - 1 for t in parts[1:4]])
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return np.array(verts, dtype=float).reshape(-1, 3), np.array(faces, dtype=int).reshape(-1, 3)


def csv_rows(x, y, value, extras=None):
    """Header and rows with every column finite; 17 significant digits."""
    cols = {"x": x, "y": y, "value": value}
    cols.update(extras or {})
    arrs = [np.asarray(c, dtype=float).ravel() for c in cols.values()]
    n = {a.size for a in arrs}
    if len(n) != 1:
        raise ValueError("csv columns differ in length")
    data = np.stack(arrs, axis=1)
    ok = np.all(np.isfinite(data), axis=1)
    rows = [[f"{v:.16e}" for v in r] for r in data[ok].tolist()]
    return list(cols), rows


def export_csv(path, x, y, value, extras=None) -> int:
    """Write ``x,y,value[,extra...]``; non-finite samples are skipped.
    Returns the number of rows written."""
    header, rows = csv_rows(x, y, value, extras)
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return len(rows)


def export_rows(path, header, rows) -> None:
    """Plain CSV table (reports, coefficient tables)."""
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([_fmt(v) for v in r])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.16e}" if math.isfinite(v) else str(float(v))
    return str(v)
