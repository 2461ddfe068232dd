import math

import numpy as np
import pytest

from enneper.domain import Domain
from enneper.errors import EmptyMesh, IoError
from enneper.harmonic import HarmonicScalar
from enneper.immersion import EnneperImmersion
from enneper.mesh import (
    SurfaceMesh,
    export_csv,
    export_obj,
    max_edge_jump,
    obj_text,
    planar_orientation,
    read_obj,
    sample_graph,
)
from enneper.motifs import helicoid, motif_field, dipole
from enneper.tgb import TgbParams, tgb_single


def plane(domain=None):
    return EnneperImmersion.graph(HarmonicScalar(), domain or Domain.rectangle(0, 1, 0, 1))


def annulus_helicoid(a=1.0):
    return helicoid(a).map_domain(Domain.annulus(0, 0.5, 2).with_punctures([0j], 1e-3).with_cuts(
        helicoid(a).domain.cuts))


class TestSample:
    def test_plane_2x2(self):
        m = sample_graph(plane(), 2, 2)
        assert m.n_vertices == 4 and m.n_faces == 2
        assert np.all(m.valid_mask)

    def test_too_small(self):
        with pytest.raises(ValueError):
            sample_graph(plane(), 1, 5)

    def test_empty(self):
        X = plane(Domain.rectangle(0, 1, 0, 1).with_punctures([0.5 + 0.5j], 5.0))
        with pytest.raises(EmptyMesh):
            sample_graph(X, 4, 4)

    def test_faces_valid(self):
        X = motif_field(dipole(1.0, 1.0))
        m = sample_graph(X, 21, 21, window=(-1, 1, -1, 1))
        assert np.all(np.isfinite(m.vertices))
        assert m.faces.min() >= 0 and m.faces.max() < m.n_vertices

    def test_orientation_positive(self):
        X = tgb_single(TgbParams(1.0, 1.0, 1.0))
        m = sample_graph(X, 30, 20)
        assert np.all(planar_orientation(m) > 0)

    def test_shorter_diagonal(self):
        # a saddle: one diagonal of the single quad rises far more than the other
        from enneper import analytic as an
        X = EnneperImmersion.graph(HarmonicScalar.re(10 * an.Z ** 2), Domain.rectangle(0, 1, 0, 1))
        m = sample_graph(X, 2, 2)
        v = m.vertices
        diag = [tuple(sorted(set(f) & set(g))) for f in m.faces.tolist() for g in m.faces.tolist() if f != g][0]
        d = np.linalg.norm(v[diag[0]] - v[diag[1]])
        other = {0, 1, 2, 3} - set(diag)
        o = sorted(other)
        assert d <= np.linalg.norm(v[o[0]] - v[o[1]])

    def test_cut_column_dropped(self):
        X = annulus_helicoid()
        m = sample_graph(X, 24, 6)
        assert m.n_vertices == 144
        assert m.n_faces == 2 * 24 * 5 - 2 * 5  # one column of cells on the seam

    def test_unwrapped_continuous(self):
        a = 0.8
        X = annulus_helicoid(a)
        m = sample_graph(X, 24, 6, unwrap=True)
        assert max_edge_jump(m) < math.pi * a  # half a layer
        assert m.n_faces == 2 * 24 * 5 - 2 * 5

    def test_rectangle_cut_unwrap(self):
        X = helicoid(1.0).map_domain(Domain.rectangle(-1, 1, -1, 1).with_punctures([0j], 1e-3)
                                     .with_cuts(helicoid(1.0).domain.cuts))

        def missing_cells(m):
            # centres of grid cells that lost a triangle
            idx = np.flatnonzero(m.valid_mask.ravel())
            c = m.grid.ravel()[idx[m.faces]].mean(axis=1)
            xs = np.linspace(-1, 1, 20)
            count = {}
            for w in c:
                k = (int(np.searchsorted(xs, w.imag)) - 1, int(np.searchsorted(xs, w.real)) - 1)
                count[k] = count.get(k, 0) + 1
            return {(xs[j] + xs[j + 1]) / 2 + 1j * (xs[i] + xs[i + 1]) / 2
                    for i in range(19) for j in range(19) if count.get((i, j), 0) < 2}

        wrapped = sample_graph(X, 20, 20)
        unwrapped = sample_graph(X, 20, 20, unwrap=True)
        assert max_edge_jump(wrapped) < math.pi
        assert max_edge_jump(unwrapped) < math.pi
        # the winding forces a seam; unwrapping moves it from the principal
        # cut on the left half-axis to the right half-axis
        mw = {w for w in missing_cells(wrapped) if abs(w.real) > 0.1}
        mu = {w for w in missing_cells(unwrapped) if abs(w.real) > 0.1}
        assert len(mw) == len(mu) == 9
        assert all(w.real < 0 and abs(w.imag) < 0.1 for w in mw)
        assert all(w.real > 0 and abs(w.imag) < 0.1 for w in mu)

    def test_layers(self):
        m1 = sample_graph(plane(), 3, 3)
        m3 = sample_graph(plane(), 3, 3, layers=3, layer_spacing=0.5)
        assert m3.n_vertices == 3 * m1.n_vertices and m3.n_faces == 3 * m1.n_faces
        assert np.array_equal(np.unique(m3.vertices[:, 2]), [0.0, 0.5, 1.0])


class TestObj:
    def test_exact_text(self):
        m = SurfaceMesh(np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.5]]),
                        np.array([[0, 1, 2]]), np.ones((1, 3), bool))
        assert obj_text(m) == "v 0.0 0.0 0.0\nv 1.0 0.0 0.0\nv 0.0 1.0 0.5\nf 1 2 3\n"

    def test_provenance_comment(self):
        m = SurfaceMesh(np.zeros((3, 3)), np.array([[0, 1, 2]]), np.ones(3, bool), "demo")
        assert obj_text(m).startswith("# demo\n")

    def test_nonfinite_rejected(self):
        m = SurfaceMesh(np.array([[np.nan, 0, 0], [1, 0, 0], [0, 1, 0]]), np.array([[0, 1, 2]]), np.ones(3, bool))
        with pytest.raises(ValueError):
            obj_text(m)

    def test_round_trip(self, tmp_path):
        m = sample_graph(tgb_single(TgbParams(1.0, 1.0, 1.0)), 17, 13)
        p = tmp_path / "m.obj"
        export_obj(m, p)
        v, f = read_obj(p)
        assert np.max(np.abs(v - m.vertices)) <= 1e-12
        assert np.array_equal(f, m.faces)

    def test_io_errors(self, tmp_path):
        m = sample_graph(plane(), 2, 2)
        with pytest.raises(IoError):
            export_obj(m, tmp_path / "missing" / "m.obj")
        with pytest.raises(IoError):
            read_obj(tmp_path / "nope.obj")


class TestCsv:
    def test_rows(self, tmp_path):
        p = tmp_path / "f.csv"
        n = export_csv(p, [0, 1, 2], [0, 0, 1], [1.0, np.nan, 3.0], {"extra": [5, 6, 7]})
        lines = p.read_text().splitlines()
        assert n == 2 and len(lines) == 3
        assert lines[0] == "x,y,value,extra"
        assert all(len(c.split("e")[0].replace("-", "").replace(".", "")) >= 12 for c in lines[1].split(","))

    def test_row_count_matches_valid(self, tmp_path):
        X = helicoid(1.0)
        g = Domain.rectangle(-1, 1, -1, 1).sample_grid(9, 9)
        h = X.h(g, errors="mask")
        n = export_csv(tmp_path / "h.csv", g.real, g.imag, h)
        assert n == int(np.sum(np.isfinite(h)))

    def test_length_mismatch(self, tmp_path):
        with pytest.raises(ValueError):
            export_csv(tmp_path / "x.csv", [0, 1], [0], [0, 1])

    def test_unwritable(self, tmp_path):
        with pytest.raises(IoError):
            export_csv(tmp_path / "no" / "x.csv", [0], [0], [0])
