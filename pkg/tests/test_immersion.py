import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from enneper import analytic as an
from enneper.domain import Domain
from enneper.errors import (
    DegeneratePlanarPart,
    DilatationMismatch,
    EmptyDomainIntersection,
    SingularPoint,
    ZeroPlanarSum,
)
from enneper.harmonic import HarmonicScalar
from enneper.immersion import (
    EnneperImmersion,
    Part,
    dilatation,
    hopf_differential,
    immersion_map,
    is_harmonic_graph,
    is_immersion_at,
    reciprocal_dilatation,
    superpose,
    unchecked_sum,
)
from enneper.motifs import helicoid
from enneper.verify import wirtinger_fd


def Y1():
    return EnneperImmersion.from_real_parts(an.exp(), an.Z * an.exp(), 1j * an.Z, name="Y1")


def Y2():
    return EnneperImmersion.from_real_parts(an.sinh(), 1j * an.cosh(), 1j * an.Z, name="Y2")


def hopf_fd(X, z):
    """sum of squared numeric Wirtinger derivatives of the three coordinates"""
    return sum(wirtinger_fd(X.coordinate(j), z) ** 2 for j in range(3))


def square(n=9, r=2.0):
    x = np.linspace(-r, r, n)
    return (x[None, :] + 1j * x[:, None]).ravel()


class TestHopf:
    def test_helicoid_closed_form(self):
        a = 1.3
        X = helicoid(a)
        z = np.array([0.5 + 0.5j, -0.3 + 1.1j, 2 - 0.4j])
        assert np.max(np.abs(hopf_differential(X, z) + a * a / (4 * z * z))) < 1e-14

    def test_helicoid_numeric(self):
        X = helicoid(0.7)
        z = np.array([0.5 + 0.5j, 1.2 - 0.3j])
        assert np.max(np.abs(hopf_differential(X, z) - hopf_fd(X, z))) < 1e-8

    def test_Y2_minimal(self):
        z = Domain.rectangle(-2, 2, -2, 2).probe_points(n=7, n_random=51)[:100]
        assert len(z) == 100
        assert np.max(np.abs(hopf_differential(Y2(), z))) < 1e-10

    def test_Y1_not_minimal(self):
        z = square()
        assert np.max(np.abs(hopf_differential(Y1(), z))) > 1e-3

    def test_Y1_numeric(self):
        z = np.array([0.3 + 0.2j, -1 + 0.5j])
        assert np.max(np.abs(hopf_differential(Y1(), z) - hopf_fd(Y1(), z))) < 1e-7

    def test_from_real_parts_values(self):
        z = 0.4 - 0.7j
        p = Y1()(z)
        ref = [np.exp(z).real, (z * np.exp(z)).real, (1j * z).real]
        assert np.max(np.abs(p - ref)) < 1e-15

    def test_singular(self):
        with pytest.raises(SingularPoint):
            hopf_differential(helicoid(1.0), 0j)


class TestDilatation:
    def test_graph_zero(self):
        assert dilatation(helicoid(1.0), 0.5 + 0.5j) == 0

    def test_linear(self):
        X = EnneperImmersion(an.Z, 0.3j * an.Z, HarmonicScalar())
        assert abs(dilatation(X, 0.2 + 0.9j) - 0.3j) < 1e-15

    def test_degenerate(self):
        X = EnneperImmersion(an.ZERO, an.Z, HarmonicScalar())
        with pytest.raises(DegeneratePlanarPart):
            dilatation(X, 0.5)
        assert reciprocal_dilatation(X, 0.5) == 0

    def test_degenerate_critical_point(self):
        X = EnneperImmersion(an.Z ** 2, an.Z, HarmonicScalar())
        with pytest.raises(DegeneratePlanarPart):
            dilatation(X, 0j)


class TestImmersion:
    def test_graph(self):
        assert np.all(immersion_map(helicoid(1.0), square(8)))

    def test_degenerate(self):
        X = EnneperImmersion(an.Z, an.Z, HarmonicScalar())
        assert not np.any(immersion_map(X, square(8)))

    def test_Y1_rank_everywhere(self):
        assert np.all(immersion_map(Y1(), square(), criterion="rank"))

    def test_Y1_enneper_fails_on_real_axis(self):
        # |L'| = |P'| exactly where Im z = 0; the rank condition still holds there
        assert not is_immersion_at(Y1(), 0.5)
        assert is_immersion_at(Y1(), 0.5, criterion="rank")
        assert is_immersion_at(Y1(), 0.5 + 0.5j)

    def test_bad_criterion(self):
        with pytest.raises(ValueError):
            immersion_map(Y1(), square(), criterion="nope")

    def test_harmonic_graph(self):
        disk = 0.99 * np.exp(1j * np.linspace(0, 6, 40))[None, :] * np.linspace(0, 1, 10)[:, None]
        assert is_harmonic_graph(EnneperImmersion(an.Z, an.Z ** 2 / 4, HarmonicScalar()), disk)
        assert not is_harmonic_graph(EnneperImmersion(an.Z, 2 * an.Z, HarmonicScalar()), disk)
        assert is_harmonic_graph(helicoid(1.0, 3), disk)


class TestReflected:
    @pytest.mark.parametrize("signs", [(1, 1, 1), (-1, -1, 1), (1, -1, -1), (-1, 1, 1)])
    def test_signs(self, signs):
        X = Y1()
        z = np.array([0.3 + 0.4j, -0.5 - 0.2j])
        assert np.max(np.abs(X.reflected(signs)(z) - np.array(signs) * X(z))) < 1e-15


class TestSuperpose:
    def test_identity(self):
        X = helicoid(1.5, 0.2)
        Y = superpose([X])
        z = np.array([0.5 + 0.5j, -1 + 0.2j])
        assert np.max(np.abs(Y(z) - X(z))) < 1e-15

    def test_motif_pair(self):
        X = superpose([(helicoid(1.0, 0.5), 0.5, 1.0), (helicoid(-2.0, -0.5), 0.5, 1.0)])
        z = np.array([0.3 + 0.7j, 2 - 1j])
        h = np.angle(z - 0.5) - 2 * np.angle(z + 0.5)
        assert np.max(np.abs(X(z)[:, 2] - h)) < 1e-14
        assert np.max(np.abs(X(z)[:, 0] - z.real)) < 1e-15

    def test_mismatch(self):
        A = EnneperImmersion(an.Z, an.ZERO, HarmonicScalar())
        B = EnneperImmersion(an.Z, an.Z / 2, HarmonicScalar())
        with pytest.raises(DilatationMismatch) as e:
            superpose([A, B])
        assert abs(e.value.nu_i - 0.5) < 1e-15

    def test_zero_sum(self):
        X = helicoid(1.0)
        with pytest.raises(ZeroPlanarSum):
            superpose([Part(X, 1, 1), Part(X, -1, 1)])

    def test_empty_intersection(self):
        A = EnneperImmersion.graph(HarmonicScalar(), Domain.rectangle(0, 1, 0, 1))
        B = EnneperImmersion.graph(HarmonicScalar(), Domain.rectangle(2, 3, 0, 1))
        with pytest.raises(EmptyDomainIntersection):
            superpose([A, B])

    def test_immersion_rechecked(self):
        A = EnneperImmersion(an.Z, an.Z / 2, HarmonicScalar())
        assert superpose([A]).immersed_on_probes
        # |nu| = 1 parts superpose fine but the sum is flagged, not assumed immersed
        B = EnneperImmersion(an.Z, an.Z, HarmonicScalar())
        assert superpose([B, (B, 2.0, 1.0)]).immersed_on_probes is False

    @given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
    @settings(max_examples=30, deadline=None)
    def test_vector_space_closure(self, a, b, c):
        nu = 0.25 - 0.1j
        parts = [EnneperImmersion(k * an.exp(an.affine(s)), nu * k * an.exp(an.affine(s)),
                                  HarmonicScalar.im(an.Z ** 2, k))
                 for k, s in ((1.0, 0.5), (2.0, 0.5), (-1.0, 0.5))]
        if abs(a + 2 * b - c) < 1e-3:
            return
        z = np.array([0.3 + 0.2j, -0.4 + 0.6j])
        ab = superpose([(parts[0], a, a), (parts[1], b, b)]) if abs(a + 2 * b) > 1e-3 else None
        abc = superpose([(parts[0], a, a), (parts[1], b, b), (parts[2], c, c)])
        if ab is not None:
            nested = superpose([ab, (parts[2], c, c)])
            assert np.max(np.abs(nested(z) - abc(z))) < 1e-12
        assert np.max(np.abs(dilatation(abc, z) - nu)) < 1e-9

    def test_graph_guarantee(self):
        X = superpose([helicoid(1.0, 0.3), helicoid(2.0, -0.3)])
        grid = Domain.annulus(0, 1, 2).sample_grid(12, 4)
        assert is_harmonic_graph(X, grid)

    def test_unchecked_sum(self):
        A = EnneperImmersion(an.Z, an.ZERO, HarmonicScalar())
        B = EnneperImmersion(an.Z, an.Z / 2, HarmonicScalar())
        S = unchecked_sum([A, B])
        assert not S.verified
        assert abs(S.planar(1.0) - 2.5) < 1e-15
