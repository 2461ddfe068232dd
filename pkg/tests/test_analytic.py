import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from enneper import analytic as an
from enneper.errors import DomainError, ExpressionParseError, PathThroughSingularity, SingularPoint
from enneper.parse import parse_expression
from enneper.verify import discrete_laplacian_residual

# Taylor series of sin(pi z) at z = 0.3 + 0.4i, summed to 60 terms
SIN_PI_Z = 1.5364022192794042 + 0.9489722601936915j

BASIS = [
    an.Z,
    an.power(an.Z, 3),
    an.power(an.Z, -2),
    an.exp(),
    an.log(),
    an.sin(),
    an.cos(),
    an.sinh(),
    an.cosh(),
    an.sn(an.Z, 0.6),
    an.cn(an.Z, 0.6),
    an.dn(an.Z, 0.6),
]


def random_expr(rng, depth=3):
    """Random tree over the basis, kept small enough to evaluate safely."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.6:
            return an.affine(complex(*rng.uniform(-1, 1, 2)), complex(*rng.uniform(-0.5, 0.5, 2)))
        return an.const(complex(*rng.uniform(-2, 2, 2)))
    op = rng.integers(0, 5)
    if op == 0:
        return random_expr(rng, depth - 1) + random_expr(rng, depth - 1)
    if op == 1:
        return random_expr(rng, depth - 1) * random_expr(rng, depth - 1)
    if op == 2:
        return an.power(random_expr(rng, depth - 1), int(rng.choice([-2, -1, 2, 3])))
    if op == 3:
        name = str(rng.choice(["exp", "log", "sin", "cos", "sinh", "cosh"]))
        return an.Func(name, random_expr(rng, depth - 1))
    return an.Jacobi(str(rng.choice(["sn", "cn", "dn"])), random_expr(rng, depth - 1), float(rng.uniform(0.1, 0.9)))


def central(f, z, d):
    return (an.evaluate(f, z + d) - an.evaluate(f, z - d)) / (2 * d)


def safe_points(f, rng, n=50, d=1e-4):
    """Points where f is finite, moderate, the real- and imaginary-step
    difference quotients agree (no cut inside the stencil) and halving the
    step barely moves the quotient (no pole close enough to spoil it)."""
    z = rng.uniform(-1, 1, 4 * n) + 1j * rng.uniform(-1, 1, 4 * n)
    out = []
    for zi in z:
        try:
            with np.errstate(all="ignore"):
                fx = central(f, zi, d)
                fy = (an.evaluate(f, zi + 1j * d) - an.evaluate(f, zi - 1j * d)) / (2j * d)
                fh = central(f, zi, d / 2)
                v = an.evaluate(f, zi)
        except (SingularPoint, DomainError):
            continue
        if not (abs(v) < 1e3 and abs(fx) < 1e3 and abs(fx - fy) < 1e-5 and abs(fx - fh) < 1e-7):
            continue
        out.append(zi)
        if len(out) == n:
            break
    return np.array(out)


class TestEval:
    def test_exp0(self):
        assert an.evaluate(an.exp(), 0) == 1

    def test_log_i(self):
        assert abs(an.evaluate(an.log(), 1j) - 1j * math.pi / 2) < 1e-15

    def test_sin_pi_z_series(self):
        f = an.sin(an.affine(math.pi))
        assert abs(an.evaluate(f, 0.3 + 0.4j) - SIN_PI_Z) < 1e-14

    def test_sin_reflection(self):
        # sin(pi z) sin(pi (1 - z)) = sin(pi z)^2
        f = an.sin(an.affine(math.pi))
        z = 0.3 + 0.4j
        assert abs(an.evaluate(f, 1 - z) - an.evaluate(f, z)) < 1e-14

    def test_pole_raises(self):
        with pytest.raises(SingularPoint):
            an.evaluate(an.power(an.Z, -1), 0)

    def test_pole_eps_configurable(self):
        f = an.power(an.Z, -1)
        with pytest.raises(SingularPoint):
            an.evaluate(f, 1e-6, eps=1e-5)
        assert an.evaluate(f, 1e-6) == pytest.approx(1e6)

    def test_log_branch_point(self):
        with pytest.raises(SingularPoint):
            an.evaluate(an.log(), 0)

    def test_log_cut(self):
        with pytest.raises(DomainError):
            an.evaluate(an.log(), -2.0)

    def test_mask(self):
        out = an.evaluate(an.log(), np.array([-2.0, 0.0, 1.0]), errors="mask")
        assert np.isnan(out[0]) and np.isnan(out[1]) and out[2] == 0

    def test_nonfinite_input(self):
        with pytest.raises(ValueError):
            an.evaluate(an.Z, np.nan)

    def test_operators(self):
        f = (an.Z + 1) * (an.Z - 1) / (an.Z ** 2 + 1)
        z = 0.3 + 0.7j
        assert abs(an.evaluate(f, z) - (z * z - 1) / (z * z + 1)) < 1e-15

    def test_integer_powers_only(self):
        with pytest.raises(TypeError):
            an.Z ** 0.5


class TestDeriv:
    def test_z2(self):
        d = an.deriv(an.power(an.Z, 2))
        assert abs(an.evaluate(d, 1.5 + 1j) - 2 * (1.5 + 1j)) < 1e-15

    def test_log(self):
        d = an.deriv(an.log())
        z = 0.4 - 0.9j
        assert abs(an.evaluate(d, z) - 1 / z) < 1e-15

    def test_jacobi_rules(self):
        k, u = 0.6, 0.3 + 0.2j
        for f in (an.sn(an.Z, k), an.cn(an.Z, k), an.dn(an.Z, k)):
            assert abs(an.evaluate(f.deriv(), u) - central(f, u, 1e-5)) < 1e-8

    def test_order_two_convergence(self):
        f = an.exp(an.sin())
        z = 0.3 + 0.2j
        exact = an.evaluate(an.deriv(f), z)
        e1 = abs(central(f, z, 1e-2) - exact)
        e2 = abs(central(f, z, 5e-3) - exact)
        assert 0.2 < e2 / e1 < 0.3

    @pytest.mark.parametrize("f", BASIS, ids=str)
    def test_basis(self, f):
        rng = np.random.default_rng(1)
        pts = safe_points(f, rng)
        assert len(pts) == 50
        d = an.deriv(f)
        err = np.abs(an.evaluate(d, pts) - central(f, pts, 1e-4))
        assert np.max(err) <= 1e-6

    def test_random_compositions(self):
        rng = np.random.default_rng(7)
        checked = 0
        for _ in range(100):
            f = random_expr(rng)
            pts = safe_points(f, rng)
            if len(pts) < 10:
                continue  # mostly singular in the box
            err = np.abs(an.evaluate(an.deriv(f), pts) - central(f, pts, 1e-4))
            assert np.max(err) <= 1e-6, str(f)
            checked += 1
        assert checked >= 80


class TestHarmonicParts:
    @pytest.mark.parametrize("f", [an.exp(an.sin()), an.sn(an.Z, 0.5), an.log(an.affine(1, 3))], ids=str)
    def test_laplacian_drops_fourfold(self, f):
        z = np.array([0.2 + 0.1j, -0.3 + 0.25j, 0.45 - 0.2j])
        for part in (np.real, np.imag):
            h = lambda w: part(an.evaluate(f, w))  # noqa: E731
            r = [discrete_laplacian_residual(h, z, 0.04 / 2 ** j) for j in range(3)]
            assert 0.2 < r[1] / r[0] < 0.35
            assert 0.2 < r[2] / r[1] < 0.35


class TestSingularities:
    def test_pole(self):
        s = an.power(an.affine(2, -1), -2).singularities()
        assert s.poles == (0.5 + 0j,) and s.complete

    def test_log_cut_direction(self):
        s = an.log(an.affine(1, -1)).singularities()
        assert s.branch_points == (1 + 0j,)
        origin, direction = s.cuts[0]
        assert abs(direction - (-1)) < 1e-15

    def test_incomplete_for_nonaffine(self):
        s = an.power(an.sin(), -1).singularities()
        assert not s.complete


class TestLaurent:
    def test_antiderivative(self):
        f = 1 + an.Z ** 2 - 3 * an.Z ** -2
        F = an.antiderivative(f)
        z = 0.7 + 0.4j
        assert abs(an.evaluate(F, z) - (z + z ** 3 / 3 + 3 / z)) < 1e-14

    def test_no_log_term(self):
        assert an.antiderivative(an.Z ** -1) is None
        assert an.antiderivative(an.exp()) is None


class TestPrimitive:
    def test_matches_closed_form(self):
        p = an.Primitive(an.exp(), 0j)
        z = 0.5 + 1.2j
        assert abs(an.evaluate(p, z) - (cmath.exp(z) - 1)) < 1e-12

    def test_path_independence(self):
        f = an.cosh() * an.Z
        direct = an.integrate_path(f, [0, 1 + 1j])
        corner = an.integrate_path(f, [0, 1, 1 + 1j])
        assert abs(direct - corner) < 1e-10

    def test_through_pole(self):
        with pytest.raises(PathThroughSingularity):
            an.integrate_path(an.power(an.Z, -2), [-1, 1])

    def test_derivative_is_integrand(self):
        p = an.Primitive(an.sin(), 0j)
        assert p.deriv() is p.integrand


class TestParse:
    @pytest.mark.parametrize("text,z,expected", [
        ("z^2 + 1", 2.0, 5.0),
        ("2*z - 3", 1.0, -1.0),
        ("exp(i*pi)", 0.0, -1.0),
        ("1/z", 4.0, 0.25),
        ("z**-2", 2.0, 0.25),
        ("-z^2", 3.0, -9.0),
        ("sn(z; 0)", 1.1, math.sin(1.1)),
        ("cosh(z) - sinh(z)", 0.7, math.exp(-0.7)),
        ("log(z)", 1j, 1j * math.pi / 2),
        ("1e-3*z", 2.0, 2e-3),
    ])
    def test_values(self, text, z, expected):
        assert abs(an.evaluate(parse_expression(text), z) - expected) < 1e-14

    @pytest.mark.parametrize("text", ["", "z^^2", "z^0.5", "foo(z)", "(z", "sn(z)", "sn(z; z)", "z z", "2 +"])
    def test_errors(self, text):
        with pytest.raises(ExpressionParseError):
            parse_expression(text)

    @pytest.mark.parametrize("f", BASIS + [an.exp(an.sin()) * an.Z ** -1 - 2j], ids=str)
    def test_round_trip_basis(self, f):
        g = parse_expression(str(f))
        z = np.array([0.3 + 0.4j, -0.7 + 0.2j, 1.1 - 0.5j])
        assert np.max(np.abs(an.evaluate(g, z) - an.evaluate(f, z))) < 1e-13

    @given(st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_random(self, seed):
        f = random_expr(np.random.default_rng(seed))
        g = parse_expression(str(f))
        z = np.array([0.31 + 0.17j, -0.23 + 0.41j])
        a = an.evaluate(f, z, errors="mask")
        b = an.evaluate(g, z, errors="mask")
        ok = np.isfinite(a)
        assert np.array_equal(ok, np.isfinite(b))
        assert np.all(np.abs(a[ok] - b[ok]) <= 1e-12 * np.maximum(1, np.abs(a[ok])))
