import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from enneper.errors import InsideConvergenceRadius
from enneper.motifs import MotifConfiguration, dipole
from enneper.multipole import (
    error_table,
    exact_field,
    multipole_coeffs,
    multipole_eval,
    truncation_error_estimate,
)
from enneper.verify import periodic_distance


def fft_coeffs(cfg, K, center=0j, n=256):
    """c_k read off the Taylor series of sum_j p_j log(1 - w_j t) sampled on
    a small circle in t (t = 1/zeta), via the FFT."""
    w = cfg.centers - center
    rho = 0.5 / max(np.max(np.abs(w)), 1e-12)
    t = rho * np.exp(2j * np.pi * np.arange(n) / n)
    F = sum(p * np.log(1 - wj * t) for p, wj in zip(cfg.pitches, w))
    a = np.fft.fft(F) / n
    return np.array([a[k] / rho ** k for k in range(1, K + 1)])


def random_cfg(rng, n):
    z = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
    p = rng.uniform(-2, 2, n)
    return MotifConfiguration.build(list(zip(p, z)))


class TestCoeffs:
    def test_centred_charge(self):
        e = multipole_coeffs(MotifConfiguration.build([(2.5, 0)]), 6)
        assert e.p == 2.5 and all(c == 0 for c in e.c) and e.r_min == 0

    def test_off_centre_charge(self):
        p0, z0 = 1.3, 0.4 - 0.7j
        e = multipole_coeffs(MotifConfiguration.build([(p0, z0)]), 30)
        for k, c in enumerate(e.c, 1):
            ref = -p0 * z0 ** k / k
            assert abs(c - ref) <= 1e-13 * abs(ref)

    def test_dipole(self):
        p, R = 1.5, 2.0
        e = multipole_coeffs(dipole(p, R), 5)
        assert e.p == 0
        assert abs(e.c[0] + p * R) < 1e-15
        assert e.c[1] == 0 and e.c[3] == 0
        assert abs(e.c[2] + p * R ** 3 / 12) < 1e-14

    def test_fft_oracle(self):
        cfg = random_cfg(np.random.default_rng(5), 5)
        e = multipole_coeffs(cfg, 12, 0.1j)
        ref = fft_coeffs(cfg, 12, 0.1j)
        assert np.max(np.abs(np.array(e.c) - ref) / np.maximum(np.abs(ref), 1e-3)) < 1e-10

    def test_recentre_single_charge(self):
        p0, z0, c = 1.0, 0.5 + 0.5j, -0.2 + 0.1j
        e = multipole_coeffs(MotifConfiguration.build([(p0, z0)]), 8, c)
        for k, ck in enumerate(e.c, 1):
            assert abs(ck + p0 * (z0 - c) ** k / k) < 1e-15

    @given(st.integers(0, 1000))
    @settings(max_examples=25, deadline=None)
    def test_additivity(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_cfg(rng, 3), random_cfg(rng, 2)
        ea, eb = multipole_coeffs(a, 10), multipole_coeffs(b, 10)
        em = multipole_coeffs(a.merged(b), 10)
        assert abs(em.p - (ea.p + eb.p)) <= 1e-14 * max(1, abs(em.p))
        for x, y, m in zip(ea.c, eb.c, em.c):
            assert abs(m - (x + y)) <= 1e-14 * max(1, abs(x) + abs(y))

    def test_negative_K(self):
        with pytest.raises(ValueError):
            multipole_coeffs(dipole(1, 1), -1)


class TestEval:
    def test_K0_centred(self):
        e = multipole_coeffs(MotifConfiguration.build([(1.7, 1j)]), 0, 1j)
        z = np.array([2 + 3j, -1 - 1j])
        assert np.max(np.abs(multipole_eval(e, z) - 1.7 * np.angle(z - 1j))) < 1e-15

    def test_inside_raises(self):
        e = multipole_coeffs(dipole(1, 2), 3)
        with pytest.raises(InsideConvergenceRadius):
            multipole_eval(e, 1.02)
        with pytest.raises(InsideConvergenceRadius):
            truncation_error_estimate(e, dipole(1, 2), 0.5)

    def test_single_charge_tail(self):
        p0, z0 = 1.0, 0.3 + 0.4j
        cfg = MotifConfiguration.build([(p0, z0)])
        e = multipole_coeffs(cfg, 30)
        z = 4 * abs(z0) * np.exp(1j * np.linspace(-3, 3, 50))
        q = 0.25
        d = periodic_distance(multipole_eval(e, z) - exact_field(cfg, z), 2 * np.pi * p0)
        assert np.max(d) <= p0 * q ** 31 / (1 - q) + 1e-15

    def test_dipole_K3(self):
        cfg = dipole(1.0, 1.0)
        e = multipole_coeffs(cfg, 3)
        rows = error_table(cfg, e, [10.0])
        assert len(rows) == 64
        assert max(abs(r[2] - r[3]) for r in rows) < 1e-3

    def test_bound_vanishes(self):
        cfg = dipole(1.0, 1.0)
        e = multipole_coeffs(cfg, 3)
        assert truncation_error_estimate(e, cfg, 1e8) < 1e-30
        b = [truncation_error_estimate(multipole_coeffs(cfg, K), cfg, 2.0) for K in (1, 5, 20)]
        assert b[0] > b[1] > b[2] > 0

    def test_bound_holds_random(self):
        rng = np.random.default_rng(11)
        worst = 0.0
        for _ in range(500):
            cfg = random_cfg(rng, int(rng.integers(1, 6)))
            K = int(rng.integers(0, 12))
            e = multipole_coeffs(cfg, K)
            r = e.r_min * rng.uniform(1.1, 20)
            z = r * np.exp(1j * rng.uniform(-np.pi, np.pi))
            err = abs(exact_field(cfg, z, gauge="matched") - multipole_eval(e, z))
            bound = truncation_error_estimate(e, cfg, r)
            assert err <= bound * (1 + 1e-9) + 1e-13
            worst = max(worst, err / bound if bound > 0 else 0)
        assert worst > 0.01  # the bound is not vacuous

    @pytest.mark.parametrize("K", [1, 4, 8])
    def test_decay_slope(self, K):
        cfg = random_cfg(np.random.default_rng(2), 5)
        e = multipole_coeffs(cfg, K)
        radii = e.r_min * np.geomspace(3, 30, 6)
        err = []
        for r in radii:
            z = r * np.exp(1j * np.linspace(-np.pi, np.pi, 128, endpoint=False))
            err.append(np.max(np.abs(exact_field(cfg, z, gauge="matched") - multipole_eval(e, z))))
        slope = np.polyfit(np.log(radii), np.log(err), 1)[0]
        assert slope <= -(K + 1) + 0.1

    def test_gauge_difference_is_multiple_of_2pi(self):
        cfg = random_cfg(np.random.default_rng(8), 4)
        z = 10 * np.exp(1j * np.linspace(-3, 3, 30))
        d = exact_field(cfg, z, gauge="matched") - exact_field(cfg, z)
        # each term shifts by an integer multiple of 2 pi p_j
        assert np.all(periodic_distance(d, 2 * np.pi * cfg.pitches) < 1e-12)

    def test_bad_gauge(self):
        with pytest.raises(ValueError):
            exact_field(dipole(1, 1), 5.0, gauge="x")
