"""Velocity periodization: plateau, antiderivatives, extension optimizer."""

import numpy as np
import pytest
from scipy.integrate import quad

from vlamap import PeriodizedVelocity, build_grid, mollifier_eta, optimize_extension
from vlamap.errors import (
    ConfigurationError,
    DegenerateInputError,
    PreconditionError,
    RootNotFoundError,
)
from vlamap.periodize import (
    _ETA_NORM,
    build_g,
    build_h,
    build_sigma,
    periodic_antiderivative,
)


class TestMollifier:
    def test_outside_support(self):
        assert mollifier_eta(1.5) == 0.0
        assert mollifier_eta(-1.0) == 0.0
        assert np.array_equal(mollifier_eta(np.array([2.0, -3.0])), [0.0, 0.0])

    def test_center_value(self):
        assert mollifier_eta(0.0) == pytest.approx(np.exp(-1.0) / _ETA_NORM, rel=1e-14)

    def test_normalization_against_adaptive_quadrature(self):
        # independent oracle for the bump-area constant
        oracle, err = quad(lambda s: np.exp(-1.0 / (1.0 - s * s)), -1, 1, limit=200)
        assert err < 1e-9
        assert abs(_ETA_NORM - oracle) < 1e-12
        assert _ETA_NORM == pytest.approx(0.443994, abs=1e-5)

    def test_unit_mass(self):
        s = np.linspace(-1, 1, 20001)
        assert np.trapezoid(mollifier_eta(s), s) == pytest.approx(1.0, abs=1e-7)


class TestSigmaH:
    def setup_method(self):
        self.Lv = 4 * np.pi
        self.a = 0.2 * np.pi
        self.v = -self.Lv + (2 * self.Lv / 1024) * np.arange(1024)

    def test_sigma_core_is_one(self):
        sigma = build_sigma(self.v, self.Lv, self.a)
        core = np.abs(self.v) <= 3.8 * np.pi
        assert np.array_equal(sigma[core], np.ones(core.sum()))

    def test_sigma_seam_value(self):
        sigma = build_sigma(np.array([-self.Lv]), self.Lv, self.a)
        expected = 1.0 - (self.Lv / self.a**2) * np.exp(-1.0) / _ETA_NORM
        assert sigma[0] == pytest.approx(expected, rel=1e-13)

    def test_sigma_symmetric(self):
        sigma = build_sigma(self.v, self.Lv, self.a)
        j = np.arange(self.v.size)
        jm = (self.v.size - j) % self.v.size
        assert np.abs(sigma - sigma[jm]).max() < 1e-12

    def test_sigma_range_check(self):
        with pytest.raises(ConfigurationError):
            build_sigma(self.v, self.Lv, 0.0)
        with pytest.raises(ConfigurationError):
            build_sigma(self.v, self.Lv, self.Lv)

    def test_constant_sigma_degenerate(self):
        with pytest.raises(DegenerateInputError):
            build_h(np.ones(64))

    def test_h_plateau_and_mean(self):
        h = build_h(build_sigma(self.v, self.Lv, self.a))
        core = np.abs(self.v) <= 3.8 * np.pi
        assert np.array_equal(h[core], np.ones(core.sum()))
        assert h.max() == 1.0
        assert abs(h.mean()) < 1e-12


class TestAntiderivative:
    def test_zero_in_zero_out(self):
        g = periodic_antiderivative(np.zeros(64), 2.0, 32)
        assert np.array_equal(g, np.zeros(64))

    def test_cosine(self):
        n = 128
        x = 2 * np.pi * np.arange(n) / n
        g = periodic_antiderivative(np.cos(x), 2 * np.pi, 0)
        assert np.abs(g - np.sin(x)).max() < 1e-12

    def test_nonzero_mean_rejected(self):
        with pytest.raises(PreconditionError):
            periodic_antiderivative(np.ones(64), 2.0, 0)

    def test_build_g_zero_at_origin(self):
        n = 256
        v = -np.pi + 2 * np.pi * np.arange(n) / n
        g = build_g(np.sin(v), v)
        assert g[n // 2] == 0.0


class TestPeriodizedVelocity:
    @pytest.mark.parametrize("Nv", [512, 1024])
    def test_core_exactness(self, landau_domain, Nv):
        grid = build_grid(landau_domain, 32, Nv)
        pv = PeriodizedVelocity.build(grid.v, landau_domain.Lv, landau_domain.v_star)
        core = np.abs(grid.v) <= landau_domain.v_star
        assert np.abs(pv.h[core] - 1.0).max() < 1e-12
        assert np.abs(pv.g[core] - grid.v[core]).max() < 1e-8
        assert abs(pv.h.mean()) < 1e-12

    def test_two_stream_core(self, two_stream_domain):
        grid = build_grid(two_stream_domain, 32, 512)
        pv = PeriodizedVelocity.build(grid.v, two_stream_domain.Lv,
                                      two_stream_domain.v_star)
        core = np.abs(grid.v) <= two_stream_domain.v_star
        assert np.abs(pv.g[core] - grid.v[core]).max() < 1e-8
        assert pv.a == pytest.approx(0.25 * np.pi, rel=1e-13)

    def test_symmetries(self, landau_domain):
        grid = build_grid(landau_domain, 32, 512)
        pv = PeriodizedVelocity.build(grid.v, landau_domain.Lv, landau_domain.v_star)
        j = np.arange(512)
        jm = (512 - j) % 512
        assert np.abs(pv.h - pv.h[jm]).max() < 1e-11 * np.abs(pv.h).max()
        assert np.abs(pv.g + pv.g[jm]).max() < 1e-12 * np.abs(pv.g).max() + 1e-12

    def test_periodic_wraparound_of_g(self, landau_domain):
        # continuing g across the seam by one-cell quadrature of h lands back
        # on g(first node); the well is steep so the closure is only O(hv^2)
        grid = build_grid(landau_domain, 32, 1024)
        pv = PeriodizedVelocity.build(grid.v, landau_domain.Lv, landau_domain.v_star)
        jump = pv.g[0] - (pv.g[-1] + grid.hv * 0.5 * (pv.h[-1] + pv.h[0]))
        assert abs(jump) < 1e-2
        # as a function g is exactly periodic: doubling the internal
        # refinement leaves the returned samples unchanged to round-off
        pv2 = PeriodizedVelocity.build(grid.v, landau_domain.Lv,
                                       landau_domain.v_star, fine_min=16384)
        assert np.abs(pv.g - pv2.g).max() < 1e-10

    def test_extension_overlapping_core_rejected(self, landau_domain):
        grid = build_grid(landau_domain, 32, 256)
        with pytest.raises(ConfigurationError):
            PeriodizedVelocity.build(grid.v, landau_domain.Lv,
                                     landau_domain.v_star, a=np.pi)


class TestOptimizeExtension:
    def test_efficiency_definition(self):
        a, eff = optimize_extension(512, 3.8 * np.pi)
        assert eff == pytest.approx(3.8 * np.pi / (a + 3.8 * np.pi), rel=1e-14)
        assert 0.0 < eff < 1.0

    def test_monotone_in_grid_size(self):
        vs = 3.8 * np.pi
        roots = [optimize_extension(N, vs)[0] for N in (128, 256, 512, 1024)]
        assert all(a1 > a2 for a1, a2 in zip(roots, roots[1:]))

    def test_residual_at_root(self):
        N, vs = 512, 3.8 * np.pi
        a, _ = optimize_extension(N, vs)

        def residual(a_):
            n_a = a_ * N / (a_ + vs)
            return (4 * (a_ + vs) ** 3 / N**4
                    - n_a ** -1.75 * np.exp(-np.sqrt(n_a))
                    * ((vs / (4 * a_)) * (2 * np.sqrt(n_a) + 7) - 1))

        assert abs(residual(a)) < 1e-12

    def test_invalid_inputs(self):
        with pytest.raises(ConfigurationError):
            optimize_extension(8, 1.0)
        with pytest.raises(ConfigurationError):
            optimize_extension(512, -1.0)

    def test_no_sign_change_reported(self):
        # v_star tiny enough that the bracket never crosses zero
        with pytest.raises(RootNotFoundError):
            optimize_extension(16, 1e-6)
