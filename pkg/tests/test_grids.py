"""Grid construction, Hermite evaluation and jet assembly."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vlamap import (
    Domain,
    HermiteField2D,
    build_grid,
    hermite_eval,
    hermite_eval_grad,
    jet_from_stencil,
)
from vlamap.errors import ConfigurationError


def seed_polynomial(grid, coeffs):
    """Exact Hermite data of a tensor polynomial sum c_ij x^i v^j, i,j <= 3."""
    c = np.asarray(coeffs, dtype=float)

    def f(x, v):
        return sum(c[i, j] * x**i * v**j for i in range(4) for j in range(4))

    def fx(x, v):
        return sum(i * c[i, j] * x**(i - 1) * v**j
                   for i in range(1, 4) for j in range(4))

    def fv(x, v):
        return sum(j * c[i, j] * x**i * v**(j - 1)
                   for i in range(4) for j in range(1, 4))

    def fxv(x, v):
        return sum(i * j * c[i, j] * x**(i - 1) * v**(j - 1)
                   for i in range(1, 4) for j in range(1, 4))

    return HermiteField2D.from_callables(grid, f, fx, fv, fxv), f


class TestBuildGrid:
    def test_uniform_spacing(self):
        dom = Domain(4 * np.pi, 4 * np.pi, 3.8 * np.pi)
        g = build_grid(dom, 32, 32)
        assert g.hx == pytest.approx(np.pi / 8, rel=1e-15)
        # v covers [-Lv, Lv), so the spacing carries the full 2*Lv extent
        assert g.hv == pytest.approx(np.pi / 4, rel=1e-15)
        assert g.x[0] == 0.0
        assert g.v[0] == -4 * np.pi

    def test_two_stream_spacing(self):
        dom = Domain(2 * np.pi / 0.2, 5 * np.pi, 4.75 * np.pi)
        g = build_grid(dom, 64, 64)
        assert g.hx == pytest.approx(10 * np.pi / 64, rel=1e-15)

    def test_count_below_minimum(self):
        dom = Domain(4 * np.pi, 4 * np.pi, 3.8 * np.pi)
        with pytest.raises(ConfigurationError):
            build_grid(dom, 3, 32)
        with pytest.raises(ConfigurationError):
            build_grid(dom, 32, 11)
        with pytest.raises(ConfigurationError):
            build_grid(dom, 6, 5)

    def test_nodes_exclude_periodic_endpoint(self, small_grid):
        assert small_grid.x.max() < small_grid.domain.Lx
        assert small_grid.v.max() < small_grid.domain.Lv


class TestHermiteEval:
    def test_constant_reproduced(self, small_grid):
        fld = HermiteField2D(
            small_grid,
            np.full((32, 32), 2.5), np.zeros((32, 32)),
            np.zeros((32, 32)), np.zeros((32, 32)),
        )
        pts = np.array([0.3, 5.0, 11.9])
        assert hermite_eval(fld, pts, pts - 6) == pytest.approx([2.5] * 3, rel=1e-14)

    def test_cubic_polynomial_interior(self, small_grid):
        # oracle: direct polynomial evaluation of q(x, v) = x^3 v
        coeffs = np.zeros((4, 4))
        coeffs[3, 1] = 1.0
        fld, f = seed_polynomial(small_grid, coeffs)
        rng = np.random.default_rng(7)
        # stay away from the wrap cells, where the polynomial is not periodic
        x = rng.uniform(small_grid.hx, small_grid.domain.Lx - 2 * small_grid.hx, 200)
        v = rng.uniform(-small_grid.domain.Lv + small_grid.hv,
                        small_grid.domain.Lv - 2 * small_grid.hv, 200)
        got = hermite_eval(fld, x, v)
        want = f(x, v)
        scale = np.abs(fld.f).max()
        assert np.abs(got - want).max() < 1e-12 * scale

    def test_nodal_exactness_bitwise(self, small_grid):
        rng = np.random.default_rng(0)
        fld = HermiteField2D(small_grid, *(rng.standard_normal((32, 32))
                                           for _ in range(4)))
        X, V = small_grid.meshes()
        values = hermite_eval(fld, X, V)
        assert np.array_equal(values, fld.f)

    def test_periodicity(self, small_grid):
        rng = np.random.default_rng(1)
        fld = HermiteField2D(small_grid, *(rng.standard_normal((32, 32))
                                           for _ in range(4)))
        x = rng.uniform(0, small_grid.domain.Lx, 100)
        v = rng.uniform(-small_grid.domain.Lv, small_grid.domain.Lv, 100)
        base = hermite_eval(fld, x, v)
        Lx, Lv = small_grid.domain.Lx, small_grid.domain.Lv
        for dx_, dv_ in ((Lx, 0.0), (0.0, 2 * Lv), (-Lx, 2 * Lv)):
            shifted = hermite_eval(fld, x + dx_, v + dv_)
            assert np.abs(shifted - base).max() < 5e-13 * (1 + np.abs(base).max())

    def test_fourth_order_error_decay(self, landau_domain):
        # seeded sin(x)cos(v): doubling N cuts the max error ~16x
        errs = []
        for n in (32, 64):
            g = build_grid(landau_domain, n, n)
            fld = HermiteField2D.from_callables(
                g,
                lambda x, v: np.sin(x) * np.cos(v),
                lambda x, v: np.cos(x) * np.cos(v),
                lambda x, v: -np.sin(x) * np.sin(v),
                lambda x, v: -np.cos(x) * np.sin(v),
            )
            # probe the cell interiors, where the error peaks
            xs = (np.arange(4 * n) + 0.5) * landau_domain.Lx / (4 * n)
            vs = -landau_domain.Lv + (np.arange(4 * n) + 0.5) * g.hv / 2
            X, V = np.meshgrid(xs, vs, indexing="ij")
            errs.append(np.abs(hermite_eval(fld, X, V) - np.sin(X) * np.cos(V)).max())
        ratio = errs[0] / errs[1]
        assert 12 < ratio < 20


class TestHermiteGrad:
    def test_constant(self, small_grid):
        fld = HermiteField2D(
            small_grid, np.full((32, 32), 4.0), np.zeros((32, 32)),
            np.zeros((32, 32)), np.zeros((32, 32)),
        )
        val, gx, gv = hermite_eval_grad(fld, 1.234, -2.5)
        assert val == pytest.approx(4.0, rel=1e-14)
        assert gx == pytest.approx(0.0, abs=1e-13)
        assert gv == pytest.approx(0.0, abs=1e-13)

    def test_linear_gradient(self, small_grid):
        fld = HermiteField2D.from_callables(
            small_grid,
            lambda x, v: 2 * x + 3 * v,
            lambda x, v: np.full_like(x, 2.0),
            lambda x, v: np.full_like(x, 3.0),
            lambda x, v: np.zeros_like(x),
        )
        rng = np.random.default_rng(3)
        x = rng.uniform(small_grid.hx, small_grid.domain.Lx - 2 * small_grid.hx, 50)
        v = rng.uniform(-small_grid.domain.Lv + small_grid.hv,
                        small_grid.domain.Lv - 2 * small_grid.hv, 50)
        _, gx, gv = hermite_eval_grad(fld, x, v)
        assert np.abs(gx - 2.0).max() < 1e-12
        assert np.abs(gv - 3.0).max() < 1e-12

    def test_gradient_matches_central_difference(self, small_grid):
        rng = np.random.default_rng(5)
        fld = HermiteField2D(small_grid, *(rng.standard_normal((32, 32))
                                           for _ in range(4)))
        delta = 1e-5
        x = rng.uniform(1.0, 10.0, 40)
        v = rng.uniform(-10.0, 10.0, 40)
        _, gx, gv = hermite_eval_grad(fld, x, v)
        fd_x = (hermite_eval(fld, x + delta, v)
                - hermite_eval(fld, x - delta, v)) / (2 * delta)
        fd_v = (hermite_eval(fld, x, v + delta)
                - hermite_eval(fld, x, v - delta)) / (2 * delta)
        assert np.abs(fd_x - gx).max() < 1e-7
        assert np.abs(fd_v - gv).max() < 1e-7


class TestJetFromStencil:
    def test_cross_derivative_of_xv(self):
        # algebraic: f = x*v at (+-eps, +-eps) around the origin
        eps = 1e-3
        spp, spm, smp, smm = eps * eps, -eps * eps, -eps * eps, eps * eps
        val, ddx, ddv, ddxv = jet_from_stencil(spp, spm, smp, smm, eps)
        assert val == 0.0
        assert ddx == 0.0
        assert ddv == 0.0
        assert ddxv == pytest.approx(1.0, rel=1e-12)

    def test_constant_samples(self):
        val, ddx, ddv, ddxv = jet_from_stencil(3.0, 3.0, 3.0, 3.0, 0.01)
        assert (val, ddx, ddv, ddxv) == (3.0, 0.0, 0.0, 0.0)

    def test_linear_x(self):
        eps = 0.02
        val, ddx, ddv, ddxv = jet_from_stencil(eps, eps, -eps, -eps, eps)
        assert val == 0.0
        assert ddx == pytest.approx(1.0, rel=1e-14)
        assert ddv == 0.0
        assert ddxv == 0.0

    def test_componentwise_arrays(self):
        eps = 0.1
        a = np.array([1.0, 2.0])
        val, ddx, ddv, ddxv = jet_from_stencil(a, a, a, a, eps)
        assert np.array_equal(val, a)
        assert np.array_equal(ddx, np.zeros(2))

    def test_invalid_eps(self):
        with pytest.raises(ConfigurationError):
            jet_from_stencil(1.0, 1.0, 1.0, 1.0, 0.0)
        with pytest.raises(ConfigurationError):
            jet_from_stencil(1.0, 1.0, 1.0, 1.0, -1e-3)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=16, max_size=16), st.integers(0, 10**6))
def test_tensor_cubic_reproduction(coeffs, seed):
    dom = Domain(4 * np.pi, 4 * np.pi, 3.8 * np.pi)
    grid = build_grid(dom, 16, 16)
    fld, f = seed_polynomial(grid, np.array(coeffs).reshape(4, 4))
    rng = np.random.default_rng(seed)
    x = rng.uniform(grid.hx, dom.Lx - 2 * grid.hx, 30)
    v = rng.uniform(-dom.Lv + grid.hv, dom.Lv - 2 * grid.hv, 30)
    got = hermite_eval(fld, x, v)
    scale = max(1.0, np.abs(fld.f).max())
    assert np.abs(got - f(x, v)).max() < 1e-12 * scale
