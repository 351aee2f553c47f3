import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.interpolate import BSpline

from igacuf.errors import DomainError, RefinementError
from igacuf.nurbs import (KnotVector, NurbsPatch, basis_matrix, elevate_degree, eval_basis, find_span,
                          insert_knot, make_circle_mesh, make_circle_patch, make_square_patch,
                          open_uniform, rational_basis, refine_uniform, surface_point)

FIG1 = KnotVector(3, [0, 0, 0, 0, 1 / 3, 1 / 3, 1 / 3, 0.5, 2 / 3, 1, 1, 1, 1])
SINGLE = KnotVector(2, [0, 0, 0, 1, 1, 1])


def scipy_basis(kv, xi, nu=0):
    out = np.zeros(kv.n_basis)
    for i in range(kv.n_basis):
        c = np.zeros(kv.n_basis)
        c[i] = 1.0
        out[i] = BSpline(kv.knots, c, kv.degree, extrapolate=False)(xi, nu)
    return np.nan_to_num(out)


class TestKnotVector:
    def test_rejects_non_open(self):
        with pytest.raises(ValueError):
            KnotVector(2, [0, 0, 0.5, 1, 1, 1])

    def test_rejects_decreasing(self):
        with pytest.raises(ValueError):
            KnotVector(1, [0, 0, 0.6, 0.4, 1, 1])

    def test_rejects_excess_multiplicity(self):
        with pytest.raises(ValueError):
            KnotVector(2, [0, 0, 0, 0.5, 0.5, 0.5, 1, 1, 1])

    def test_counts(self):
        assert FIG1.n_basis == 9
        assert FIG1.multiplicity(1 / 3) == 3
        assert FIG1.domain == (0.0, 1.0)
        assert open_uniform(3, 4).n_basis == 7

    def test_greville_of_uniform(self):
        np.testing.assert_allclose(open_uniform(1, 4).greville(), np.linspace(0, 1, 5))


class TestFindSpan:
    def test_linear_scan_oracle(self):
        assert find_span(FIG1, 0.4) == 6
        for xi in np.linspace(0, 0.999, 37):
            expected = max(i for i in range(len(FIG1.knots) - 1) if FIG1.knots[i] <= xi < FIG1.knots[i + 1])
            assert find_span(FIG1, xi) == expected

    def test_single_span(self):
        assert find_span(SINGLE, 0.5) == 2
        assert find_span(SINGLE, 1.0) == 2

    def test_right_end_maps_to_last_span(self):
        assert find_span(FIG1, 1.0) == FIG1.n_basis - 1

    @pytest.mark.parametrize("xi", [-0.1, 1.5, np.nan])
    def test_out_of_range(self, xi):
        with pytest.raises(DomainError):
            find_span(FIG1, xi)


class TestBasis:
    @pytest.mark.parametrize("kv", [FIG1, open_uniform(3, 5), open_uniform(4, 3),
                                    KnotVector(3, [0, 0, 0, 0, 0.3, 0.3, 0.7, 1, 1, 1, 1])])
    @pytest.mark.parametrize("xi", [0.0, 0.05, 1 / 3, 0.4, 0.55, 0.999, 1.0])
    def test_matches_scipy(self, kv, xi):
        be = eval_basis(kv, xi)
        full = np.zeros(kv.n_basis)
        dfull = np.zeros(kv.n_basis)
        full[be.first_index:be.first_index + kv.degree + 1] = be.values
        dfull[be.first_index:be.first_index + kv.degree + 1] = be.derivs
        if xi < 1.0:
            np.testing.assert_allclose(full, scipy_basis(kv, xi), atol=1e-14)
            np.testing.assert_allclose(dfull, scipy_basis(kv, xi, 1), atol=1e-11)
        assert abs(full.sum() - 1.0) <= 1e-12

    def test_interpolates_at_full_multiplicity_knot(self):
        be = eval_basis(FIG1, 1 / 3)
        assert np.sum(be.values == 1.0) == 1
        assert np.count_nonzero(be.values) == 1

    def test_interpolatory_ends(self):
        B = basis_matrix(FIG1, [0.0, 1.0])
        assert B[0, 0] == 1.0 and B[1, -1] == 1.0

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.0, 1.0), st.integers(1, 5), st.integers(1, 6))
    def test_partition_of_unity(self, xi, p, nel):
        be = eval_basis(open_uniform(p, nel), xi)
        assert abs(be.values.sum() - 1.0) <= 1e-12
        assert np.all(be.values >= -1e-15)
        assert abs(be.derivs.sum()) <= 1e-9

    @pytest.mark.parametrize("xi", [0.13, 0.47, 0.81])
    def test_derivative_fd(self, xi):
        kv = open_uniform(4, 5)
        eps = 1e-6
        fd = (basis_matrix(kv, xi + eps) - basis_matrix(kv, xi - eps)) / (2 * eps)
        be = eval_basis(kv, xi)
        exact = np.zeros(kv.n_basis)
        exact[be.first_index:be.first_index + 5] = be.derivs
        assert np.max(np.abs(fd[0] - exact)) <= 1e-6 * np.max(np.abs(exact))


class TestSurface:
    def test_square_is_affine(self):
        patch = make_square_patch(2.0, 3, 4)
        ev = surface_point(patch, 0.3, 0.8)
        np.testing.assert_allclose(ev.point, [0.6, 1.6], atol=1e-14)
        np.testing.assert_allclose(ev.dpoint, 2.0 * np.eye(2), atol=1e-13)

    def test_rational_partition_and_fd(self):
        patch = make_circle_mesh(0.5, 3, 4)
        xi, eta, eps = 0.37, 0.61, 1e-6
        ev = surface_point(patch, xi, eta)
        assert abs(ev.R.sum() - 1.0) <= 1e-12
        assert np.abs(ev.dR.sum(axis=1)).max() <= 1e-10
        fd_u = (surface_point(patch, xi + eps, eta).point - surface_point(patch, xi - eps, eta).point) / (2 * eps)
        fd_v = (surface_point(patch, xi, eta + eps).point - surface_point(patch, xi, eta - eps).point) / (2 * eps)
        np.testing.assert_allclose(ev.dpoint[:, 0], fd_u, rtol=1e-6, atol=1e-9)
        np.testing.assert_allclose(ev.dpoint[:, 1], fd_v, rtol=1e-6, atol=1e-9)

    @pytest.mark.parametrize("t", np.linspace(0, 1, 7))
    def test_circle_boundary_exact(self, t):
        patch = make_circle_patch(0.5)
        for xi, eta in ((t, 0.0), (t, 1.0), (0.0, t), (1.0, t)):
            assert abs(np.sum(surface_point(patch, xi, eta).point ** 2) - 0.25) <= 1e-14

    def test_circle_centre(self):
        np.testing.assert_allclose(surface_point(make_circle_patch(), 0.5, 0.5).point, [0, 0], atol=1e-15)


class TestRefinement:
    def _samples(self, patch, n=6):
        g = np.linspace(0, 1, n)
        return np.array([surface_point(patch, u, v).point for u in g for v in g])

    def test_insert_preserves_geometry(self):
        patch = make_circle_patch()
        new = insert_knot(patch, 0, 0.3)
        assert new.shape == (4, 3)
        np.testing.assert_allclose(self._samples(new), self._samples(patch), atol=1e-14)

    def test_elevate_preserves_geometry(self):
        patch = make_circle_patch()
        new = elevate_degree(elevate_degree(patch, 0, 2), 1, 1)
        assert new.degrees == (4, 3)
        np.testing.assert_allclose(self._samples(new), self._samples(patch), atol=1e-14)

    def test_refine_uniform(self):
        patch = make_circle_mesh(0.5, 3, 13)
        assert patch.shape == (16, 16)
        assert len(patch.elements()) == 169
        np.testing.assert_allclose(self._samples(patch), self._samples(make_circle_patch()), atol=1e-13)

    def test_insert_overflow(self):
        patch = make_square_patch(1.0, 2, 2)
        patch = insert_knot(patch, 0, 0.5)
        with pytest.raises(RefinementError):
            insert_knot(patch, 0, 0.5)

    def test_insert_outside(self):
        with pytest.raises(RefinementError):
            insert_knot(make_square_patch(1.0, 2, 2), 1, 1.2)

    def test_boundary_indices(self):
        patch = make_square_patch(1.0, 2, 3)
        b = patch.boundary_indices()
        n, m = patch.shape
        assert set(b) == {"xi0", "xi1", "eta0", "eta1"}
        np.testing.assert_array_equal(b["xi0"], np.arange(m))
        assert all(len(v) == n for v in b.values())
