import numpy as np
import pytest

from accr.corpus import flat_norden_base, hsphere_base
from accr.errors import (
    BadSignature,
    BaseNotHolomorphic,
    NotAntisymmetric,
    RNotNegative,
)
from accr.models import (
    chart_model,
    cone_model,
    coordinate_derivatives,
    lie_group_model,
    product_extension,
)
from tests.conftest import ORIGIN


class TestLieGroupModel:
    def test_example1_valid(self, ex1):
        c = ex1.model.commutators_at(ORIGIN)
        assert c[2, 0, 1] == 1.0 and c[1, 0, 2] == -1.0
        assert np.max(np.abs(c + np.swapaxes(c, 1, 2))) == 0.0

    def test_abelian_flat(self):
        m = lie_group_model(1, np.zeros((3, 3, 3)), np.diag([1.0, 1.0, -1.0]))
        from accr.connection import levi_civita

        assert np.max(np.abs(levi_civita(m, ORIGIN).gamma)) == 0.0

    def test_example2_dim5(self, ex2):
        assert ex2.model.dim == 5

    def test_jacobi_identity(self, ex1, ex2, ex2_generic):
        for cm in (ex1, ex2, ex2_generic):
            assert cm.model.jacobi_residual() == 0.0

    def test_rejects_non_antisymmetric(self):
        c = np.zeros((3, 3, 3))
        c[0, 1, 2] = 1.0  # missing the mirrored entry
        with pytest.raises(NotAntisymmetric):
            lie_group_model(1, c, np.diag([1.0, 1.0, -1.0]))

    def test_rejects_bad_signature(self):
        with pytest.raises(BadSignature):
            lie_group_model(1, np.zeros((3, 3, 3)), np.eye(3))

    def test_invariant_fields_have_zero_derivative(self, ex1):
        d = ex1.model.frame_derivative(ORIGIN, lambda p: np.eye(3))
        assert np.max(np.abs(d)) == 0.0


class TestChartModel:
    def test_flat_chart(self):
        m = chart_model(3, lambda x: np.diag([1.0, 1.0, -1.0]))
        p = np.array([0.3, -0.2, 0.5])
        assert np.max(np.abs(m.commutators_at(p))) == 0.0
        assert np.max(np.abs(m.metric_derivs_at(p))) < 1e-11

    def test_fd_on_quadratic(self):
        m = chart_model(2, lambda x: np.eye(2))
        f = lambda x: np.array(x[0] ** 2 + 3.0 * x[0] * x[1])
        p = np.array([0.7, -0.4])
        d = m.frame_derivative(p, f)
        assert abs(d[0] - (2 * 0.7 + 3 * (-0.4))) < 1e-7
        assert abs(d[1] - 3 * 0.7) < 1e-7

    def test_example1_coordinate_metric_at_origin(self, ex1_chart):
        g = ex1_chart.coord_metric_fn(np.zeros(3))
        assert np.allclose(g, np.diag([1.0, 1.0, -1.0]), atol=1e-15)

    def test_example2_chart_metric_assembly(self, ex2_chart):
        # sum_k eps_k (e^k)^2 against the closed-form coordinate metric
        eps = np.array([1.0, 1.0, 1.0, -1.0, -1.0])
        for p in ex2_chart.model.sample_points(20, 11):
            th = ex2_chart.coframe_fn(p)
            assembled = np.einsum("k,km,kn->mn", eps, th, th)
            assert np.max(np.abs(assembled - ex2_chart.coord_metric_fn(p))) < 1e-10

    def test_structure_equations_from_coframe(self, ex1_chart, ex1):
        c_lie = ex1.model.commutators_at(ORIGIN)
        for p in ex1_chart.model.sample_points(6, 3):
            c = ex1_chart.model.commutators_at(p)
            assert np.max(np.abs(c - c_lie)) < 1e-7

    def test_commutators_antisymmetric_everywhere(self, ex1_chart, ex2_chart, ex3):
        for cm in (ex1_chart, ex2_chart, ex3):
            for p in cm.model.sample_points(4, 2):
                c = cm.model.commutators_at(p)
                assert np.max(np.abs(c + np.swapaxes(c, 1, 2))) == 0.0


class TestProductExtension:
    def test_flat_base_matches_chart_form(self, ex1_chart):
        base = flat_norden_base(1)
        model, s = product_extension(base)
        p0 = np.zeros(3)
        assert np.allclose(model.metric_at(p0), np.diag([1.0, 1.0, -1.0]), atol=1e-15)
        for t in (0.3, -0.7, 1.1):
            p = np.array([t, 0.4, -0.2])
            assert np.max(np.abs(model.metric_at(p) - ex1_chart.coord_metric_fn(p))) < 1e-14

    def test_metric_periodicity(self):
        model, _ = product_extension(flat_norden_base(1))
        p = np.array([0.37, 0.1, -0.5])
        q = p.copy()
        q[0] += np.pi
        assert np.max(np.abs(model.metric_at(p) - model.metric_at(q))) < 1e-12

    def test_structure_identities_exact(self):
        _, s = product_extension(flat_norden_base(2))
        phi, xi, eta = s.phi_at(ORIGIN), s.xi_at(ORIGIN), s.eta_at(ORIGIN)
        assert eta @ xi == 1.0
        assert np.max(np.abs(phi @ xi)) == 0.0
        assert np.max(np.abs(eta @ phi)) == 0.0

    def test_horizontal_metrics_rotate(self, ex3):
        # g|_H = cos 2t h' - sin 2t htilde', gtilde|_H = sin 2t h' + cos 2t htilde'
        base = ex3.model.base
        for p in ex3.model.sample_points(5, 8):
            t, bp = p[0], p[1:]
            h, ht = base.h_at(bp), base.htilde_at(bp)
            g = ex3.model.metric_at(p)[1:, 1:]
            gt = ex3.structure.gtilde_at(p)[1:, 1:]
            assert np.max(np.abs(g - (np.cos(2 * t) * h - np.sin(2 * t) * ht))) < 1e-12
            assert np.max(np.abs(gt - (np.sin(2 * t) * h + np.cos(2 * t) * ht))) < 1e-12

    def test_analytic_t_derivative(self, ex3):
        p = ex3.model.sample_points(3, 5)[1]
        dg = ex3.model.metric_derivs_at(p)
        fd = coordinate_derivatives(ex3.model.metric_at, p, 1e-4)
        assert np.max(np.abs(dg - fd)) < 1e-9

    def test_rejects_non_holomorphic_base(self):
        # Norden pointwise but e^x is not the real part of a holomorphic
        # metric coefficient pair, so J fails to be parallel
        def metric(x):
            return np.diag([np.exp(x[0]), -np.exp(x[0])])

        bad = chart_model(2, metric, ranges=[(-0.5, 0.5)] * 2)
        from accr.models import HolomorphicBase

        base = HolomorphicBase(model=bad, j=np.array([[0.0, -1.0], [1.0, 0.0]]))
        with pytest.raises(BaseNotHolomorphic):
            product_extension(base)


class TestConeModel:
    def test_jcheck_squares_to_minus_id(self, ex1):
        cone, jf = cone_model(ex1.structure)
        for p in cone.sample_points(5, 2):
            J = jf.j_at(p)
            assert np.max(np.abs(J @ J + np.eye(4))) < 1e-12

    def test_metric_values_at_minus_one(self, ex1):
        cone, _ = cone_model(ex1.structure)
        G = cone.metric_at(np.array([-1.0]))
        g = ex1.model.metric_at(ORIGIN)
        # horizontal block matches r^2 g = g, radial component is -1/r^2 = -1
        assert np.allclose(G[1:3, 1:3], g[1:3, 1:3], atol=1e-14)
        assert G[3, 3] == pytest.approx(-1.0)
        # the vertical direction is normalized: the cone metric restricted
        # to xi equals 1 for every r (not r^2 + 1; see the design notes)
        assert G[0, 0] == pytest.approx(1.0)

    def test_anti_isometry(self, ex1):
        cone, jf = cone_model(ex1.structure)
        for p in cone.sample_points(4, 9):
            G = cone.metric_at(p)
            J = jf.j_at(p)
            assert np.max(np.abs(J.T @ G @ J + G)) < 1e-12

    def test_rejects_nonnegative_r(self, ex1):
        cone, _ = cone_model(ex1.structure)
        with pytest.raises(RNotNegative):
            cone.metric_at(np.array([0.5]))

    def test_analytic_r_derivative(self, ex1):
        cone, _ = cone_model(ex1.structure)
        p = np.array([-1.3])
        dg = cone.metric_derivs_at(p)
        fd = coordinate_derivatives(cone.metric_at, p, 1e-4)
        # base rows are exactly zero on a homogeneous base; the r-row is last
        assert np.max(np.abs(dg[:3])) == 0.0
        assert np.max(np.abs(dg[3] - fd[0])) < 1e-9

    def test_sample_includes_r_minus_one(self, ex1):
        cone, _ = cone_model(ex1.structure)
        pts = cone.sample_points(6, 42)
        assert any(abs(p[-1] + 1.0) < 1e-15 for p in pts)
        assert all(-2.0 <= p[-1] <= -0.5 for p in pts)


class TestHolomorphicBase:
    def test_hsphere_invariants(self):
        base = hsphere_base(2, 3.0, 4.0)
        for p in base.model.sample_points(6, 4):
            assert base.norden_residual(p) < 1e-12
            assert base.htilde_symmetry_residual(p) < 1e-12

    def test_hsphere_flat_at_center(self):
        base = hsphere_base(2, 1.0, 0.0)
        h = base.h_at(np.zeros(4))
        assert np.allclose(h, np.diag([1.0, 1.0, -1.0, -1.0]), atol=1e-15)

    def test_hsphere_analytic_derivs(self):
        base = hsphere_base(2, 1.0, 0.5)
        p = np.array([0.1, -0.05, 0.15, 0.08])
        dg = base.model.metric_derivs_at(p)
        fd = coordinate_derivatives(base.model.metric_at, p, 1e-4)
        assert np.max(np.abs(dg - fd)) < 1e-9
