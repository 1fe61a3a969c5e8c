import numpy as np
import pytest

from accr.connection import (
    gauss_residual,
    hsphere_curvature,
    hsphere_extension_horizontal_curvature,
    levi_civita,
    riemann,
    second_fundamental_form_residual,
    standard_norden_pair,
)
from accr.corpus import example2, example2_connection_table
from accr.errors import DegenerateParameters, NotSasakiLike
from tests.conftest import ORIGIN


def koszul_reference(model, p):
    """Plain-loop Koszul solve, independent of the einsum implementation."""
    d = model.dim
    g = model.metric_at(p)
    dg = model.metric_derivs_at(p)
    c = model.commutators_at(p)
    ginv = np.linalg.inv(g)
    gamma = np.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            rhs = np.zeros(d)
            for k in range(d):
                val = dg[i, j, k] + dg[j, k, i] - dg[k, i, j]
                for m in range(d):
                    val += c[m, i, j] * g[m, k] - c[m, j, k] * g[m, i] + c[m, k, i] * g[m, j]
                rhs[k] = 0.5 * val
            gamma[i, j] = ginv @ rhs
    return gamma


def curvature_reference(model, p):
    """R(e_i, e_j) e_k by direct operator composition on a homogeneous model."""
    d = model.dim
    gamma = koszul_reference(model, p)
    c = model.commutators_at(p)

    def nabla(i, vec):
        out = np.zeros(d)
        for a in range(d):
            out += vec[a] * gamma[i, a]
        return out

    r_up = np.zeros((d, d, d, d))
    for i in range(d):
        for j in range(d):
            for k in range(d):
                ek = np.zeros(d)
                ek[k] = 1.0
                term = nabla(i, gamma[j, k]) - nabla(j, gamma[i, k])
                for m in range(d):
                    term -= c[m, i, j] * gamma[m, k]
                r_up[i, j, k] = term
    return r_up


class TestLeviCivita:
    def test_flat_abelian_zero(self, flat):
        gamma = levi_civita(flat.model, ORIGIN).gamma
        assert np.max(np.abs(gamma)) == 0.0

    def test_example1_coefficients(self, ex1):
        gamma = levi_civita(ex1.model, ORIGIN).gamma
        expected = np.zeros((3, 3, 3))
        expected[1, 0, 2] = -1.0   # nabla_{e1} e0 = -e2
        expected[1, 2, 0] = -1.0   # nabla_{e1} e2 = -e0
        expected[2, 0, 1] = 1.0    # nabla_{e2} e0 = e1
        expected[2, 1, 0] = -1.0   # nabla_{e2} e1 = -e0
        assert np.max(np.abs(gamma - expected)) < 1e-15

    @pytest.mark.parametrize("lam,mu", [(1.0, 0.0), (3.0, -2.0), (0.0, 0.0), (2.0, 1.0)])
    def test_example2_displayed_table(self, lam, mu):
        cm = example2(lam=lam, mu=mu)
        gamma = levi_civita(cm.model, ORIGIN).gamma
        assert np.max(np.abs(gamma - example2_connection_table(lam, mu))) < 1e-12

    def test_agrees_with_loop_reference(self, ex2_generic, ex1_chart):
        for cm in (ex2_generic, ex1_chart):
            for p in cm.model.sample_points(3, 5):
                a = levi_civita(cm.model, p).gamma
                b = koszul_reference(cm.model, p)
                assert np.max(np.abs(a - b)) < 1e-12

    def test_torsion_and_compatibility(self, ex1, ex2_generic, ex3):
        for cm in (ex1, ex2_generic, ex3):
            for p in cm.model.sample_points(4, 6):
                conn = levi_civita(cm.model, p)
                assert conn.torsion_residual(cm.model.commutators_at(p)) < 1e-8
                assert conn.metric_compat_residual(
                    cm.model.metric_at(p), cm.model.metric_derivs_at(p)) < 1e-8


class TestRiemann:
    def test_flat_zero(self, flat):
        bundle = riemann(flat.model, ORIGIN)
        assert np.max(np.abs(bundle.r)) == 0.0
        assert bundle.scal == 0.0

    def test_example1_sectional_value(self, ex1):
        bundle = riemann(ex1.model, ORIGIN)
        assert bundle.r[1, 2, 2, 1] == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_ric_xi_xi(self, n):
        from accr.corpus import example1

        cm = example1(n=n)
        bundle = riemann(cm.model, ORIGIN)
        xi = cm.structure.xi_at(ORIGIN)
        assert xi @ bundle.ric @ xi == pytest.approx(2.0 * n, abs=1e-12)

    def test_matches_loop_reference(self, ex2_generic):
        r_up = riemann(ex2_generic.model, ORIGIN).r_up
        ref = curvature_reference(ex2_generic.model, ORIGIN)
        assert np.max(np.abs(r_up - ref)) < 1e-13

    def test_symmetries(self, ex1, ex2_generic, ex3):
        for cm in (ex1, ex2_generic, ex3):
            p = cm.model.sample_points(2, 7)[0]
            res = riemann(cm.model, p).symmetry_residuals()
            assert max(res.values()) < 1e-7

    def test_chart_matches_group_curvature(self, ex1, ex1_chart):
        ref = riemann(ex1.model, ORIGIN).r
        for p in ex1_chart.model.sample_points(3, 9):
            r = riemann(ex1_chart.model, p).r
            assert np.max(np.abs(r - ref)) < 1e-8


class TestHSphereCurvature:
    def test_scal_n2(self):
        assert hsphere_curvature(2, 1.0, 0.0).scal == pytest.approx(8.0)

    def test_b_zero_gives_pi1_minus_pi2(self):
        cf = hsphere_curvature(2, 1.0, 0.0)
        expected = cf.pi1.components - cf.pi2.components
        assert np.max(np.abs(cf.r.components - expected)) < 1e-14

    def test_ric_trace_reproduces_scal(self):
        n, a, b = 2, 3.0, 4.0
        cf = hsphere_curvature(n, a, b)
        h, _ = standard_norden_pair(n)
        # signature trace of Ric against h; equals 4 n (n-1) a / (a^2+b^2)
        val = float(np.einsum("jk,jk->", np.linalg.inv(h), cf.ric))
        assert val == pytest.approx(cf.scal)
        assert cf.scal == pytest.approx(0.96)

    def test_block_symmetries_exact(self):
        cf = hsphere_curvature(3, 2.0, -1.0)
        r = cf.r.components
        assert np.max(np.abs(r + np.einsum("jikl->ijkl", r))) < 1e-12
        assert np.max(np.abs(r - np.einsum("klij->ijkl", r))) < 1e-12

    def test_degenerate_parameters(self):
        with pytest.raises(DegenerateParameters):
            hsphere_curvature(2, 0.0, 0.0)

    def test_small_n_flagged(self):
        assert hsphere_curvature(2, 1.0, 0.0).note is not None
        assert hsphere_curvature(3, 1.0, 0.0).note is None


class TestGauss:
    def test_example1_flat_leaf(self, ex1):
        assert gauss_residual(ex1.structure, ORIGIN) < 1e-8

    def test_example2_flat_leaf(self, ex2_generic):
        assert gauss_residual(ex2_generic.structure, ORIGIN) < 1e-8

    def test_extension_vs_closed_form(self, ex3):
        for p in ex3.model.sample_points(3, 13):
            assert gauss_residual(ex3.structure, p, base_r=ex3.base_r_at(p)) < 1e-6

    def test_closed_form_needed(self, ex3):
        # without the leaf curvature the comparison must fail at order one
        p = ex3.model.sample_points(3, 13)[0]
        assert gauss_residual(ex3.structure, p) > 0.1

    def test_second_fundamental_form(self, ex1, ex2, ex3):
        for cm in (ex1, ex2, ex3):
            p = cm.model.sample_points(2, 3)[0]
            assert second_fundamental_form_residual(cm.structure, p) < 1e-8

    def test_requires_sasaki(self, flat):
        with pytest.raises(NotSasakiLike):
            gauss_residual(flat.structure, ORIGIN)


class TestExtensionLeafCurvature:
    def test_rrr_at_t_zero_reduces_to_base(self):
        h, ht = standard_norden_pair(3)
        rh = hsphere_extension_horizontal_curvature(0.0, 3, 1.0, 0.0, h, ht)
        base = hsphere_curvature(3, 1.0, 0.0, h=h, htilde=ht).r.components
        assert np.max(np.abs(rh - base)) < 1e-14
