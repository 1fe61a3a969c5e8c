import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from accr.conformal import (
    TransformParams,
    apply_cct,
    eta_complex_einstein_check,
    homothetic_connection,
    homothetic_curvature_and_ricci,
    pointwise_einstein_residual,
    preservation_residuals,
)
from accr.corpus import example3_hsphere_ext
from accr.errors import NonConstantParams, NotSasakiLike
from accr.sasaki import check_defining_conditions
from accr.structure import validate_structure
from tests.conftest import ORIGIN


class TestApplyCct:
    def test_identity(self, ex1):
        ts = apply_cct(ex1.structure, TransformParams(0.0, 0.0, 0.0))
        assert np.max(np.abs(ts.model.metric_at(ORIGIN) - ex1.model.metric_at(ORIGIN))) == 0.0
        assert np.max(np.abs(ts.xi_at(ORIGIN) - ex1.structure.xi_at(ORIGIN))) == 0.0
        assert np.max(np.abs(ts.eta_at(ORIGIN) - ex1.structure.eta_at(ORIGIN))) == 0.0

    def test_pure_scaling(self, ex1):
        ts = apply_cct(ex1.structure, TransformParams(math.log(2.0), 0.0, 0.0))
        gbar = ts.model.metric_at(ORIGIN)
        assert gbar[1, 1] == pytest.approx(4.0)
        assert gbar[0, 0] == pytest.approx(1.0)

    def test_quarter_turn_recovers_gtilde(self, ex1):
        ts = apply_cct(ex1.structure, TransformParams(0.0, math.pi / 4, 0.0))
        gbar = ts.model.metric_at(ORIGIN)
        assert np.max(np.abs(gbar - ex1.structure.gtilde_at(ORIGIN))) < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-1.0, 1.0), st.floats(-1.5, 1.5), st.floats(-1.0, 1.0))
    def test_axioms_preserved_for_any_params(self, u, v, w):
        from accr.corpus import example1

        s = example1(n=1).structure
        ts = apply_cct(s, TransformParams(u, v, w))
        res = validate_structure(ts, ORIGIN)
        assert max(res.values()) < 1e-10

    def test_nonconstant_rejected_on_group(self, ex1):
        with pytest.raises(NonConstantParams):
            apply_cct(ex1.structure, TransformParams(u=lambda p: p.sum(), v=0.0, w=0.0))


class TestPreservation:
    def test_constants_w_zero(self, ex1):
        pts = ex1.model.sample_points(3, 1)
        res = preservation_residuals(ex1.structure, TransformParams(0.7, -0.4, 0.0), pts)
        assert max(res.values()) < 1e-8

    def test_w_log2_breaks_exactly(self, ex1):
        pts = ex1.model.sample_points(3, 1)
        res = preservation_residuals(
            ex1.structure, TransformParams(0.0, 0.0, math.log(2.0)), pts)
        assert res["du_phi_plus_dv"] == pytest.approx(1.0, abs=1e-12)
        assert res["f_bar_direct"] > 0.1

    def test_transformed_structure_stays_sasaki(self, ex2):
        pts = ex2.model.sample_points(3, 1)
        ts = apply_cct(ex2.structure, TransformParams(0.3, 0.2, 0.0))
        assert max(check_defining_conditions(ts, pts[0]).values()) < 1e-9

    def test_w_nonzero_breaks_sasaki_verdict(self, ex1):
        ts = apply_cct(ex1.structure, TransformParams(0.0, 0.0, math.log(2.0)))
        assert max(check_defining_conditions(ts, ORIGIN).values()) > 0.1

    def test_callable_params_on_chart(self, ex1_chart):
        pts = ex1_chart.model.sample_points(4, 1)
        # constant-zero candidates supplied as genuine functions: the
        # differentials run through finite differences and must vanish
        t = TransformParams(u=lambda p: 0.0, v=lambda p: 0.0, w=0.0)
        res = preservation_residuals(ex1_chart.structure, t, pts)
        assert max(res.values()) < 1e-6

    def test_callable_v_of_t_breaks(self, ex1_chart):
        pts = ex1_chart.model.sample_points(4, 1)
        t = TransformParams(u=0.0, v=lambda p: 0.1 * p[0], w=0.0)
        res = preservation_residuals(ex1_chart.structure, t, pts)
        assert res["du_phi_plus_dv"] == pytest.approx(0.1, abs=1e-6)

    def test_requires_sasaki(self, flat):
        with pytest.raises(NotSasakiLike):
            preservation_residuals(flat.structure, TransformParams(), [ORIGIN])


class TestHomotheticConnection:
    def test_identity_params_no_shift(self, ex1):
        delta, resid = homothetic_connection(ex1.structure, TransformParams(), ORIGIN)
        assert np.max(np.abs(delta)) == 0.0
        assert resid < 1e-14

    def test_sixth_turn_shift_value(self, ex1):
        t = TransformParams(0.0, math.pi / 6, 0.0)
        delta, resid = homothetic_connection(ex1.structure, t, ORIGIN)
        # shift of nabla_{e1} e1 is sin(pi/3) g(phi e1, phi e1) xi = -sqrt(3)/2 xi
        assert delta[1, 1, 0] == pytest.approx(-math.sqrt(3.0) / 2.0)
        assert resid < 1e-12

    def test_w_log2_shift_matches_koszul(self, ex1):
        # pure w-rescaling: sin 2v = 0 but g_bar = g + (e^{2w}-1) eta x eta
        # is a genuinely different metric, so the connection does shift:
        # delta(x, y) = -(1 - e^{-2w}) g(x, phi y) xi
        t = TransformParams(0.0, 0.0, math.log(2.0))
        delta, resid = homothetic_connection(ex1.structure, t, ORIGIN)
        assert delta[1, 2, 0] == pytest.approx(0.75)  # g(e1, phi e2) = -1
        assert resid < 1e-12

    def test_nonconstant_rejected(self, ex1_chart):
        with pytest.raises(NonConstantParams):
            homothetic_connection(
                ex1_chart.structure,
                TransformParams(u=lambda p: p[0], v=0.0, w=0.0),
                np.zeros(3),
            )


class TestHomotheticCurvature:
    def test_laws_on_example1(self, ex1):
        res = homothetic_curvature_and_ricci(
            ex1.structure, TransformParams(0.3, 0.2, 0.0), ORIGIN)
        for key in ("curvature_formula", "ricci_invariance", "scal_formula",
                    "scal_star_formula", "rotated_basis_orthonormal",
                    "scal_from_basis", "scal_star_from_basis"):
            assert res[key] < 1e-12, key
        # w = 0 keeps both scalar curvatures of this structure fixed
        assert res["scal_bar"] == pytest.approx(2.0, abs=1e-12)
        assert res["scal_star_bar"] == pytest.approx(0.0, abs=1e-12)

    def test_ricci_invariance_with_w(self, ex2):
        res = homothetic_curvature_and_ricci(
            ex2.structure, TransformParams(0.3, 0.2, 0.1), ORIGIN)
        assert res["ricci_invariance"] < 1e-8
        assert res["curvature_formula"] < 1e-10


class TestEtaEinsteinFit:
    def test_example1_degenerate_fit(self, ex1):
        pts = ex1.model.sample_points(2, 1)
        fit = eta_complex_einstein_check(ex1.structure, pts)
        # Ric = 2n eta x eta: alpha = beta = 0 fits exactly, d = 0 direction
        assert fit.residual < 1e-10
        assert abs(fit.alpha) < 1e-10 and abs(fit.beta) < 1e-10
        assert fit.classification == "eta_einstein"
        assert fit.c is None and fit.d is None

    @staticmethod
    def _einstein_slice(n=3):
        """Extension over the h-sphere tuned to Ric_leaf = 2n h', sampled on
        the t = 0 leaf where the whole structure is pointwise Einstein."""
        a = (n - 1) / n
        cm = example3_hsphere_ext(n=n, a=a, b=0.0)
        base_pts = cm.model.base.model.sample_points(4, 31)
        pts = [np.concatenate([[0.0], bp]) for bp in base_pts]
        return cm, pts

    def test_einstein_slice_classified(self):
        cm, pts = self._einstein_slice()
        fit = eta_complex_einstein_check(cm.structure, pts, tol=1e-6)
        assert fit.classification == "einstein"
        assert fit.c == pytest.approx(1.0, abs=1e-8)
        assert fit.d == pytest.approx(0.0, abs=1e-8)

    def test_transformed_einstein_recovers_constants(self):
        cm, pts = self._einstein_slice()
        c0, d0 = 2.0, 1.0
        params = TransformParams(
            u=0.25 * math.log(c0 * c0 + d0 * d0),
            v=0.5 * math.atan2(d0, c0),
            w=0.0,
        )
        ts = apply_cct(cm.structure, params)
        fit = eta_complex_einstein_check(ts, pts, tol=1e-6)
        assert fit.classification == "eta_complex_einstein"
        assert fit.c == pytest.approx(c0, abs=1e-6)
        assert fit.d == pytest.approx(d0, abs=1e-6)
        assert fit.to_einstein["u"] == pytest.approx(-params.u, abs=1e-8)
        assert fit.to_einstein["v"] == pytest.approx(-params.v, abs=1e-8)
        assert fit.einstein_residual < 1e-6

    def test_einstein_iff_leaf_einstein(self):
        """The structure is pointwise Einstein exactly where the leaf metric
        has leaf Ricci equal to 2n times the leaf metric."""
        n = 3
        cm, _ = self._einstein_slice(n)
        base = cm.model.base
        bp = base.model.sample_points(1, 3)[0]
        for t, expect in ((0.0, True), (0.7, False)):
            p = np.concatenate([[t], bp])
            h_leaf = cm.model.metric_at(p)[1:, 1:]
            ric_leaf = cm.base_ric_at(p)[1:, 1:]
            leaf_einstein = np.max(np.abs(ric_leaf - 2 * n * h_leaf)) < 1e-8
            whole = pointwise_einstein_residual(cm.structure, p) < 1e-8
            assert leaf_einstein == expect
            assert whole == expect

    def test_requires_sasaki(self, flat):
        with pytest.raises(NotSasakiLike):
            eta_complex_einstein_check(flat.structure, [ORIGIN])
