"""Verification driver: run every applicable check over every model.

Each check is reported as a row {check_id, statement, max_residual,
fd_error_estimate, tolerance, expected, verdict}.  Residuals are maxima
over the model's deterministic sample point set.  The designed-fail corpus
members (the parallel model for the Sasaki family, the w != 0 homothety
for conformal preservation) are marked expected="fail" so that a healthy
run reports them as xfail and exits 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import conformal as conf
from . import corpus as corpus_mod
from . import sasaki as sas
from .connection import gauss_residual, second_fundamental_form_residual
from .errors import GeometryError, NotSasakiLike
from .structure import (
    PointFields,
    structure_property_residuals,
    theorem_3_4_residual,
    validate_structure,
)

SCHEMA_VERSION = "1"

STATEMENTS = {
    "structure.phi_xi": "phi xi = 0",
    "structure.phi_squared": "phi^2 = -Id + eta (x) xi",
    "structure.eta_phi": "eta o phi = 0",
    "structure.eta_xi": "eta(xi) = 1",
    "structure.metric_compat": "g(phi x, phi y) = -g(x,y) + eta(x) eta(y)",
    "structure.gtilde_symmetry": "gtilde(x,y) = g(x, phi y) + eta(x) eta(y) is symmetric",
    "structure.signature_g": "g has signature (n+1, n)",
    "structure.signature_gtilde": "gtilde has signature (n+1, n)",
    "identity.f_last_two_symmetry": "F(x,y,z) = F(x,z,y)",
    "identity.f_phi_phi_relation":
        "F(x,y,z) = F(x,phi y,phi z) + eta(y) F(x,xi,z) + eta(z) F(x,y,xi)",
    "identity.theta_star_phi_relation": "theta* o phi = -theta o phi^2",
    "identity.nabla_eta_from_f": "(nabla_x eta) y = F(x, phi y, xi)",
    "identity.nabla_eta_from_xi": "(nabla_x eta) y = g(nabla_x xi, y)",
    "identity.f_xixi_vs_nhat": "F(xi,xi,z) = Nhat(xi,xi,phi z) / 2",
    "identity.nijenhuis_route_gap_n": "N from brackets = N from F",
    "identity.nijenhuis_route_gap_nhat": "Nhat from brackets = Nhat from F",
    "identity.f_reconstruction":
        "F = -[N(phi x,y,z)+N(phi x,z,y)+Nhat(phi x,y,z)+Nhat(phi x,z,y)]/4 "
        "+ eta(x)[N(xi,y,phi z)+Nhat(xi,y,phi z)+eta(z) Nhat(xi,xi,phi y)]/2",
    "connection.torsion_free": "nabla_x y - nabla_y x = [x, y]",
    "connection.metric_compatibility": "x g(y,z) = g(nabla_x y, z) + g(y, nabla_x z)",
    "curvature.antisym_first_pair": "R(x,y,z,u) = -R(y,x,z,u)",
    "curvature.antisym_last_pair": "R(x,y,z,u) = -R(x,y,u,z)",
    "curvature.pair_interchange": "R(x,y,z,u) = R(z,u,x,y)",
    "curvature.first_bianchi": "R(x,y,z,u) + R(y,z,x,u) + R(z,x,y,u) = 0",
    "curvature.ricci_symmetry": "Ric(x,y) = Ric(y,x)",
    "sasaki.defining.f_horizontal": "F(X,Y,Z) = 0 on horizontal X,Y,Z",
    "sasaki.defining.f_xi_first_slot": "F(xi,Y,Z) = 0",
    "sasaki.defining.f_xi_xi": "F(xi,xi,Z) = 0",
    "sasaki.defining.f_equals_minus_g": "F(X,Y,xi) = -g(X,Y)",
    "sasaki.nabla_phi": "F(x,y,z) = g(phi x,phi y) eta(z) + g(phi x,phi z) eta(y)",
    "sasaki.nijenhuis.n_zero": "N = 0",
    "sasaki.nijenhuis.nhat_form": "Nhat = -4 (gtilde - eta (x) eta) (x) xi",
    "sasaki.nijenhuis.nhat_xi_slot": "Nhat(xi, y) = 0",
    "sasaki.corollary.d_eta": "d eta = 0",
    "sasaki.corollary.nabla_xi_xi": "nabla_xi xi = 0",
    "sasaki.corollary.theta_plus_2n_eta": "theta = -2n eta",
    "sasaki.corollary.theta_star": "theta* = 0",
    "sasaki.corollary.bracket_xi_horizontal": "[X, xi] is horizontal",
    "sasaki.corollary.nabla_xi_transport": "nabla_xi X = -phi X - [X, xi]",
    "sasaki.curvature.phi_commutation":
        "R(x,y,phi z,u) - R(x,y,z,phi u) = [g(y,z)-2 eta eta] g(x,phi u) + ...",
    "sasaki.curvature.r_xy_xi": "R(x,y) xi = eta(y) x - eta(x) y",
    "sasaki.curvature.r_xi_x_xi": "R(xi,X) xi = -X",
    "sasaki.curvature.ric_xi_xi": "Ric(xi,xi) = 2n",
    "sasaki.curvature.ric_y_xi": "Ric(y,xi) = 2n eta(y)",
    "sasaki.curvature.r_xi_third_slot": "R(x,y,xi,z) = eta(y) g(x,z) - eta(x) g(y,z)",
    "sasaki.curvature.horizontal_ricci": "Ric(Y,Z) = Ric_leaf(Y,Z) on horizontal Y,Z",
    "gauss.residual":
        "R(X,Y,Z,U) = R_leaf(X,Y,Z,U) + g(phi X,Z) g(phi Y,U) - g(phi Y,Z) g(phi X,U)",
    "gauss.second_fundamental_form": "g(nabla_X xi, Y) = -gtilde(X,Y) on horizontal X,Y",
    "cone.holomorphic": "nabla J = 0 on the complex cone",
    "cone.line.horizontal_block": "g_cone(nabla_X Y, Z) = r^2 g(nabla_X Y, Z)",
    "cone.line.radial_second_slot": "g_cone(nabla_X Y, d/dr) = -r g(X,Y)",
    "cone.line.radial_argument": "g_cone(nabla_X d/dr, Z) = r g(X,Z)",
    "cone.line.radial_direction": "g_cone(nabla_{d/dr} Y, Z) = r g(Y,Z)",
    "cone.line.xi_second_slot":
        "g_cone(nabla_X Y, xi) = r^2 g(nabla_X Y, xi) + (r^2-1)/2 d eta(X,Y)",
    "cone.line.xi_argument":
        "g_cone(nabla_X xi, Z) = r^2 g(nabla_X xi, Z) - (r^2-1)/2 d eta(X,Z)",
    "cone.dj_xi.direct_vs_symmetric_reading":
        "g_cone((nabla_X J) xi, Z) vs -r^2 {g(nabla_X xi, phi Z) - g(X,Z)} + ...",
    "cone.dj_xi.direct_max": "max |g_cone((nabla_X J) xi, Z)|",
    "crossrep.structure_equations": "finite-difference d e^k match the group brackets",
    "crossrep.metric_assembly": "sum_k eps_k (e^k)^2 matches the closed-form coordinate metric",
    "crossrep.verdict_agreement": "group and chart Sasaki verdicts agree",
    "conformal.preserve.dw_phi": "dw o phi = 0",
    "conformal.preserve.du_minus_dv_phi": "du - dv o phi = 0",
    "conformal.preserve.du_phi_plus_dv": "du o phi + dv = (1 - e^w) eta",
    "conformal.preserve.du_xi": "du(xi) = 0",
    "conformal.preserve.dv_xi": "dv(xi) = 1 - e^w",
    "conformal.preserve.one_form_a": "auxiliary 1-form A = 0",
    "conformal.preserve.one_form_b": "auxiliary 1-form B = 0",
    "conformal.preserve.f_bar_direct": "F of g_bar has the Sasaki-like shape for g_bar",
    "conformal.preserve.transformed_defining": "transformed structure passes the defining conditions",
    "conformal.preserve.transformed_axioms": "transformed structure satisfies the accR axioms",
    "conformal.break.du_phi_plus_dv": "w != 0 breaks du o phi + dv = (1 - e^w) eta",
    "conformal.break.f_bar_direct": "w != 0 breaks the Sasaki-like shape of F for g_bar",
    "conformal.homothetic.connection_formula":
        "nabla_bar = nabla + e^{2(u-w)} sin 2v g(phi.,phi.) xi - (e^{-2w}-e^{2(u-w)} cos 2v) g(.,phi.) xi",
    "conformal.homothetic.curvature_formula": "closed-form curvature shift matches recomputation",
    "conformal.homothetic.ricci_invariance": "Ric_bar = Ric",
    "conformal.homothetic.scal_formula": "scalar curvature transformation law",
    "conformal.homothetic.scal_star_formula": "*-scalar curvature transformation law",
    "conformal.homothetic.rotated_basis_orthonormal":
        "e_bar_i = e^{-u}(cos v e_i - sin v phi e_i) is g_bar-orthonormal",
    "conformal.homothetic.scal_from_basis": "basis trace reproduces Scal_bar",
    "conformal.homothetic.scal_star_from_basis": "basis trace reproduces Scal*_bar",
    "conformal.eta_fit.residual": "Ric = alpha g + beta g(., phi .) + (2n - alpha) eta (x) eta",
}

# rows that must fail on the parallel designed-fail model
DESIGNED_FAIL_IDS = {
    "sasaki.defining.f_equals_minus_g",
    "sasaki.nabla_phi",
    "sasaki.nijenhuis.nhat_form",
    "sasaki.corollary.theta_plus_2n_eta",
    "sasaki.corollary.nabla_xi_transport",
    "sasaki.curvature.phi_commutation",
    "sasaki.curvature.r_xy_xi",
    "sasaki.curvature.r_xi_x_xi",
    "sasaki.curvature.ric_xi_xi",
    "sasaki.curvature.ric_y_xi",
    "sasaki.curvature.r_xi_third_slot",
    "gauss.second_fundamental_form",
    "cone.holomorphic",
}

INFO_IDS_PREFIX = ("cone.line.", "cone.dj_xi.", "conformal.eta_fit.")

# per-row tolerances on finite-difference models (exact models use tol_exact)
FD_TOL_OVERRIDES = {
    "sasaki.curvature.ric_xi_xi": 1e-8,
    "sasaki.curvature.ric_y_xi": 1e-8,
    "sasaki.curvature.r_xi_x_xi": 1e-8,
    "sasaki.curvature.horizontal_ricci": 1e-5,
    "gauss.residual": 1e-5,
    "crossrep.structure_equations": 1e-7,
    "crossrep.metric_assembly": 1e-10,
}


@dataclass
class VerifyConfig:
    points: int = 20
    seed: int = 42
    fd_step: float = 1e-3
    tol_exact: float = 1e-9
    tol_fd: float = 1e-6
    tol_override: float | None = None
    with_cone: bool = True
    with_conformal: bool = True
    with_error_estimate: bool = True
    only: str | None = None


@dataclass
class CheckRow:
    check_id: str
    statement: str
    max_residual: float | None
    fd_error_estimate: float
    tolerance: float | None
    expected: str
    verdict: str
    note: str | None = None


def _set_fd_step(cm, step):
    model = cm.model
    model.fd_step = step
    base = getattr(model, "base", None)
    if base is not None:
        inner = getattr(base, "model", base)
        inner.fd_step = step


def _gather_residuals(cm, cfg: VerifyConfig) -> dict:
    """One full pass over the sample points; returns {check_id: residual}."""
    s = cm.structure
    override = getattr(cm, "sample_override", None) or {}
    count = override.get("count", cfg.points)
    seed = override.get("seed", cfg.seed)
    pts = cm.model.sample_points(count, seed)
    res: dict = {}
    upd = lambda key, val: res.__setitem__(key, max(res.get(key, 0.0), float(val)))

    for p in pts:
        f = PointFields(s, p)
        for k, v in validate_structure(s, p).items():
            upd(f"structure.{k}", v)
        for k, v in structure_property_residuals(s, p, fields=f).items():
            upd(f"identity.{k}", v)
        upd("identity.f_reconstruction", theorem_3_4_residual(s, p, fields=f))
        upd("connection.torsion_free", f.conn.torsion_residual(f.c))
        upd("connection.metric_compatibility", f.conn.metric_compat_residual(f.g, f.dg))
        for k, v in f.curvature.symmetry_residuals().items():
            upd(f"curvature.{k}", v)
        for k, v in sas.check_defining_conditions(s, p, fields=f).items():
            upd(f"sasaki.defining.{k}", v)
        upd("sasaki.nabla_phi", sas.check_nabla_phi(s, p, fields=f))
        for k, v in sas.check_nijenhuis_form(s, p, fields=f).items():
            upd(f"sasaki.nijenhuis.{k}", v)
        for k, v in sas.check_corollary(s, p, fields=f).items():
            upd(f"sasaki.corollary.{k}", v)
        base_ric = cm.base_ric_at(p) if cm.base_ric_at is not None else None
        for k, v in sas.curvature_identity_residuals(s, p, fields=f, base_ric=base_ric).items():
            upd(f"sasaki.curvature.{k}", v)
        if cm.sasaki_expected and cm.base_r_at is not None:
            upd("gauss.residual", gauss_residual(s, p, base_r=cm.base_r_at(p), bundle=f.curvature))
        upd("gauss.second_fundamental_form",
            second_fundamental_form_residual(s, p, gamma=f.gamma))

    if cfg.with_cone:
        cone_check = sas.cone_holomorphic_residual(s, count=min(count, 6), seed=seed)
        res["cone.holomorphic"] = cone_check.residual
        for k, v in cone_check.connection_lines.items():
            res[f"cone.line.{k}"] = v
        for k, v in cone_check.dj_xi_line.items():
            res[f"cone.dj_xi.{k}"] = v

    if cm.coframe_fn is not None and cm.lie_partner is not None:
        partner = corpus_mod.builtin(cm.lie_partner, **{
            k: v for k, v in cm.params.items() if k in ("n", "lam", "mu")})
        cross = corpus_mod.cross_representation_check(partner, cm, count=count, seed=seed)
        res["crossrep.structure_equations"] = cross["structure_equations"]
        res["crossrep.metric_assembly"] = cross["metric_assembly"]
        res["crossrep.verdict_agreement"] = cross["verdict_agreement"]

    if cfg.with_conformal and cm.sasaki_expected:
        try:
            good = conf.TransformParams(u=0.3, v=0.2, w=0.0)
            pres = conf.preservation_residuals(s, good, pts)
            for k, v in pres.items():
                upd(f"conformal.preserve.{k}", v)
            ts = conf.apply_cct(s, good)
            worst = max(
                max(sas.check_defining_conditions(ts, p).values()) for p in pts
            )
            upd("conformal.preserve.transformed_defining", worst)
            axioms = max(
                max(validate_structure(ts, p).values()) for p in pts
            )
            upd("conformal.preserve.transformed_axioms", axioms)
            bad = conf.TransformParams(u=0.0, v=0.0, w=math.log(2.0))
            broken = conf.preservation_residuals(s, bad, pts)
            upd("conformal.break.du_phi_plus_dv", broken["du_phi_plus_dv"])
            upd("conformal.break.f_bar_direct", broken["f_bar_direct"])
            if cm.exact:
                _, conn_law_res = conf.homothetic_connection(s, good, pts[0])
                upd("conformal.homothetic.connection_formula", conn_law_res)
                hom = conf.homothetic_curvature_and_ricci(s, good, pts[0])
                for k in ("curvature_formula", "ricci_invariance", "scal_formula",
                          "scal_star_formula", "rotated_basis_orthonormal",
                          "scal_from_basis", "scal_star_from_basis"):
                    upd(f"conformal.homothetic.{k}", hom[k])
                fit = conf.eta_complex_einstein_check(s, pts)
                res["conformal.eta_fit.residual"] = fit.residual
                res["_eta_fit_class"] = fit.classification
        except NotSasakiLike:
            pass

    return res


def _tolerance_for(check_id, cm, cfg: VerifyConfig):
    if cfg.tol_override is not None:
        return cfg.tol_override
    if cm.exact:
        return cfg.tol_exact
    return FD_TOL_OVERRIDES.get(check_id, cfg.tol_fd)


def run_model_checks(cm, cfg: VerifyConfig) -> dict:
    """All checks for one corpus model, returned as a report dict."""
    _set_fd_step(cm, cfg.fd_step)
    residuals = _gather_residuals(cm, cfg)
    eta_class = residuals.pop("_eta_fit_class", None)

    estimates = {}
    if cfg.with_error_estimate and not cm.exact:
        _set_fd_step(cm, cfg.fd_step / 2.0)
        second = _gather_residuals(cm, cfg)
        second.pop("_eta_fit_class", None)
        _set_fd_step(cm, cfg.fd_step)
        estimates = {k: abs(residuals.get(k, 0.0) - second.get(k, 0.0)) for k in residuals}

    rows = []
    for check_id in sorted(residuals):
        if cfg.only and not check_id.startswith(cfg.only):
            continue
        value = residuals[check_id]
        info = check_id.startswith(INFO_IDS_PREFIX)
        expected = "info" if info else (
            "fail" if (not cm.sasaki_expected and check_id in DESIGNED_FAIL_IDS)
            else ("fail" if check_id.startswith("conformal.break.") else "pass")
        )
        tol = None if info else _tolerance_for(check_id, cm, cfg)
        if info:
            verdict = "info"
        else:
            observed = value <= tol
            if expected == "pass":
                verdict = "pass" if observed else "fail"
            else:
                verdict = "xpass" if observed else "xfail"
        note = None
        if check_id == "conformal.eta_fit.residual" and eta_class is not None:
            note = f"classification: {eta_class}"
        rows.append(CheckRow(
            check_id=check_id,
            statement=STATEMENTS.get(check_id, check_id),
            max_residual=value,
            fd_error_estimate=float(estimates.get(check_id, 0.0)),
            tolerance=tol,
            expected=expected,
            verdict=verdict,
            note=note,
        ))

    return {
        "name": cm.name,
        "params": dict(cm.params),
        "kind": cm.model.kind,
        "exact_derivatives": cm.exact,
        "notes": list(cm.notes),
        "checks": [asdict(r) for r in rows],
    }


def run_all(models, cfg: VerifyConfig | None = None) -> dict:
    """Run the full battery over a list of corpus models."""
    cfg = cfg or VerifyConfig()
    reports = []
    for cm in models:
        try:
            reports.append(run_model_checks(cm, cfg))
        except GeometryError as exc:
            reports.append({
                "name": cm.name,
                "params": dict(cm.params),
                "kind": cm.model.kind,
                "exact_derivatives": cm.exact,
                "notes": [f"error: {exc}"],
                "checks": [],
                "error": str(exc),
            })
    counts = {"pass": 0, "fail": 0, "xfail": 0, "xpass": 0, "info": 0}
    for rep in reports:
        for row in rep["checks"]:
            counts[row["verdict"]] += 1
    ok = counts["fail"] == 0 and counts["xpass"] == 0 and not any(
        "error" in rep for rep in reports)
    return {
        "schema_version": SCHEMA_VERSION,
        "environment": {
            "seed": cfg.seed,
            "points": cfg.points,
            "fd_step": cfg.fd_step,
            "tolerance_exact": cfg.tol_exact,
            "tolerance_fd": cfg.tol_fd,
        },
        "models": reports,
        "summary": {**counts, "ok": ok},
    }


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def report_to_json(report) -> str:
    """Canonical serialization: sorted keys, shortest round-trip floats.

    Identical runs (same seed, same config) produce byte-identical output.
    """
    return json.dumps(_clean(report), indent=2, sort_keys=True) + "\n"
