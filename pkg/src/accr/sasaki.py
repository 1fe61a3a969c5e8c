"""Sasaki-like certification.

A structure is Sasaki-like when the structure tensor satisfies

    F(X,Y,Z) = F(xi,Y,Z) = F(xi,xi,Z) = 0,   F(X,Y,xi) = -g(X,Y)

on horizontal arguments; equivalently (nabla_x phi) y = -g(x,y) xi
- eta(y) x + 2 eta(x) eta(y) xi, equivalently N = 0 together with
Nhat = -4 (gtilde - eta x eta) (x) xi.  A third, geometric route: the
complex cone must carry a parallel complex structure.  All three are
evaluated here as residuals, along with the curvature identities that
follow.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .connection import levi_civita
from .errors import NotSasakiLike
from .models import cone_model
from .structure import AccrStructure, PointFields

__all__ = [
    "check_defining_conditions",
    "check_nabla_phi",
    "check_nijenhuis_form",
    "check_corollary",
    "check_curvature_identities",
    "curvature_identity_residuals",
    "require_sasaki_like",
    "is_sasaki_like",
    "SasakiReport",
    "sasaki_report",
    "cone_holomorphic_residual",
    "ConeCheck",
]


def _proj_all(t, proj):
    t = np.asarray(t)
    for axis in range(t.ndim):
        t = np.moveaxis(np.tensordot(proj, t, axes=(0, axis)), 0, axis)
    return t


def check_defining_conditions(s: AccrStructure, p, fields=None) -> dict:
    """Residuals of the four defining conditions on projected arguments."""
    f = fields or PointFields(s, p)
    F, xi, proj, g = f.F, f.xi, f.proj, f.g
    fhhh = _proj_all(F, proj)
    f_xi_first = np.einsum("a,ajk->jk", xi, F)
    f_xi_xi = np.einsum("a,b,abk->k", xi, xi, F)
    gp = proj.T @ g @ proj
    fh = np.einsum("ija,a->ij", F, xi)
    return {
        "f_horizontal": float(np.max(np.abs(fhhh))),
        "f_xi_first_slot": float(np.max(np.abs(_proj_all(f_xi_first, proj)))),
        "f_xi_xi": float(np.max(np.abs(f_xi_xi @ proj))),
        "f_equals_minus_g": float(np.max(np.abs(_proj_all(fh, proj) + gp))),
    }


def check_nabla_phi(s: AccrStructure, p, fields=None) -> float:
    """Residual of F(x,y,z) = g(phi x, phi y) eta(z) + g(phi x, phi z) eta(y)."""
    f = fields or PointFields(s, p)
    gpp = np.einsum("ai,bj,ab->ij", f.phi, f.phi, f.g)
    rhs = np.einsum("ij,k->ijk", gpp, f.eta) + np.einsum("ik,j->ijk", gpp, f.eta)
    return float(np.max(np.abs(f.F - rhs)))


def check_nijenhuis_form(s: AccrStructure, p, fields=None) -> dict:
    """N = 0 and Nhat = -4 (gtilde - eta x eta) (x) xi, bracket route."""
    f = fields or PointFields(s, p)
    n, nhat = f.nijenhuis_bracket
    shape = np.einsum("ij,k->ijk", f.gtilde - np.outer(f.eta, f.eta), f.eta)
    return {
        "n_zero": float(np.max(np.abs(n))),
        "nhat_form": float(np.max(np.abs(nhat + 4.0 * shape))),
        "nhat_xi_slot": float(np.max(np.abs(np.einsum("a,ajk->jk", f.xi, nhat)))),
    }


def check_corollary(s: AccrStructure, p, fields=None) -> dict:
    """Consequences: eta closed, geodesic xi, theta = -2n eta, theta* = 0,
    [X, xi] horizontal, and nabla_xi X = -phi X - [X, xi]."""
    f = fields or PointFields(s, p)
    n = s.n
    nabla_xi_xi = np.einsum("i,ik->k", f.xi, f.nabla_xi)

    # brackets of projected frame fields with xi, including derivative terms
    W = f.proj
    DW = -np.einsum("bk,j->bkj", f.dxi, f.eta) - np.einsum("k,bj->bkj", f.xi, f.deta)
    bracket = (
        np.einsum("aj,b,kab->jk", W, f.xi, f.c)
        + np.einsum("aj,ak->jk", W, f.dxi)
        - np.einsum("b,bkj->jk", f.xi, DW)
    )
    nabla_xi_X = np.einsum("i,ikj->kj", f.xi, DW) + np.einsum("i,iak,aj->kj", f.xi, f.gamma, W)
    phi_X = f.phi @ W
    vertical_residual = np.einsum("k,jk->j", f.eta, bracket)
    transport = nabla_xi_X.T + phi_X.T + bracket

    return {
        "d_eta": float(np.max(np.abs(f.d_eta))),
        "nabla_xi_xi": float(np.max(np.abs(nabla_xi_xi))),
        "theta_plus_2n_eta": float(np.max(np.abs(f.theta + 2.0 * n * f.eta))),
        "theta_star": float(np.max(np.abs(f.theta_star))),
        "bracket_xi_horizontal": float(np.max(np.abs(vertical_residual))),
        "nabla_xi_transport": float(np.max(np.abs(transport))),
    }


def curvature_identity_residuals(s: AccrStructure, p, fields=None, base_ric=None) -> dict:
    """Curvature identities of Sasaki-like structures.

    phi-commutation:
        R(x,y,phi z,u) - R(x,y,z,phi u)
          = [g(y,z) - 2 eta(y) eta(z)] g(x, phi u)
          + [g(y,u) - 2 eta(y) eta(u)] g(x, phi z)
          - [g(x,z) - 2 eta(x) eta(z)] g(y, phi u)
          - [g(x,u) - 2 eta(x) eta(u)] g(y, phi z)

    plus R(x,y) xi = eta(y) x - eta(x) y, R(xi,X) xi = -X,
    Ric(y,xi) = 2n eta(y), Ric(xi,xi) = 2n,
    R(x,y,xi,z) = eta(y) g(x,z) - eta(x) g(y,z), and, when the leaf Ricci
    is supplied, Ric(Y,Z) = Ric_base(Y,Z) on horizontal arguments.
    """
    f = fields or PointFields(s, p)
    n = s.n
    cur = f.curvature
    r, r_up, ric = cur.r, cur.r_up, cur.ric
    g, phi, eta, xi, proj = f.g, f.phi, f.eta, f.xi, f.proj

    gphi = g @ phi
    a2 = g - 2.0 * np.outer(eta, eta)
    lhs = np.einsum("ijal,ak->ijkl", r, phi) - np.einsum("ijka,al->ijkl", r, phi)
    rhs = (
        np.einsum("jk,il->ijkl", a2, gphi)
        + np.einsum("jl,ik->ijkl", a2, gphi)
        - np.einsum("ik,jl->ijkl", a2, gphi)
        - np.einsum("il,jk->ijkl", a2, gphi)
    )
    curf = float(np.max(np.abs(lhs - rhs)))

    r_xy_xi = np.einsum("ijkl,k->ijl", r_up, xi)
    expected = np.einsum("j,il->ijl", eta, np.eye(s.dim)) - np.einsum("i,jl->ijl", eta, np.eye(s.dim))
    cur_xi = float(np.max(np.abs(r_xy_xi - expected)))

    t = np.einsum("i,k,ijkl->jl", xi, xi, r_up)
    r_xi_x_xi = float(np.max(np.abs(np.einsum("aj,al->jl", proj, t) + proj.T)))

    ric_xi_xi = float(abs(np.einsum("a,b,ab->", xi, xi, ric) - 2.0 * n))
    ric_y_xi = float(np.max(np.abs(ric @ xi - 2.0 * n * eta)))

    r_xi_slot = np.einsum("ijkl,k->ijl", r, xi)
    exp2 = np.einsum("j,il->ijl", eta, g) - np.einsum("i,jl->ijl", eta, g)
    r_xyxiz = float(np.max(np.abs(r_xi_slot - exp2)))

    out = {
        "phi_commutation": curf,
        "r_xy_xi": cur_xi,
        "r_xi_x_xi": r_xi_x_xi,
        "ric_xi_xi": ric_xi_xi,
        "ric_y_xi": ric_y_xi,
        "r_xi_third_slot": r_xyxiz,
    }
    if base_ric is not None:
        out["horizontal_ricci"] = float(
            np.max(np.abs(_proj_all(ric - np.asarray(base_ric), proj)))
        )
    return out


def require_sasaki_like(s: AccrStructure, p, tol=1e-4, fields=None):
    res = check_defining_conditions(s, p, fields=fields)
    worst = max(res.values())
    if worst > tol:
        raise NotSasakiLike(f"defining residual {worst:.3e} exceeds {tol}")


def is_sasaki_like(s: AccrStructure, points, tol=1e-6) -> bool:
    for p in points:
        if max(check_defining_conditions(s, p).values()) > tol:
            return False
    return True


def check_curvature_identities(s: AccrStructure, p, fields=None, base_ric=None, tol=1e-4) -> dict:
    """Raises NotSasakiLike when the defining conditions fail at p."""
    f = fields or PointFields(s, p)
    require_sasaki_like(s, p, tol=tol, fields=f)
    return curvature_identity_residuals(s, p, fields=f, base_ric=base_ric)


@dataclass
class SasakiReport:
    """Aggregated maxima over the sampled points, with verdicts."""

    residual_defining: dict
    residual_nabla_phi: float
    residual_nijenhuis: dict
    residual_corollary: dict
    residual_curvature: dict | None
    residual_cone: float | None
    tolerance: float
    verdicts: dict = field(default_factory=dict)
    coherent: bool = True

    def passed(self) -> bool:
        return all(self.verdicts.values())


def sasaki_report(s: AccrStructure, points, tol=1e-9, with_curvature=True,
                  with_cone=False, base_ric_at=None) -> SasakiReport:
    """Run every Sasaki-like check over the sample points and aggregate."""
    agg_def: dict = {}
    agg_nij: dict = {}
    agg_cor: dict = {}
    agg_cur: dict = {}
    nphi = 0.0
    for p in points:
        f = PointFields(s, p)
        for k, v in check_defining_conditions(s, p, fields=f).items():
            agg_def[k] = max(agg_def.get(k, 0.0), v)
        nphi = max(nphi, check_nabla_phi(s, p, fields=f))
        for k, v in check_nijenhuis_form(s, p, fields=f).items():
            agg_nij[k] = max(agg_nij.get(k, 0.0), v)
        for k, v in check_corollary(s, p, fields=f).items():
            agg_cor[k] = max(agg_cor.get(k, 0.0), v)
        if with_curvature:
            base_ric = base_ric_at(p) if base_ric_at is not None else None
            for k, v in curvature_identity_residuals(s, p, fields=f, base_ric=base_ric).items():
                agg_cur[k] = max(agg_cur.get(k, 0.0), v)

    cone_res = None
    if with_cone:
        cone_res = cone_holomorphic_residual(s).residual

    verdicts = {
        "defining": max(agg_def.values()) < tol,
        "nabla_phi": nphi < tol,
        "nijenhuis_form": max(agg_nij.values()) < tol,
        "corollary": max(agg_cor.values()) < tol,
    }
    if agg_cur:
        verdicts["curvature"] = max(agg_cur.values()) < max(tol, 1e-6)
    if cone_res is not None:
        verdicts["cone"] = cone_res < max(tol, 1e-6)
    equiv = [verdicts["defining"], verdicts["nabla_phi"], verdicts["nijenhuis_form"]]
    return SasakiReport(
        residual_defining=agg_def,
        residual_nabla_phi=nphi,
        residual_nijenhuis=agg_nij,
        residual_corollary=agg_cor,
        residual_curvature=agg_cur or None,
        residual_cone=cone_res,
        tolerance=tol,
        verdicts=verdicts,
        coherent=(len(set(equiv)) == 1),
    )


@dataclass
class ConeCheck:
    residual: float
    per_point: list
    connection_lines: dict
    dj_xi_line: dict


def cone_holomorphic_residual(s: AccrStructure, count=6, seed=42, r_range=(-2.0, -0.5)) -> ConeCheck:
    """max |g_cone((nabla J) y, z)| over sampled (p, r) and frame triples.

    Also cross-checks the closed-form cone connection components, e.g.
    g_cone(nabla_X Y, d/dr) = -r g(X, Y) and g_cone(nabla_X d/dr, Z)
    = r g(X, Z) on horizontal arguments, against the Koszul solution.
    """
    cone, jfield = cone_model(s, r_range=r_range)
    pts = cone.sample_points(count, seed)
    d = s.dim
    worst = 0.0
    per_point = []
    lines_worst: dict = {}
    dj_line: dict = {}

    for p in pts:
        bp, rv = cone.split(p)
        gamma = levi_civita(cone, p).gamma
        G = cone.metric_at(p)
        J = jfield.j_at(p)
        dJ = jfield.j_derivs_at(p)
        nj = dJ + np.einsum("ica,cb->iab", gamma, J) - np.einsum("ac,ibc->iab", J, gamma)
        low = np.einsum("iab,al->ibl", nj, G)
        res = float(np.max(np.abs(low)))
        worst = max(worst, res)
        per_point.append({"r": rv, "residual": res})

        # displayed connection components (horizontal projections)
        f = PointFields(s, bp)
        proj = f.proj
        xic = np.zeros(d + 1)
        xic[:d] = f.xi
        nab = np.einsum("abm,ml->abl", gamma, G)
        g_base = f.g
        gamma_b = f.gamma
        nab_b = np.einsum("abm,mk->abk", gamma_b, g_base)
        gp = proj.T @ g_base @ proj
        r2 = rv * rv

        hor3 = _proj_all(nab[:d, :d, :d], proj) - r2 * _proj_all(nab_b, proj)
        l2 = _proj_all(nab[:d, :d, d], proj) + rv * gp
        l7 = _proj_all(nab[:d, d, :d][:, :], proj) - rv * gp
        l8 = _proj_all(nab[d, :d, :d], proj) - rv * gp
        l3 = _proj_all(np.einsum("abl,l->ab", nab[:d, :d, :], xic)
                       - r2 * np.einsum("abk,k->ab", nab_b, f.xi)
                       - 0.5 * (r2 - 1.0) * f.d_eta, proj)
        nxz_cone = np.einsum("abm,b,mk->ak", gamma[:d, :d, :], f.xi, G)[:, :d]
        nxz_base = np.einsum("abm,b,mk->ak", gamma_b, f.xi, g_base)
        l4 = _proj_all(nxz_cone - r2 * nxz_base + 0.5 * (r2 - 1.0) * f.d_eta, proj)
        for key, val in {
            "horizontal_block": float(np.max(np.abs(hor3))),
            "radial_second_slot": float(np.max(np.abs(l2))),
            "radial_argument": float(np.max(np.abs(l7))),
            "radial_direction": float(np.max(np.abs(l8))),
            "xi_second_slot": float(np.max(np.abs(l3))),
            "xi_argument": float(np.max(np.abs(l4))),
        }.items():
            lines_worst[key] = max(lines_worst.get(key, 0.0), val)

        # covariant derivative of J applied to xi, result paired with Z:
        # direct value vs the closed form -r^2 { g(nabla_X xi, phi Z)
        # - g(X, Z) } + (r^2 - 1)/2 * d eta(X, phi Z).  (The printed source
        # of this line is garbled; this is the symmetric reading.)
        direct = np.einsum("di,b,dmb,mk->ik", proj, xic, nj[:d, :, :], G)[:, :d]
        direct = np.einsum("ik,kj->ij", direct, proj)
        nxi_low = np.einsum("ik,kj->ij", f.nabla_xi, g_base)
        closed = -r2 * (np.einsum("ia,ak->ik", nxi_low, f.phi) - g_base) \
            + 0.5 * (r2 - 1.0) * np.einsum("ia,ak->ik", f.d_eta, f.phi)
        closed = _proj_all(closed, proj)
        gap = float(np.max(np.abs(direct - closed)))
        dj_line["direct_vs_symmetric_reading"] = max(
            dj_line.get("direct_vs_symmetric_reading", 0.0), gap)
        dj_line["direct_max"] = max(dj_line.get("direct_max", 0.0),
                                    float(np.max(np.abs(direct))))

    return ConeCheck(residual=worst, per_point=per_point,
                     connection_lines=lines_worst, dj_xi_line=dj_line)
