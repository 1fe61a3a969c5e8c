"""Built-in example corpus.

Six constructions:

* ``example1``           solvable group, dimension 2n+1, brackets
                          [e_0, e_i] = e_{n+i}, [e_0, e_{n+i}] = -e_i
* ``example1_chart``      the same geometry as a chart with moving coframe
                          e^0 = dt, e^i = cos t dx^i + sin t dx^{n+i},
                          e^{n+i} = -sin t dx^i + cos t dx^{n+i}
* ``example2``            five-dimensional two-parameter solvable group
* ``example2_chart``      its coordinate realization (mu = 0, lambda != 0)
* ``example3_hsphere_ext`` extension over the complex hypersurface
                          h'(z, z) = a, htilde'(z, z) = b of flat space
* ``flat_parallel``       abelian model with F = 0 (designed to fail every
                          Sasaki-like check while passing the accR axioms)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .connection import (
    hsphere_curvature,
    hsphere_extension_horizontal_curvature,
)
from .errors import BadParams, ParamMismatch, UnknownBuiltin
from .frame_algebra import MetricMatrix, Signature
from .models import (
    HolomorphicBase,
    chart_model,
    lie_group_model,
    product_extension,
)
from .sasaki import check_defining_conditions
from .structure import AccrStructure, standard_structure


@dataclass
class CorpusModel:
    """A ready-to-verify model with its metadata."""

    name: str
    model: object
    structure: AccrStructure
    params: dict
    exact: bool                      # derivatives exact (homogeneous) vs FD
    sasaki_expected: bool
    base_ric_at: object = None       # closed-form leaf Ricci, embedded
    base_r_at: object = None         # closed-form leaf curvature, embedded
    coframe_fn: object = None        # chart realizations only
    coord_metric_fn: object = None   # chart realizations only
    lie_partner: str | None = None
    notes: list = field(default_factory=list)
    sample_override: dict | None = None   # {"count":..., "seed":...} from specs


def _example1_constants(n):
    d = 2 * n + 1
    c = np.zeros((d, d, d))
    for i in range(1, n + 1):
        c[n + i, 0, i] = 1.0
        c[n + i, i, 0] = -1.0
        c[i, 0, n + i] = -1.0
        c[i, n + i, 0] = 1.0
    return c


def _example2_constants(lam, mu):
    c = np.zeros((5, 5, 5))
    rows = {
        1: {2: lam, 3: 1.0, 4: mu},
        2: {1: -lam, 3: -mu, 4: 1.0},
        3: {1: -1.0, 2: -mu, 4: lam},
        4: {1: mu, 2: -1.0, 3: -lam},
    }
    for j, terms in rows.items():
        for k, val in terms.items():
            c[k, 0, j] = val
            c[k, j, 0] = -val
    return c


def example1(n=1) -> CorpusModel:
    n = int(n)
    if n < 1:
        raise BadParams("example1 requires n >= 1")
    eps = Signature.standard(n).as_array()
    model = lie_group_model(n, _example1_constants(n), MetricMatrix(np.diag(eps)))
    s = standard_structure(model, n)
    zero_ric = np.zeros((model.dim, model.dim))
    return CorpusModel(
        name="example1", model=model, structure=s, params={"n": n},
        exact=True, sasaki_expected=True,
        base_ric_at=lambda p: zero_ric,
        base_r_at=lambda p: np.zeros((model.dim,) * 4),
        lie_partner=None,
    )


def example2(lam=1.0, mu=0.0) -> CorpusModel:
    lam, mu = float(lam), float(mu)
    metric = MetricMatrix(np.diag([1.0, 1.0, 1.0, -1.0, -1.0]))
    model = lie_group_model(2, _example2_constants(lam, mu), metric)
    s = standard_structure(model, 2)
    zero_ric = np.zeros((5, 5))
    return CorpusModel(
        name="example2", model=model, structure=s, params={"lam": lam, "mu": mu},
        exact=True, sasaki_expected=True,
        base_ric_at=lambda p: zero_ric,
        base_r_at=lambda p: np.zeros((5, 5, 5, 5)),
    )


def example2_connection_table(lam, mu):
    """The displayed nonzero connection coefficients, gamma[i, j, k] layout."""
    g = np.zeros((5, 5, 5))
    g[0, 1, 2], g[0, 1, 4] = lam, mu        # nabla_{e0} e1 = lam e2 + mu e4
    g[1, 0, 3] = -1.0                       # nabla_{e1} e0 = -e3
    g[0, 2, 1], g[0, 2, 3] = -lam, -mu      # nabla_{e0} e2 = -lam e1 - mu e3
    g[2, 0, 4] = -1.0                       # nabla_{e2} e0 = -e4
    g[0, 3, 2], g[0, 3, 4] = -mu, lam       # nabla_{e0} e3 = -mu e2 + lam e4
    g[3, 0, 1] = 1.0                        # nabla_{e3} e0 = e1
    g[0, 4, 1], g[0, 4, 3] = mu, -lam       # nabla_{e0} e4 = mu e1 - lam e3
    g[4, 0, 2] = 1.0                        # nabla_{e4} e0 = e2
    for (i, j) in ((1, 3), (2, 4), (3, 1), (4, 2)):
        g[i, j, 0] = -1.0                   # nabla_{e1} e3 = ... = -e0
    return g


def flat_parallel(n=1) -> CorpusModel:
    n = int(n)
    eps = Signature.standard(n).as_array()
    d = 2 * n + 1
    model = lie_group_model(n, np.zeros((d, d, d)), MetricMatrix(np.diag(eps)))
    s = standard_structure(model, n)
    return CorpusModel(
        name="flat_parallel", model=model, structure=s, params={"n": n},
        exact=True, sasaki_expected=False,
        notes=["parallel structure: F = 0, fails Sasaki-like checks by design"],
    )


def _example1_coframe(n):
    d = 2 * n + 1

    def coframe(x):
        t = x[0]
        th = np.zeros((d, d))
        th[0, 0] = 1.0
        ct, st = np.cos(t), np.sin(t)
        for i in range(1, n + 1):
            th[i, i] = ct
            th[i, n + i] = st
            th[n + i, i] = -st
            th[n + i, n + i] = ct
        return th

    return coframe


def _example1_coord_metric(n):
    d = 2 * n + 1
    eps = Signature.standard(n).as_array()

    def metric(x):
        t = x[0]
        G = np.zeros((d, d))
        G[0, 0] = 1.0
        c2, s2 = np.cos(2 * t), np.sin(2 * t)
        for i in range(1, d):
            G[i, i] = c2 * eps[i]
        for i in range(1, n + 1):
            G[i, n + i] = s2
            G[n + i, i] = s2
        return G

    return metric


def example1_chart(n=1, fd_step=None) -> CorpusModel:
    n = int(n)
    d = 2 * n + 1
    eps = np.diag(Signature.standard(n).as_array())
    coframe = _example1_coframe(n)
    kwargs = {} if fd_step is None else {"fd_step": fd_step}
    model = chart_model(d, lambda x: eps, frame=coframe,
                        ranges=[(-0.9, 0.9)] * d,
                        metric_derivs=lambda x: np.zeros((d, d, d)), **kwargs)
    s = standard_structure(model, n)
    zero_ric = np.zeros((d, d))
    return CorpusModel(
        name="example1_chart", model=model, structure=s, params={"n": n},
        exact=False, sasaki_expected=True,
        base_ric_at=lambda p: zero_ric,
        base_r_at=lambda p: np.zeros((d,) * 4),
        coframe_fn=coframe, coord_metric_fn=_example1_coord_metric(n),
        lie_partner="example1",
    )


def _example2_coframe(lam):
    def coframe(x):
        t = x[0]
        cm, cp = np.cos((1 - lam) * t), np.cos((1 + lam) * t)
        sm, sp = np.sin((1 - lam) * t), np.sin((1 + lam) * t)
        return np.array([
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, cm, -cp, sm, -sp],
            [0.0, sm, sp, -cm, -cp],
            [0.0, -sm, sp, cm, -cp],
            [0.0, cm, cp, sm, sp],
        ])

    return coframe


def _example2_coord_metric():
    def metric(x):
        t = x[0]
        c2, s2 = np.cos(2 * t), np.sin(2 * t)
        G = np.zeros((5, 5))
        G[0, 0] = 1.0
        G[1, 2] = G[2, 1] = -2.0 * c2
        G[3, 4] = G[4, 3] = 2.0 * c2
        G[1, 4] = G[4, 1] = -2.0 * s2
        G[2, 3] = G[3, 2] = -2.0 * s2
        return G

    return metric


def example2_chart(lam=1.0, mu=0.0, fd_step=None) -> CorpusModel:
    lam, mu = float(lam), float(mu)
    if mu != 0.0:
        raise BadParams("the coordinate realization exists only for mu = 0")
    if lam == 0.0:
        raise BadParams("the coordinate realization requires lambda != 0")
    eps = np.diag([1.0, 1.0, 1.0, -1.0, -1.0])
    coframe = _example2_coframe(lam)
    kwargs = {} if fd_step is None else {"fd_step": fd_step}
    model = chart_model(5, lambda x: eps, frame=coframe,
                        ranges=[(-0.9, 0.9)] * 5,
                        metric_derivs=lambda x: np.zeros((5, 5, 5)), **kwargs)
    s = standard_structure(model, 2)
    zero_ric = np.zeros((5, 5))
    return CorpusModel(
        name="example2_chart", model=model, structure=s,
        params={"lam": lam, "mu": 0.0},
        exact=False, sasaki_expected=True,
        base_ric_at=lambda p: zero_ric,
        base_r_at=lambda p: np.zeros((5, 5, 5, 5)),
        coframe_fn=coframe, coord_metric_fn=_example2_coord_metric(),
        lie_partner="example2",
    )


def hsphere_base(n, a, b, box=0.22, fd_step=None) -> HolomorphicBase:
    """Chart of the complex hypersurface sum_j (w^j)^2 = a - i b of C^{n+1}
    near w = 0, in the n holomorphic coordinates (w^1 .. w^n).

    The induced holomorphic metric is hC_jk = delta_jk + w^j w^k / D with
    D = (a - i b) - sum (w^m)^2; its real part in the real coordinates
    (u, v), w = u + i v, gives the chart metric, with J the standard
    multiplication by i.  Derivatives are analytic (holomorphic rules).
    """
    if a == 0 and b == 0:
        raise BadParams("(a, b) = (0, 0) is excluded")
    cplx = complex(a, -b)

    def real_block(m):
        return np.block([[m.real, -m.imag], [-m.imag, -m.real]])

    def hC(w):
        denom = cplx - np.sum(w * w)
        return np.eye(n, dtype=complex) + np.outer(w, w) / denom

    def metric_fn(x):
        w = x[:n] + 1j * x[n:]
        return real_block(hC(w))

    def metric_derivs_fn(x):
        w = x[:n] + 1j * x[n:]
        denom = cplx - np.sum(w * w)
        ww = np.outer(w, w)
        out = np.zeros((2 * n, 2 * n, 2 * n))
        for m in range(n):
            dm = np.zeros((n, n), dtype=complex)
            dm[m, :] += w
            dm[:, m] += w
            dm = dm / denom + 2.0 * w[m] * ww / (denom * denom)
            out[m] = real_block(dm)
            out[n + m] = real_block(1j * dm)
        return out

    j = np.zeros((2 * n, 2 * n))
    j[n:, :n] = np.eye(n)
    j[:n, n:] = -np.eye(n)
    kwargs = {} if fd_step is None else {"fd_step": fd_step}
    model = chart_model(2 * n, metric_fn, ranges=[(-box, box)] * (2 * n),
                        metric_derivs=metric_derivs_fn, **kwargs)
    return HolomorphicBase(model=model, j=j)


def flat_norden_base(n, fd_step=None) -> HolomorphicBase:
    """Flat R^{2n} with the constant standard pair (h, J)."""
    h = np.diag([1.0] * n + [-1.0] * n)
    j = np.zeros((2 * n, 2 * n))
    j[n:, :n] = np.eye(n)
    j[:n, n:] = -np.eye(n)
    kwargs = {} if fd_step is None else {"fd_step": fd_step}
    model = chart_model(2 * n, lambda x: h, ranges=[(-1.0, 1.0)] * (2 * n),
                        metric_derivs=lambda x: np.zeros((2 * n,) * 3), **kwargs)
    return HolomorphicBase(model=model, j=j)


def example3_hsphere_ext(n=3, a=1.0, b=0.0, fd_step=None) -> CorpusModel:
    n = int(n)
    a, b = float(a), float(b)
    if n < 1:
        raise BadParams("n >= 1 required")
    if a == 0 and b == 0:
        raise BadParams("(a, b) = (0, 0) is excluded")
    base = hsphere_base(n, a, b, fd_step=fd_step)
    model, s = product_extension(base)
    d = model.dim

    def embed2(m):
        out = np.zeros((d, d))
        out[1:, 1:] = m
        return out

    def embed4(m):
        out = np.zeros((d, d, d, d))
        out[1:, 1:, 1:, 1:] = m
        return out

    def base_ric_at(p):
        bp = p[1:]
        h = base.h_at(bp)
        ht = base.htilde_at(bp)
        return embed2(hsphere_curvature(n, a, b, h=h, htilde=ht).ric)

    def base_r_at(p):
        t, bp = p[0], p[1:]
        h = base.h_at(bp)
        ht = base.htilde_at(bp)
        return embed4(hsphere_extension_horizontal_curvature(t, n, a, b, h, ht))

    notes = []
    if n <= 2:
        notes.append("n <= 2 is outside the stated range for this family")
    return CorpusModel(
        name="example3_hsphere_ext", model=model, structure=s,
        params={"n": n, "a": a, "b": b},
        exact=False, sasaki_expected=True,
        base_ric_at=base_ric_at, base_r_at=base_r_at, notes=notes,
    )


BUILTINS = {
    "example1": (example1, "solvable group, any n"),
    "example1_chart": (example1_chart, "chart realization of example1"),
    "example2": (example2, "5-dimensional group with parameters (lam, mu)"),
    "example2_chart": (example2_chart, "chart realization of example2 (mu = 0)"),
    "example3_hsphere_ext": (example3_hsphere_ext,
                             "extension over the h-sphere (n, a, b)"),
    "flat_parallel": (flat_parallel, "parallel structure, designed Sasaki failure"),
}


def builtin(name, **params) -> CorpusModel:
    """Construct a named corpus model.  Unknown names or bad parameter
    combinations raise UnknownBuiltin / BadParams."""
    if name not in BUILTINS:
        raise UnknownBuiltin(f"unknown builtin {name!r}; try: {', '.join(sorted(BUILTINS))}")
    fn, _ = BUILTINS[name]
    try:
        return fn(**params)
    except TypeError as exc:
        raise BadParams(str(exc)) from None


def default_corpus(fd_step=None) -> list:
    return [
        example1(n=1),
        example1(n=2),
        example2(lam=1.0, mu=0.0),
        example2(lam=3.0, mu=-2.0),
        example1_chart(n=1, fd_step=fd_step),
        example2_chart(lam=1.0, fd_step=fd_step),
        example3_hsphere_ext(n=3, a=1.0, b=0.0, fd_step=fd_step),
        flat_parallel(n=1),
    ]


def cross_representation_check(lie: CorpusModel, chart: CorpusModel,
                               count=20, seed=42) -> dict:
    """Compare a group model against its coordinate realization.

    (i) the finite-difference structure equations of the chart coframe must
    reproduce the group structure constants, (ii) the metric assembled as
    sum_k eps_k (e^k)^2 must match the closed-form coordinate metric, and
    (iii) the Sasaki-like verdicts must agree.
    """
    if chart.lie_partner != lie.name:
        raise ParamMismatch(f"{chart.name} is not the chart form of {lie.name}")
    shared = set(lie.params) & set(chart.params)
    for key in shared:
        if lie.params[key] != chart.params[key]:
            raise ParamMismatch(f"parameter {key}: {lie.params[key]} != {chart.params[key]}")

    c_lie = lie.model.commutators_at(np.zeros(0))
    eps = Signature.standard(lie.structure.n).as_array()
    pts = chart.model.sample_points(count, seed)

    worst_struct = 0.0
    worst_metric = 0.0
    for p in pts:
        c_chart = chart.model.commutators_at(p)
        worst_struct = max(worst_struct, float(np.max(np.abs(c_chart - c_lie))))
        th = np.asarray(chart.coframe_fn(p), dtype=float)
        assembled = np.einsum("k,km,kn->mn", eps, th, th)
        worst_metric = max(worst_metric, float(np.max(np.abs(assembled - chart.coord_metric_fn(p)))))

    tol_lie, tol_chart = 1e-9, 1e-6
    v_lie = max(check_defining_conditions(lie.structure, np.zeros(0)).values()) < tol_lie
    v_chart = all(
        max(check_defining_conditions(chart.structure, p).values()) < tol_chart
        for p in pts[: min(len(pts), 5)]
    )
    return {
        "structure_equations": worst_struct,
        "metric_assembly": worst_metric,
        "verdict_agreement": 0.0 if v_lie == v_chart else 1.0,
        "sasaki_lie": v_lie,
        "sasaki_chart": v_chart,
    }
