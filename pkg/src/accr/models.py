"""Pointwise manifold models.

Every model answers three questions at a point p:

* ``metric_at(p)``        frame components g_ij
* ``commutators_at(p)``   coefficients c^k_ij with [e_i, e_j] = c^k_ij e_k
* ``frame_derivative``    directional derivatives e_i(f) of any field

Four concrete kinds are provided: homogeneous Lie-group models (constant
data, exact zero derivatives), chart models (coordinate frame or a moving
coframe, derivatives by finite differences), rank-one product extensions
over a holomorphic complex Riemannian base, and the complex cone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .errors import (
    BadSignature,
    BaseNotHolomorphic,
    NotAntisymmetric,
    RNotNegative,
    SingularCoframe,
)
from .frame_algebra import MetricMatrix

DEFAULT_FD_STEP = 1e-3

# 5-point central stencil, 4th order.  Chosen over the plain 3-point rule
# because curvature needs derivatives of the connection field, and the
# nested-difference noise of a 2nd-order rule breaches the 1e-8 residual
# targets on chart models.
_STENCIL_OFFSETS = (-2.0, -1.0, 1.0, 2.0)
_STENCIL_WEIGHTS = (1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0)


def coordinate_derivatives(fn, x, step=DEFAULT_FD_STEP):
    """Partial derivatives of an array-valued fn along each coordinate of x.

    Returns an array of shape (len(x), *fn(x).shape).
    """
    x = np.asarray(x, dtype=float)
    out = None
    for mu in range(len(x)):
        acc = None
        for off, wt in zip(_STENCIL_OFFSETS, _STENCIL_WEIGHTS):
            xs = x.copy()
            xs[mu] += off * step
            val = wt * np.asarray(fn(xs), dtype=float)
            acc = val if acc is None else acc + val
        acc /= step
        if out is None:
            out = np.zeros((len(x),) + acc.shape)
        out[mu] = acc
    if out is None:
        # zero-dimensional point set (homogeneous model)
        probe = np.asarray(fn(x), dtype=float)
        out = np.zeros((0,) + probe.shape)
    return out


def halton_points(ranges, count, seed):
    """Deterministic low-discrepancy sample of a coordinate box."""
    if count <= 0:
        return []
    lo = np.array([r[0] for r in ranges], dtype=float)
    hi = np.array([r[1] for r in ranges], dtype=float)
    sampler = qmc.Halton(d=len(ranges), scramble=True, seed=seed)
    u = sampler.random(count)
    return [lo + ui * (hi - lo) for ui in u]


class ManifoldModel:
    """Common interface; concrete kinds override the pointwise providers."""

    dim: int
    kind: str
    fd_step: float = DEFAULT_FD_STEP

    def metric_at(self, p) -> np.ndarray:
        raise NotImplementedError

    def commutators_at(self, p) -> np.ndarray:
        raise NotImplementedError

    def frame_derivative(self, p, fn) -> np.ndarray:
        """e_i applied to the field fn, shape (dim, *fn(p).shape)."""
        raise NotImplementedError

    def metric_derivs_at(self, p) -> np.ndarray:
        """D[i,j,k] = e_i(g_jk); overridden where closed forms exist."""
        return self.frame_derivative(p, self.metric_at)

    def derive_scalar(self, p, i, f) -> float:
        """Directional derivative of the scalar field f along e_i at p."""
        return float(self.frame_derivative(p, f)[i])

    def sample_points(self, count, seed):
        raise NotImplementedError


class LieGroupModel(ManifoldModel):
    """Left-invariant data: constant metric and structure constants."""

    kind = "lie_group"

    def __init__(self, structure_constants, metric: MetricMatrix):
        c = np.asarray(structure_constants, dtype=float)
        if np.max(np.abs(c + np.swapaxes(c, 1, 2))) > 0:
            raise NotAntisymmetric("c^k_ij must satisfy c^k_ij = -c^k_ji")
        self.c = c
        self.metric = metric
        self.dim = metric.dim

    def metric_at(self, p):
        return self.metric.components

    def commutators_at(self, p):
        return self.c

    def frame_derivative(self, p, fn):
        return np.zeros((self.dim,) + np.asarray(fn(p)).shape)

    def metric_derivs_at(self, p):
        return np.zeros((self.dim, self.dim, self.dim))

    def jacobi_residual(self) -> float:
        c = self.c
        cyc = (
            np.einsum("mil,ljk->mijk", c, c)
            + np.einsum("mjl,lki->mijk", c, c)
            + np.einsum("mkl,lij->mijk", c, c)
        )
        return float(np.max(np.abs(cyc)))

    def sample_points(self, count, seed):
        # homogeneous: every point carries identical data
        return [np.zeros(0)]


def lie_group_model(n, structure_constants, metric) -> LieGroupModel:
    """Left-invariant model of dimension 2n+1 with signature (n+1, n)."""
    if not isinstance(metric, MetricMatrix):
        metric = MetricMatrix(metric)
    model = LieGroupModel(structure_constants, metric)
    pos, neg = metric.signature_counts()
    if (pos, neg) != (n + 1, n):
        raise BadSignature(f"expected signature ({n + 1},{n}), got ({pos},{neg})")
    if model.dim != 2 * n + 1:
        raise BadSignature(f"metric dimension {model.dim} != {2 * n + 1}")
    return model


class ChartModel(ManifoldModel):
    """Coordinate patch model.

    Without a coframe the working frame is the coordinate frame (all
    commutators vanish, the metric field carries the geometry).  With a
    coframe theta (rows theta[k, mu] give e^k = theta[k,mu] dx^mu) the
    working frame is its dual and the commutators are recovered from
    d e^k (E_i, E_j) = -c^k_ij by finite differences.
    """

    kind = "chart"

    def __init__(self, dim, metric_fn, coframe_fn=None, ranges=None,
                 metric_derivs_fn=None, fd_step=DEFAULT_FD_STEP):
        self.dim = dim
        self.metric_fn = metric_fn
        self.coframe_fn = coframe_fn
        self.metric_derivs_fn = metric_derivs_fn
        self.ranges = ranges if ranges is not None else [(-1.0, 1.0)] * dim
        self.fd_step = fd_step

    def frame_matrix(self, p):
        """A[mu, i] with e_i = A[mu, i] d/dx^mu."""
        if self.coframe_fn is None:
            return np.eye(self.dim)
        theta = np.asarray(self.coframe_fn(p), dtype=float)
        if abs(np.linalg.det(theta)) < 1e-10:
            raise SingularCoframe(f"coframe singular at {p}")
        return np.linalg.inv(theta)

    def metric_at(self, p):
        return np.asarray(self.metric_fn(np.asarray(p, dtype=float)), dtype=float)

    def commutators_at(self, p):
        d = self.dim
        if self.coframe_fn is None:
            return np.zeros((d, d, d))
        p = np.asarray(p, dtype=float)
        A = self.frame_matrix(p)
        dtheta = coordinate_derivatives(self.coframe_fn, p, self.fd_step)
        # d e^k (E_i, E_j) = (d_mu theta[k,nu] - d_nu theta[k,mu]) A[mu,i] A[nu,j]
        ext = np.einsum("mkn,mi,nj->kij", dtheta, A, A)
        ext = ext - np.swapaxes(ext, 1, 2)
        return -ext

    def frame_derivative(self, p, fn):
        p = np.asarray(p, dtype=float)
        A = self.frame_matrix(p)
        dcoord = coordinate_derivatives(fn, p, self.fd_step)
        return np.einsum("mi,m...->i...", A, dcoord)

    def metric_derivs_at(self, p):
        if self.metric_derivs_fn is not None:
            return np.asarray(self.metric_derivs_fn(np.asarray(p, dtype=float)))
        return self.frame_derivative(p, self.metric_at)

    def sample_points(self, count, seed):
        return halton_points(self.ranges, count, seed)


def chart_model(dim, metric_fields, frame=None, ranges=None,
                metric_derivs=None, fd_step=DEFAULT_FD_STEP) -> ChartModel:
    """Chart model from a metric component function and optional coframe."""
    return ChartModel(dim, metric_fields, coframe_fn=frame, ranges=ranges,
                      metric_derivs_fn=metric_derivs, fd_step=fd_step)


@dataclass
class HolomorphicBase:
    """Even-dimensional base (N, J, h) with J an anti-isometry of h.

    ``model`` must be a coordinate-frame chart model of dimension 2n and
    ``j`` a constant complex-structure matrix in that frame.  The associated
    metric is htilde(X, Y) = h(JX, Y).
    """

    model: ChartModel
    j: np.ndarray

    def __post_init__(self):
        self.j = np.asarray(self.j, dtype=float)
        if self.model.dim % 2 != 0:
            raise BaseNotHolomorphic("base dimension must be even")
        if self.model.coframe_fn is not None:
            raise BaseNotHolomorphic("base must use a coordinate frame")
        if np.max(np.abs(self.j @ self.j + np.eye(self.model.dim))) > 1e-12:
            raise BaseNotHolomorphic("J^2 != -Id")

    @property
    def n(self) -> int:
        return self.model.dim // 2

    def h_at(self, p):
        return self.model.metric_at(p)

    def htilde_at(self, p):
        h = self.model.metric_at(p)
        return h @ self.j

    def htilde_derivs_at(self, p):
        return np.einsum("ijm,mk->ijk", self.model.metric_derivs_at(p), self.j)

    def norden_residual(self, p) -> float:
        """h(JX, JY) + h(X, Y) componentwise."""
        h = self.h_at(p)
        return float(np.max(np.abs(self.j.T @ h @ self.j + h)))

    def htilde_symmetry_residual(self, p) -> float:
        ht = self.htilde_at(p)
        return float(np.max(np.abs(ht - ht.T)))


class ProductExtensionModel(ChartModel):
    """M = R_t x N with g = dt^2 + cos(2t) h - sin(2t) htilde.

    Coordinates are (t, base coordinates); the working frame is the
    coordinate frame.  The t-derivatives of the metric are analytic, the
    base derivatives delegate to the base model.
    """

    kind = "product_extension"

    def __init__(self, base: HolomorphicBase, t_range=(-1.2, 1.2)):
        self.base = base
        d = base.model.dim + 1
        ranges = [tuple(t_range)] + list(base.model.ranges)
        super().__init__(d, self._metric, ranges=ranges, fd_step=base.model.fd_step)

    def _metric(self, p):
        t, bp = p[0], p[1:]
        h = self.base.h_at(bp)
        ht = self.base.htilde_at(bp)
        g = np.zeros((self.dim, self.dim))
        g[0, 0] = 1.0
        g[1:, 1:] = np.cos(2 * t) * h - np.sin(2 * t) * ht
        return g

    def metric_derivs_at(self, p):
        t, bp = p[0], p[1:]
        d = self.dim
        D = np.zeros((d, d, d))
        h = self.base.h_at(bp)
        ht = self.base.htilde_at(bp)
        D[0, 1:, 1:] = -2 * np.sin(2 * t) * h - 2 * np.cos(2 * t) * ht
        dh = self.base.model.metric_derivs_at(bp)
        dht = self.base.htilde_derivs_at(bp)
        D[1:, 1:, 1:] = np.cos(2 * t) * dh - np.sin(2 * t) * dht
        return D


def product_extension(base: HolomorphicBase, t_range=(-1.2, 1.2),
                      check=True, check_tol=1e-6, check_points=4):
    """Rank-one extension of a holomorphic complex Riemannian base.

    Returns (model, structure) where the structure carries eta = dt,
    xi = d/dt, phi restricted to the horizontal distribution equal to J.
    Raises BaseNotHolomorphic when nabla^h J fails to vanish on samples.
    """
    from .connection import holomorphy_residual  # deferred: avoids import cycle
    from .structure import AccrStructure

    if check:
        pts = base.model.sample_points(check_points, seed=7)
        for q in pts:
            res = max(
                base.norden_residual(q),
                base.htilde_symmetry_residual(q),
                holomorphy_residual(base, q),
            )
            if res > check_tol:
                raise BaseNotHolomorphic(f"nabla J residual {res:.3e} at {q}")

    model = ProductExtensionModel(base, t_range)
    d = model.dim
    phi = np.zeros((d, d))
    phi[1:, 1:] = base.j
    xi = np.zeros(d)
    xi[0] = 1.0
    eta = np.zeros(d)
    eta[0] = 1.0
    structure = AccrStructure(model=model, n=base.n, phi=phi, xi=xi, eta=eta)
    return model, structure


class ConeModel(ManifoldModel):
    """Complex cone over an almost contact complex Riemannian manifold.

    Points are (base point coordinates..., r) with r < 0.  The metric is

        r^2 (g - eta x eta) + eta x eta - dr^2 / r^2,

    the unique (up to a constant) choice compatible with the cone complex
    structure J X = phi X, J xi = r d/dr, J d/dr = -xi / r acting as an
    anti-isometry, and the one consistent with the extension construction.
    The r-derivatives are analytic.
    """

    kind = "cone"

    def __init__(self, base_model, base_structure, r_range=(-2.0, -0.5)):
        self.base = base_model
        self.structure = base_structure
        self.dim = base_model.dim + 1
        self.r_range = tuple(r_range)
        self.fd_step = base_model.fd_step

    @staticmethod
    def split(p):
        return np.asarray(p[:-1], dtype=float), float(p[-1])

    def _check_r(self, r):
        if r >= 0:
            raise RNotNegative(f"cone requires r < 0, got {r}")

    def metric_at(self, p):
        bp, r = self.split(p)
        self._check_r(r)
        d = self.base.dim
        g = self.base.metric_at(bp)
        eta = self.structure.eta_at(bp)
        G = np.zeros((d + 1, d + 1))
        ee = np.outer(eta, eta)
        G[:d, :d] = r * r * (g - ee) + ee
        G[d, d] = -1.0 / (r * r)
        return G

    def commutators_at(self, p):
        bp, _ = self.split(p)
        d = self.base.dim
        c = np.zeros((d + 1,) * 3)
        c[:d, :d, :d] = self.base.commutators_at(bp)
        return c

    def metric_derivs_at(self, p):
        bp, r = self.split(p)
        self._check_r(r)
        d = self.base.dim
        g = self.base.metric_at(bp)
        eta = self.structure.eta_at(bp)
        ee = np.outer(eta, eta)
        dg = self.base.metric_derivs_at(bp)
        deta = self.structure.eta_derivs_at(bp)
        dee = np.einsum("ij,k->ijk", deta, eta) + np.einsum("j,ik->ijk", eta, deta)
        D = np.zeros((d + 1, d + 1, d + 1))
        D[:d, :d, :d] = r * r * (dg - dee) + dee
        D[d, :d, :d] = 2 * r * (g - ee)
        D[d, d, d] = 2.0 / r**3
        return D

    def frame_derivative(self, p, fn):
        bp, r = self.split(p)
        probe = np.asarray(fn(p), dtype=float)
        out = np.zeros((self.dim,) + probe.shape)
        if self.base.dim:
            lifted = lambda q: fn(np.concatenate([q, [r]]))
            out[: self.base.dim] = self.base.frame_derivative(bp, lifted)
        radial = lambda rv: fn(np.concatenate([bp, rv]))
        out[self.base.dim] = coordinate_derivatives(radial, np.array([r]), self.fd_step)[0]
        return out

    def sample_points(self, count, seed):
        base_pts = self.base.sample_points(count, seed)
        rlo, rhi = self.r_range
        rvals = [-1.0] + [float(x[0]) for x in halton_points([(rlo, rhi)], count - 1, seed + 1)]
        pts = []
        for k in range(count):
            bp = base_pts[k % len(base_pts)]
            pts.append(np.concatenate([bp, [rvals[k % len(rvals)]]]))
        return pts


@dataclass
class ConeComplexStructure:
    """The almost complex structure of the cone, with analytic r-derivatives."""

    cone: ConeModel

    def j_at(self, p):
        bp, r = ConeModel.split(p)
        s = self.cone.structure
        d = self.cone.base.dim
        J = np.zeros((d + 1, d + 1))
        J[:d, :d] = s.phi_at(bp)
        J[d, :d] = r * s.eta_at(bp)
        J[:d, d] = -s.xi_at(bp) / r
        return J

    def j_derivs_at(self, p):
        bp, r = ConeModel.split(p)
        s = self.cone.structure
        d = self.cone.base.dim
        D = np.zeros((d + 1, d + 1, d + 1))
        D[:d, :d, :d] = s.phi_derivs_at(bp)
        D[:d, d, :d] = r * s.eta_derivs_at(bp)
        D[:d, :d, d] = -s.xi_derivs_at(bp) / r
        D[d, d, :d] = s.eta_at(bp)
        D[d, :d, d] = s.xi_at(bp) / (r * r)
        return D


def cone_model(structure, r_range=(-2.0, -0.5)):
    """Build the complex cone over an accR structure.

    Returns (ConeModel, ConeComplexStructure).
    """
    model = ConeModel(structure.model, structure, r_range=r_range)
    return model, ConeComplexStructure(model)
