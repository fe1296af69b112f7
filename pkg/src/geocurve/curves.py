"""Sampled curves, arc-length parametrization and curve generators.

Generators build curves from analytic maps ``theta -> (alpha, alpha')`` and
reparametrize them numerically by arc length (Gauss-Legendre panels plus a
Newton inversion of the length function), so the samples are exact points
of the analytic curve at uniform arc-length spacing. Closed curves store
``n`` samples at ``s_k = k L / n``; the point at ``s = L`` is not repeated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import make_interp_spline

from . import _fd
from .ambient import (
    Kind,
    SpaceSpec,
    check_point,
    exp,
    inner,
    norm,
    project_to_model,
    project_to_tangent,
)
from .errors import (
    EmptyIntersectionError,
    InsufficientDataError,
    InvalidArgumentError,
    RegularityError,
)

MIN_SAMPLES = 5
CLOSED_TOL = 1e-9
MIN_LOOP_SPEED = 1e-3
MAX_LOOP_CURVATURE = 8.0
DEFAULT_N = 2000

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True, eq=False)
class Curve:
    """Curve sampled at increasing arc-length values ``s``."""

    space: SpaceSpec
    samples: np.ndarray
    s: np.ndarray
    closed: bool = False

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        s = np.array(self.s, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != self.space.dim:
            raise InvalidArgumentError(
                f"samples must have shape (n, {self.space.dim}), got {samples.shape}"
            )
        if samples.shape[0] < MIN_SAMPLES:
            raise InsufficientDataError(f"a curve needs at least {MIN_SAMPLES} samples")
        if s.shape != (samples.shape[0],):
            raise InvalidArgumentError("arc-length array must match the number of samples")
        if np.any(np.diff(s) <= 0):
            raise InvalidArgumentError("arc-length values must be strictly increasing")
        check_point(self.space, samples)
        samples.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "closed", bool(self.closed))

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def h(self) -> float:
        return float(self.s[1] - self.s[0])

    @property
    def is_uniform(self) -> bool:
        ds = np.diff(self.s)
        return bool(np.max(np.abs(ds - ds[0])) <= 1e-9 * max(ds[0], 1e-300) + 1e-12)

    @property
    def length(self) -> float:
        if self.closed:
            return self.n * self.h
        return float(self.s[-1] - self.s[0])

    def _require_uniform(self):
        if not self.is_uniform:
            raise InvalidArgumentError(
                "curve is not uniformly sampled; call arc_length_resample first"
            )

    @cached_property
    def velocity(self) -> np.ndarray:
        self._require_uniform()
        return _fd.derivative(self.samples, self.h, 1, self.closed)

    @cached_property
    def acceleration(self) -> np.ndarray:
        self._require_uniform()
        return _fd.derivative(self.samples, self.h, 2, self.closed)

    @cached_property
    def tangent(self) -> np.ndarray:
        """Unit tangent: velocity projected to the tangent space and normalized."""
        t = project_to_tangent(self.space, self.samples, self.velocity)
        return t / norm(self.space, t)[:, None]

    def speed_error(self) -> float:
        """Max deviation of the finite-difference speed from 1."""
        return float(np.max(np.abs(norm(self.space, self.velocity) - 1.0)))


def derivatives(curve: Curve):
    """Unit tangent and embedding second derivative at every sample."""
    return curve.tangent, curve.acceleration


# -- arc-length parametrization -------------------------------------------


def sample_arclength(space: SpaceSpec, f, df, a: float, b: float, n: int,
                     closed: bool = False, panels: int | None = None) -> Curve:
    """Sample the analytic curve ``f`` on ``[a, b]`` at uniform arc length.

    ``f`` and ``df`` map a 1-D array of parameters to arrays of shape
    ``(len(theta), dim)``; ``df`` is the exact parameter derivative.
    """
    if n < MIN_SAMPLES:
        raise InsufficientDataError(f"n must be >= {MIN_SAMPLES}")
    panels = panels or max(64, n // 8)

    def speed(theta):
        return norm(space, df(np.ravel(theta))).reshape(np.shape(theta))

    def gl_integral(lo, hi):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        nodes = mid[:, None] + half[:, None] * _GL_X
        return speed(nodes) @ _GL_W * half

    edges = np.linspace(a, b, panels + 1)
    S_edges = np.concatenate([[0.0], np.cumsum(gl_integral(edges[:-1], edges[1:]))])
    L = S_edges[-1]
    if not L > 0:
        raise RegularityError("curve has zero length")
    targets = np.arange(n) * (L / n) if closed else np.linspace(0.0, L, n)

    theta = np.interp(targets, S_edges, edges)
    for _ in range(20):
        idx = np.clip(np.searchsorted(edges, theta, side="right") - 1, 0, panels - 1)
        S = S_edges[idx] + gl_integral(edges[idx], theta)
        resid = S - targets
        sp = speed(theta)
        if np.any(sp <= 0):
            raise RegularityError("curve speed vanishes")
        theta = np.clip(theta - resid / sp, a, b)
        if np.max(np.abs(resid)) <= 1e-14 * L:
            break
    samples = project_to_model(space, f(theta))
    return Curve(space, samples, targets, closed)


def _duplicate_endpoint(samples) -> bool:
    scale = max(1.0, float(np.max(np.abs(samples))))
    return bool(np.max(np.abs(samples[0] - samples[-1])) <= CLOSED_TOL * scale)


def curve_from_points(space: SpaceSpec, points, closed: bool | None = None,
                      arclength=None) -> Curve:
    """Wrap raw points in a :class:`Curve`, detecting closure by a repeated endpoint.

    Without ``arclength`` the cumulative chord length is used as a provisional
    parameter (call :func:`arc_length_resample` before differentiating).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise InvalidArgumentError("need a 2-D array of points")
    dup = _duplicate_endpoint(pts)
    if dup and closed is not False:
        pts = pts[:-1]
        if arclength is not None:
            arclength = np.asarray(arclength)[:-1]
        closed = True
    closed = bool(closed)
    if arclength is None:
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        if np.any(seg <= 1e-12 * max(1.0, float(np.max(np.abs(pts))))):
            raise RegularityError("consecutive duplicate samples")
        arclength = np.concatenate([[0.0], np.cumsum(seg)])
    return Curve(space, pts, arclength, closed)


def arc_length_resample(curve: Curve, n: int, oversample: int = 8) -> Curve:
    """Resample ``curve`` at ``n`` points uniformly spaced in arc length.

    Positions are interpolated by a quintic spline in the cumulative chord
    length and pushed onto the model. The speed of that curve comes from
    fourth-order centered differences on a fine uniform grid and the
    cumulative length from composite Simpson.
    """
    if n < MIN_SAMPLES:
        raise InsufficientDataError(f"n must be >= {MIN_SAMPLES}")
    space = curve.space
    X = curve.samples
    N = X.shape[0]
    ref = X if not curve.closed else np.vstack([X, X[:1]])
    gaps = np.linalg.norm(np.diff(ref, axis=0), axis=1)
    if np.any(gaps <= 1e-12 * max(1.0, float(np.max(np.abs(X))))):
        raise RegularityError("consecutive duplicate samples")
    u = np.concatenate([[0.0], np.cumsum(gaps)])
    pos = make_interp_spline(u, ref, k=5, bc_type="periodic" if curve.closed else None)

    M = oversample * max(N, n)
    U = np.linspace(0.0, u[-1], M + 1)
    fine = U[:-1] if curve.closed else U
    Q = project_to_model(space, pos(fine))
    dQ = _fd.derivative(Q, U[1] - U[0], 1, curve.closed)
    sp = norm(space, project_to_tangent(space, Q, dQ))
    if curve.closed:
        sp = np.append(sp, sp[0])
    if np.any(sp <= 0):
        raise RegularityError("interpolated curve is not regular")
    S = cumulative_simpson(sp, dx=U[1] - U[0], initial=0.0)
    L = S[-1]
    inv = make_interp_spline(S, U, k=3)
    targets = np.arange(n) * (L / n) if curve.closed else np.linspace(0.0, L, n)
    uj = np.clip(inv(targets), 0.0, u[-1])
    samples = project_to_model(space, pos(uj))
    return Curve(space, samples, targets, curve.closed)


# -- tangent bases ---------------------------------------------------------


def orthonormal_complement(space: SpaceSpec, vectors, count: int, p=None) -> np.ndarray:
    """Gram-Schmidt of coordinate axes against ``vectors`` (and ``p`` if given).

    Uses the ambient form; returns ``count`` rows. Axes nearly parallel to the
    span so far are skipped, earliest axis first.
    """
    G = space.metric
    basis = []
    if p is not None and space.embedded:
        p = np.asarray(p, dtype=float)
        basis.append(p / np.sqrt(abs(inner(space, p, p))))
    for v in vectors:
        v = np.asarray(v, dtype=float)
        basis.append(v / np.sqrt(abs(inner(space, v, v))))
    signs = [float(np.sign(inner(space, b, b))) for b in basis]
    out = []
    for j in range(space.dim):
        x = np.zeros(space.dim)
        x[j] = 1.0
        for b, sg in zip(basis + out, signs + [1.0] * len(out)):
            x = x - sg * np.sum(x * b * G) * b
        nx = np.sqrt(abs(inner(space, x, x)))
        if nx > 1e-6:
            out.append(x / nx)
            if len(out) == count:
                return np.array(out)
    raise InvalidArgumentError("could not complete an orthonormal basis")


def tangent_basis(space: SpaceSpec, p) -> np.ndarray:
    """Orthonormal basis of the tangent space at ``p``, shape ``(m + 1, dim)``."""
    p = check_point(space, p)
    return orthonormal_complement(space, [], space.m + 1, p=p)


def origin(space: SpaceSpec) -> np.ndarray:
    """Reference point: ``r e_0`` on the models, the zero vector in Euclidean space."""
    o = np.zeros(space.dim)
    if space.embedded:
        o[0] = space.r
    return o


def random_point(space: SpaceSpec, rng: np.random.Generator, spread: float = 1.5) -> np.ndarray:
    """Random point; on the hyperboloid within distance ``spread * r`` of the origin."""
    if space.kind is Kind.SPHERE:
        return project_to_model(space, rng.standard_normal(space.dim))
    o = origin(space)
    E = tangent_basis(space, o) if space.embedded else np.eye(space.dim)
    w = rng.standard_normal(space.m + 1)
    w *= rng.uniform(0.0, spread) * (space.r if space.embedded else 1.0) / np.linalg.norm(w)
    return project_to_model(space, exp_curve(space, o, (w @ E)[None], (w @ E)[None])[0][0])


# -- exponential-map pushforward -------------------------------------------


def exp_curve(space: SpaceSpec, p, W, dW):
    """Image of tangent curve ``W(theta)`` at ``p`` under ``exp_p`` and its derivative.

    ``W`` and ``dW`` are ``(N, dim)`` arrays of tangent vectors at ``p``;
    ``W`` must stay away from zero wherever ``dW`` has a radial part.
    """
    p = np.asarray(p, dtype=float)
    W = np.asarray(W, dtype=float)
    dW = np.asarray(dW, dtype=float)
    if not space.embedded:
        return p + W, dW.copy()
    r = space.r
    u = norm(space, W)
    safe = np.where(u > 0, u, 1.0)
    uh = W / safe[:, None]
    du = inner(space, uh, dW)
    duh = (dW - du[:, None] * uh) / safe[:, None]
    x = u / r
    if space.kind is Kind.SPHERE:
        c, s_, sgn = np.cos(x), np.sin(x), -1.0
    else:
        c, s_, sgn = np.cosh(x), np.sinh(x), 1.0
    F = c[:, None] * p + r * s_[:, None] * uh
    dF = (sgn * s_ * du / r)[:, None] * p + (c * du)[:, None] * uh + r * s_[:, None] * duh
    return F, dF


# -- Fourier loops ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FourierLoopSpec:
    """Truncated Fourier series ``w(theta)`` in ``R^dim``.

    ``coeffs[0]`` is the constant term and ``coeffs[2k-1], coeffs[2k]`` the
    cosine/sine coefficients of mode ``k``.
    """

    coeffs: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        c = np.atleast_2d(np.array(self.coeffs, dtype=float))
        if c.shape[0] % 2 != 1:
            raise InvalidArgumentError("coeffs must have 2 * modes + 1 rows")
        object.__setattr__(self, "coeffs", c)

    @property
    def modes(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @classmethod
    def circle(cls, dim: int) -> FourierLoopSpec:
        """Unit great circle in the first two coordinates."""
        c = np.zeros((3, dim))
        c[1, 0] = 1.0
        c[2, 1] = 1.0
        return cls(c)

    @classmethod
    def random(cls, dim: int, seed: int, modes: int = 4, amplitude: float = 0.35,
               offset: float = 0.3) -> FourierLoopSpec:
        """Seeded random loop: a random great circle plus decaying higher modes.

        Redraws until the loop normalized to the unit sphere is regular and
        neither the raw nor the normalized loop turns sharply (curvature at
        most ``MAX_LOOP_CURVATURE``), which keeps finite-difference error on
        the generated curves small.
        """
        rng = np.random.default_rng(seed)
        for _ in range(100):
            c = np.zeros((2 * modes + 1, dim))
            Q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
            c[1] = Q[:, 0]
            c[2] = Q[:, 1] if dim > 1 else 0.0
            c[0] = offset * rng.standard_normal(dim) / np.sqrt(dim)
            c[1:3] += 0.1 * rng.standard_normal((2, dim))
            for k in range(2, modes + 1):
                c[2 * k - 1 : 2 * k + 1] = amplitude / k**2 * rng.standard_normal((2, dim))
            loop = cls(c, seed)
            if (loop.min_raw_norm() > 0.05 and loop.min_unit_speed() > MIN_LOOP_SPEED
                    and loop.max_curvature() <= MAX_LOOP_CURVATURE
                    and loop.max_curvature(unit=True) <= MAX_LOOP_CURVATURE):
                return loop
        raise RegularityError(f"no regular loop found for seed {seed}")

    def raw(self, theta):
        theta = np.asarray(theta, dtype=float)
        k = np.arange(1, self.modes + 1)
        kt = np.multiply.outer(theta, k)
        cos, sin = np.cos(kt), np.sin(kt)
        A, B = self.coeffs[1::2], self.coeffs[2::2]
        w = self.coeffs[0] + cos @ A + sin @ B
        dw = (-sin * k) @ A + (cos * k) @ B
        return w, dw

    def unit(self, theta):
        """Loop normalized pointwise to the unit sphere, with its derivative."""
        w, dw = self.raw(theta)
        nw = np.linalg.norm(w, axis=-1, keepdims=True)
        v = w / nw
        dv = (dw - np.sum(v * dw, axis=-1, keepdims=True) * v) / nw
        return v, dv

    def min_raw_norm(self, samples: int = 4096) -> float:
        w, _ = self.raw(np.linspace(0, 2 * np.pi, samples, endpoint=False))
        return float(np.min(np.linalg.norm(w, axis=-1)))

    def min_unit_speed(self, samples: int = 4096) -> float:
        _, dv = self.unit(np.linspace(0, 2 * np.pi, samples, endpoint=False))
        return float(np.min(np.linalg.norm(dv, axis=-1)))

    def max_curvature(self, unit: bool = False, samples: int = 4096) -> float:
        """Largest curvature of the raw (or normalized) loop as a curve in ``R^dim``."""
        theta = np.linspace(0, 2 * np.pi, samples, endpoint=False)
        w = self.unit(theta)[0] if unit else self.raw(theta)[0]
        h = theta[1]
        d1 = _fd.derivative(w, h, 1, closed=True)
        d2 = _fd.derivative(w, h, 2, closed=True)
        sp2 = np.sum(d1 * d1, axis=-1)
        normal = d2 - (np.sum(d1 * d2, axis=-1) / sp2)[:, None] * d1
        return float(np.max(np.linalg.norm(normal, axis=-1) / sp2))


# -- generators ------------------------------------------------------------


def generate_geodesic_sphere_curve(space: SpaceSpec, p, z0: float, loop: FourierLoopSpec,
                                   n: int = DEFAULT_N) -> Curve:
    """Closed curve on the geodesic sphere of radius ``z0`` centred at ``p``.

    The curve is ``exp_p(z0 v)`` for the loop ``v`` normalized to the unit
    sphere of ``T_p``; arc length is ``r sin(z0/r)`` (``r sinh(z0/r)``,
    ``z0``) times the arc length of ``v``.
    """
    p = check_point(space, p)
    r = space.r
    if space.kind is Kind.SPHERE and not 0 < z0 < np.pi * r / 2:
        raise InvalidArgumentError(f"z0 must lie in (0, pi r / 2) on the sphere, got {z0}")
    if not z0 > 0:
        raise InvalidArgumentError(f"z0 must be positive, got {z0}")
    if loop.dim != space.m + 1:
        raise InvalidArgumentError(f"loop dimension {loop.dim} != m + 1 = {space.m + 1}")
    if loop.min_unit_speed() <= MIN_LOOP_SPEED:
        raise RegularityError("loop is not regular on the unit sphere")
    E = tangent_basis(space, p) if space.embedded else np.eye(space.dim)

    def f(theta):
        v, _ = loop.unit(theta)
        return exp(space, p, v @ E, np.full(len(theta), z0))

    def df(theta):
        _, dv = loop.unit(theta)
        factor = {Kind.SPHERE: r * np.sin(z0 / r), Kind.HYPERBOLIC: r * np.sinh(z0 / r),
                  Kind.EUCLIDEAN: z0}[space.kind]
        return factor * (dv @ E)

    return sample_arclength(space, f, df, 0.0, 2 * np.pi, n, closed=True)


def section_base_point(space: SpaceSpec, normal) -> np.ndarray:
    """A point of the model on the linear hyperplane ``<x, normal> = 0``."""
    nu = np.asarray(normal, dtype=float)
    if space.kind is Kind.EUCLIDEAN:
        return np.zeros(space.dim)
    if space.kind is Kind.SPHERE:
        x = orthonormal_complement(space, [nu], 1)[0]
        return space.r * x
    e0 = np.zeros(space.dim)
    e0[0] = 1.0
    x = e0 - inner(space, e0, nu) / inner(space, nu, nu) * nu
    return project_to_model(space, x)


def generate_totally_geodesic_curve(space: SpaceSpec, normal, loop: FourierLoopSpec | None,
                                    n: int = DEFAULT_N, size: float = 0.6) -> Curve:
    """Curve on the totally geodesic hypersurface cut out by ``<x, normal> = 0``.

    For ``m >= 2`` the curve is ``exp_p`` of the (unnormalized) loop scaled by
    ``size * r`` inside ``T_p`` intersected with the hyperplane. For ``m = 1``
    the hypersurface is a geodesic and that geodesic is returned.
    """
    nu = np.asarray(normal, dtype=float)
    if nu.shape != (space.dim,) or not np.linalg.norm(nu) > 0:
        raise InvalidArgumentError("normal must be a non-zero embedding vector")
    if space.kind is Kind.HYPERBOLIC and not inner(space, nu, nu) > 0:
        raise EmptyIntersectionError(
            "hyperplane normal must be spacelike to meet the hyperboloid"
        )
    p = section_base_point(space, nu)
    E = orthonormal_complement(space, [nu], space.m, p=p if space.embedded else None)
    scale = size * (space.r if space.embedded else 1.0)
    if space.m == 1:
        length = 2 * np.pi * space.r if space.kind is Kind.SPHERE else 4 * scale
        return generate_geodesic(space, p, E[0], length, n)
    if loop is None or loop.dim != space.m:
        raise InvalidArgumentError(f"loop must have dimension m = {space.m}")

    def f(theta):
        w, dw = loop.raw(theta)
        return exp_curve(space, p, scale * w @ E, scale * dw @ E)[0]

    def df(theta):
        w, dw = loop.raw(theta)
        return exp_curve(space, p, scale * w @ E, scale * dw @ E)[1]

    return sample_arclength(space, f, df, 0.0, 2 * np.pi, n, closed=True)


def generate_geodesic(space: SpaceSpec, p, v, length: float, n: int = DEFAULT_N) -> Curve:
    """Unit-speed geodesic ``s -> exp(p, v, s)`` for ``s`` in ``[0, length]``.

    A full great circle (length ``2 pi r``) on the sphere is returned closed.
    """
    p = check_point(space, p)
    v = np.asarray(v, dtype=float)
    v = v / norm(space, v)
    closed = space.kind is Kind.SPHERE and abs(length - 2 * np.pi * space.r) < 1e-12 * space.r
    s = np.arange(n) * (length / n) if closed else np.linspace(0.0, length, n)
    samples = project_to_model(space, exp(space, p, np.broadcast_to(v, (n, space.dim)), s))
    return Curve(space, samples, s, closed)


def generate_random_curve(space: SpaceSpec, seed: int, n: int = DEFAULT_N, modes: int = 4,
                          size: float = 0.8) -> Curve:
    """Generic closed curve: neither on a geodesic sphere nor a totally geodesic hypersurface."""
    r = space.r
    if space.kind is Kind.SPHERE:
        loop = FourierLoopSpec.random(space.dim, seed, modes)

        def f(theta):
            return r * loop.unit(theta)[0]

        def df(theta):
            return r * loop.unit(theta)[1]
    else:
        loop = FourierLoopSpec.random(space.m + 1, seed, modes)
        o = origin(space)
        E = tangent_basis(space, o) if space.embedded else np.eye(space.dim)
        scale = size * (r if space.embedded else 1.0)

        def f(theta):
            w, dw = loop.raw(theta)
            return exp_curve(space, o, scale * w @ E, scale * dw @ E)[0]

        def df(theta):
            w, dw = loop.raw(theta)
            return exp_curve(space, o, scale * w @ E, scale * dw @ E)[1]

    return sample_arclength(space, f, df, 0.0, 2 * np.pi, n, closed=True)


def generate_helix(a: float, b: float, length: float, n: int = DEFAULT_N) -> Curve:
    """Circular helix ``(a cos(s/c), a sin(s/c), b s/c)`` in E^3, ``c^2 = a^2 + b^2``."""
    c = np.hypot(a, b)
    s = np.linspace(0.0, length, n)
    pts = np.column_stack([a * np.cos(s / c), a * np.sin(s / c), b * s / c])
    return Curve(SpaceSpec.euclidean(2), pts, s, closed=False)


def generate_spherical_spiral(space: SpaceSpec, p, z0: float, seed: int,
                              n: int = DEFAULT_N) -> Curve:
    """Open spiral on the geodesic sphere of radius ``z0`` about ``p`` (3-manifolds only).

    The colatitude increases monotonically with the longitude and stays
    below pi/2, so the curvature is monotone and the torsion never vanishes.
    """
    if space.m != 2:
        raise InvalidArgumentError("spherical spirals are defined for 3-dimensional ambients")
    p = check_point(space, p)
    rng = np.random.default_rng(seed)
    phi0 = rng.uniform(0.45, 0.5)
    slope = rng.uniform(0.13, 0.16)
    k = int(rng.integers(2, 4))
    amp = rng.uniform(0.0, 0.05) * slope / k
    psi = rng.uniform(0.0, 2 * np.pi)
    E = tangent_basis(space, p) if space.embedded else np.eye(3)

    def v_dv(theta):
        phi = phi0 + slope * theta + amp * np.sin(k * theta + psi)
        dphi = slope + amp * k * np.cos(k * theta + psi)
        sp, cp, st, ct = np.sin(phi), np.cos(phi), np.sin(theta), np.cos(theta)
        v = np.column_stack([sp * ct, sp * st, cp])
        dv = dphi[:, None] * np.column_stack([cp * ct, cp * st, -sp]) + np.column_stack(
            [-sp * st, sp * ct, np.zeros_like(theta)]
        )
        return v, dv

    def f(theta):
        v, dv = v_dv(theta)
        return exp_curve(space, p, z0 * v @ E, z0 * dv @ E)[0]

    def df(theta):
        v, dv = v_dv(theta)
        return exp_curve(space, p, z0 * v @ E, z0 * dv @ E)[1]

    return sample_arclength(space, f, df, 0.0, 2 * np.pi, n, closed=False)


def generate_helix_control(space: SpaceSpec, seed: int, n: int = DEFAULT_N) -> Curve:
    """Open non-spherical curve: exp-pushed helix with a seeded Fourier wobble (3-manifolds)."""
    if space.m != 2:
        raise InvalidArgumentError("helix controls are defined for 3-dimensional ambients")
    rng = np.random.default_rng(seed)
    scale = 0.5 * (space.r if space.embedded else 1.0)
    pitch = rng.uniform(0.25, 0.4)
    wob = 0.05 * rng.standard_normal((2, 3))
    o = origin(space)
    E = tangent_basis(space, o) if space.embedded else np.eye(3)

    def w_dw(theta):
        c, s_ = np.cos(theta), np.sin(theta)
        c2, s2 = np.cos(2 * theta), np.sin(2 * theta)
        w = np.column_stack([c, s_, pitch * (theta - 1.5 * np.pi)])
        w = w + np.outer(c2, wob[0]) + np.outer(s2, wob[1])
        dw = np.column_stack([-s_, c, np.full_like(theta, pitch)])
        dw = dw - 2 * np.outer(s2, wob[0]) + 2 * np.outer(c2, wob[1])
        return scale * w @ E, scale * dw @ E

    def f(theta):
        return exp_curve(space, o, *w_dw(theta))[0]

    def df(theta):
        return exp_curve(space, o, *w_dw(theta))[1]

    return sample_arclength(space, f, df, 0.0, 3 * np.pi, n, closed=False)


def generate_e4_spherical(radius: float, seed: int, n: int = DEFAULT_N,
                          radial: float = 0.0) -> Curve:
    """Closed curve on S^3(radius) in E^4 near the double circle ``(e^{i t}, b e^{2 i t})``.

    With ``radial != 0`` the distance to the origin is modulated by
    ``1 + radial cos(t + psi)``, giving a non-spherical control.
    """
    rng = np.random.default_rng(seed)
    b = rng.uniform(0.5, 0.7)
    delta = rng.standard_normal((4, 4)) * np.array([[0.05], [0.05], [0.005], [0.005]])
    psi = rng.uniform(0.0, 2 * np.pi)

    def pieces(theta):
        c, s_, c2, s2 = np.cos(theta), np.sin(theta), np.cos(2 * theta), np.sin(2 * theta)
        w = np.column_stack([c, s_, b * c2, b * s2])
        dw = np.column_stack([-s_, c, -2 * b * s2, 2 * b * c2])
        w = w + np.outer(c, delta[0]) + np.outer(s_, delta[1]) + np.outer(c2, delta[2]) \
            + np.outer(s2, delta[3])
        dw = dw - np.outer(s_, delta[0]) + np.outer(c, delta[1]) - 2 * np.outer(s2, delta[2]) \
            + 2 * np.outer(c2, delta[3])
        g = 1.0 + radial * np.cos(theta + psi)
        dg = -radial * np.sin(theta + psi)
        return w, dw, g, dg

    def f(theta):
        w, _, g, _ = pieces(theta)
        return radius * g[:, None] * w / np.linalg.norm(w, axis=1, keepdims=True)

    def df(theta):
        w, dw, g, dg = pieces(theta)
        nw = np.linalg.norm(w, axis=1, keepdims=True)
        wh = w / nw
        dwh = (dw - np.sum(wh * dw, axis=1, keepdims=True) * wh) / nw
        return radius * (dg[:, None] * wh + g[:, None] * dwh)

    return sample_arclength(SpaceSpec.euclidean(3), f, df, 0.0, 2 * np.pi, n, closed=True)
