"""Frenet frames and rotation-minimizing (RM) frames along sampled curves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from . import _fd
from .ambient import (
    Kind,
    SpaceSpec,
    covariant_derivative,
    inner,
    log,
    norm,
    project_to_tangent,
)
from .curves import Curve, orthonormal_complement
from .errors import (
    DegenerateDerivativeError,
    InvalidArgumentError,
    NumericalInstabilityError,
    UndefinedNormalError,
)

EPS_KAPPA = 1e-8
GS_PIVOT = 1e-8
ORTHO_TOL = 1e-8
DRIFT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class FrenetData:
    """Frenet apparatus per sample.

    ``frames[:, 0]`` is the unit tangent. For 3-manifolds the rows are
    ``(t, n, b)`` and ``torsions`` has the single column ``tau``; in
    Euclidean ``E^{m+1}`` the rows are ``e_0..e_m`` and ``torsions`` holds
    ``tau_1..tau_{m-1}``.
    """

    space: SpaceSpec
    s: np.ndarray
    h: float
    closed: bool
    frames: np.ndarray
    kappa: np.ndarray
    torsions: np.ndarray

    @property
    def tau(self) -> np.ndarray:
        return self.torsions[:, 0]

    @property
    def rho(self) -> np.ndarray:
        """Radius of curvature."""
        return 1.0 / self.kappa

    @property
    def t(self):
        return self.frames[:, 0]

    @property
    def n(self):
        return self.frames[:, 1]

    @property
    def b(self):
        return self.frames[:, 2]


@dataclass(frozen=True, eq=False)
class RMData:
    """RM frame ``(t, n_1..n_m)`` per sample and the normal development ``kappa_i``."""

    space: SpaceSpec
    s: np.ndarray
    h: float
    closed: bool
    frames: np.ndarray
    kappa: np.ndarray
    theta: np.ndarray | None = None

    @property
    def t(self):
        return self.frames[:, 0]

    @property
    def normals(self):
        return self.frames[:, 1:]


def frame_deviation(space: SpaceSpec, frames) -> float:
    """Max deviation of the frames' Gram matrices (ambient form) from the identity."""
    G = space.metric
    gram = np.einsum("nid,njd->nij", frames * G, frames)
    return float(np.max(np.abs(gram - np.eye(frames.shape[1]))))


def _null_vector(rows) -> np.ndarray:
    """Unit Euclidean null vector of each stacked ``(k, k+1)`` matrix."""
    _, _, vt = np.linalg.svd(rows)
    return vt[:, -1, :]


def _orient(space: SpaceSpec, q, frames, last):
    """Flip ``last`` where ``det[q?, frames..., last]`` is negative."""
    cols = [frames[:, i] for i in range(frames.shape[1])] + [last]
    if space.embedded:
        cols = [q] + cols
    det = np.linalg.det(np.stack(cols, axis=1))
    return np.where((det < 0)[:, None], -last, last)


def frenet_frame_3d(space: SpaceSpec, curve: Curve) -> FrenetData:
    """Frenet frame, curvature and torsion of a curve in a 3-manifold.

    ``tau = -<nabla_t b, n>``; ``b`` completes a positively oriented frame
    (against the position vector in the embedded models).
    """
    if space.m != 2:
        raise InvalidArgumentError("frenet_frame_3d needs a 3-dimensional ambient (m = 2)")
    q = curve.samples
    t = curve.tangent
    acc = curve.acceleration
    r2 = space.r**2
    nabla_tt = acc
    if space.embedded:
        nabla_tt = acc + (space.gauss_sign / r2 * inner(space, t, t))[:, None] * q
    nabla_tt = project_to_tangent(space, q, nabla_tt)
    # finite differences leave t slightly off unit length and off the tangent space;
    # orthonormalize so the frame meets the ambient form to rounding error
    t = project_to_tangent(space, q, t)
    t = t / norm(space, t)[:, None]
    nabla_tt = nabla_tt - inner(space, nabla_tt, t)[:, None] * t
    kappa = norm(space, nabla_tt)
    bad = np.flatnonzero(kappa < EPS_KAPPA)
    if bad.size:
        raise UndefinedNormalError("curvature below threshold; principal normal undefined",
                                   int(bad[0]))
    nvec = nabla_tt / kappa[:, None]
    G = space.metric
    rows = np.stack([t, nvec] + ([q] if space.embedded else []), axis=1) * G
    b = _null_vector(rows)
    b = b / norm(space, b)[:, None]
    b = _orient(space, q, np.stack([t, nvec], axis=1), b)
    db = covariant_derivative(space, curve, b)
    tau = -inner(space, db, nvec)
    frames = np.stack([t, nvec, b], axis=1)
    return FrenetData(space, curve.s, curve.h, curve.closed, frames, kappa, tau[:, None])


def euclidean_frenet_general(curve: Curve) -> FrenetData:
    """Frenet frame ``e_0..e_m`` and curvatures of a curve in ``E^{m+1}``.

    ``e_0..e_{m-1}`` come from Gram-Schmidt on the first ``m`` derivatives,
    ``e_m`` completes a positively oriented frame; ``kappa = <alpha'', e_1>``
    and ``tau_i = <e_i', e_{i+1}>``.
    """
    space = curve.space
    if space.kind is not Kind.EUCLIDEAN:
        raise InvalidArgumentError("euclidean_frenet_general needs a Euclidean curve")
    m = space.m
    h, closed = curve.h, curve.closed
    derivs = [_fd.derivative(curve.samples, h, j, closed) for j in range(1, m + 1)]
    frames = []
    for j, d in enumerate(derivs):
        x = d.copy()
        for e in frames:
            x -= np.sum(x * e, axis=1, keepdims=True) * e
        nx = np.linalg.norm(x, axis=1)
        bad = np.flatnonzero(nx <= GS_PIVOT)
        if bad.size:
            raise DegenerateDerivativeError(
                f"derivative {j + 1} is linearly dependent on lower ones", int(bad[0])
            )
        frames.append(x / nx[:, None])
    F = np.stack(frames, axis=1)
    last = _orient(space, None, F, _null_vector(F))
    F = np.concatenate([F, last[:, None]], axis=1)
    kappa = np.sum(derivs[1] * F[:, 1], axis=1)
    bad = np.flatnonzero(kappa < EPS_KAPPA)
    if bad.size:
        raise UndefinedNormalError("curvature below threshold", int(bad[0]))
    torsions = np.column_stack(
        [np.sum(_fd.derivative(F[:, i], h, 1, closed) * F[:, i + 1], axis=1) for i in range(1, m)]
    ) if m > 1 else np.zeros((curve.n, 0))
    return FrenetData(space, curve.s, h, closed, F, kappa, torsions)


# -- rotation-minimizing frames ---------------------------------------------


def default_normals(space: SpaceSpec, q0, t0) -> np.ndarray:
    """Deterministic RM initial normals: Gram-Schmidt of the coordinate axes.

    The last normal is flipped if needed so that ``det[q?, t, n_1..n_m] > 0``.
    """
    N = orthonormal_complement(space, [t0], space.m, p=q0 if space.embedded else None)
    cols = ([q0] if space.embedded else []) + [t0] + list(N)
    if np.linalg.det(np.stack(cols, axis=1)) < 0:
        N[-1] = -N[-1]
    return N


def _normalize_frame(space: SpaceSpec, q, t, N, iters: int = 5):
    """Project normals off ``q`` and ``t``, then symmetric re-orthonormalization."""
    G = space.metric
    if space.embedded:
        N = N - np.outer(N @ (q * G) / space.quadric, q)
    N = N - np.outer(N @ (t * G), t)
    eye = np.eye(N.shape[0])
    for _ in range(iters):
        gram = (N * G) @ N.T
        if np.max(np.abs(gram - eye)) < 1e-15:
            break
        N = 0.5 * (3 * eye - gram) @ N
    return N


def rm_transport(space: SpaceSpec, curve: Curve, initial_frame=None) -> RMData:
    """Transport normals with ``n_i' = -<alpha'', n_i> t`` (classical RK4).

    Midpoint values of ``t`` and ``alpha''`` come from cubic interpolation;
    every step is followed by re-orthonormalization against the position
    normal and ``t``. Records ``kappa_i = <nabla_t t, n_i>``.
    """
    q = curve.samples
    t = curve.tangent
    acc = curve.acceleration
    n, d = q.shape
    m = space.m
    h = curve.h
    G = space.metric

    if initial_frame is None:
        N = default_normals(space, q[0], t[0])
    else:
        N = np.array(initial_frame, dtype=float)
        if N.shape != (m, d):
            raise InvalidArgumentError(f"initial frame must have shape ({m}, {d})")
        full = np.concatenate([t[:1], N])[None]
        if frame_deviation(space, full) > ORTHO_TOL:
            raise InvalidArgumentError("initial frame is not orthonormal and normal to t")
        if space.embedded and np.max(np.abs(N @ (q[0] * G))) > ORTHO_TOL * space.r:
            raise InvalidArgumentError("initial frame is not tangent to the model")

    tm = _fd.midpoints(t, curve.closed)[: n - 1]
    am = _fd.midpoints(acc, curve.closed)[: n - 1]

    def generator(tt, aa):
        return -np.einsum("ki,kj->kij", tt, aa * G)

    A0 = generator(t[:-1], acc[:-1])
    Am = generator(tm, am)
    A1 = generator(t[1:], acc[1:])
    eye = np.eye(d)
    K1 = A0
    K2 = Am @ (eye + 0.5 * h * K1)
    K3 = Am @ (eye + 0.5 * h * K2)
    K4 = A1 @ (eye + h * K3)
    M = eye + (h / 6.0) * (K1 + 2 * K2 + 2 * K3 + K4)

    normals = np.empty((n, m, d))
    normals[0] = N
    for k in range(n - 1):
        N = N @ M[k].T
        N = _normalize_frame(space, q[k + 1], t[k + 1], N)
        normals[k + 1] = N
    if not np.all(np.isfinite(normals)):
        raise NumericalInstabilityError("RM transport produced non-finite values")
    frames = np.concatenate([t[:, None], normals], axis=1)
    dev = frame_deviation(space, frames)
    if dev > DRIFT_TOL:
        raise NumericalInstabilityError(
            f"RM frame orthonormality drift {dev:.2e}; resample the curve more finely"
        )
    kappa = np.einsum("nid,nd->ni", normals * G, acc)
    return RMData(space, curve.s, h, curve.closed, frames, kappa)


def rm_from_frenet_e3(frenet: FrenetData, theta0: float = 0.0) -> RMData:
    """RM frame from a Frenet frame in E^3 via ``theta' = tau``.

    ``n_1 = cos(theta) n - sin(theta) b``, ``n_2 = sin(theta) n + cos(theta) b``,
    ``kappa_1 = kappa cos(theta)``, ``kappa_2 = kappa sin(theta)``.
    """
    if frenet.space.kind is not Kind.EUCLIDEAN or frenet.space.m != 2:
        raise InvalidArgumentError("rm_from_frenet_e3 needs Frenet data of a curve in E^3")
    theta = theta0 + cumulative_simpson(frenet.tau, dx=frenet.h, initial=0.0)
    c, s = np.cos(theta), np.sin(theta)
    nvec, b = frenet.n, frenet.b
    n1 = c[:, None] * nvec - s[:, None] * b
    n2 = s[:, None] * nvec + c[:, None] * b
    frames = np.stack([frenet.t, n1, n2], axis=1)
    kappa = np.column_stack([frenet.kappa * c, frenet.kappa * s])
    return RMData(frenet.space, frenet.s, frenet.h, frenet.closed, frames, kappa, theta)


# -- center-tangent field ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class CenterField:
    """Unit tangents of the geodesics from a centre, evaluated along a curve.

    ``lam = <nabla_t field, t>``; ``off_tangent`` is the norm of the part of
    ``nabla_t field`` orthogonal to ``t`` (zero for an RM field) and
    ``normality = <t, field>`` (zero for a normal curve).
    """

    field: np.ndarray
    lam: np.ndarray
    off_tangent: np.ndarray
    normality: np.ndarray


def center_tangent_field(space: SpaceSpec, curve: Curve, p) -> CenterField:
    p = np.asarray(p, dtype=float)
    _, v = log(space, curve.samples, np.broadcast_to(p, curve.samples.shape))
    field = -v
    t = curve.tangent
    dfield = covariant_derivative(space, curve, field)
    lam = inner(space, dfield, t)
    off = norm(space, dfield - lam[:, None] * t)
    return CenterField(field, lam, off, inner(space, t, field))
