"""Euclidean space, the round sphere and the hyperboloid model.

Points and tangent vectors are plain numpy arrays in the embedding space
(``R^{m+1}`` for Euclidean space, ``R^{m+2}`` otherwise). All functions
broadcast over leading axes, so a whole curve can be pushed through
``exp``/``log`` in one call.

Sphere S^{m+1}(r): ``<q, q>_e = r^2``.
Hyperboloid H^{m+1}(r): ``<q, q>_1 = -r^2`` with first coordinate > 0, where
``<x, y>_1 = -x_0 y_0 + sum_{i>0} x_i y_i``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import _fd
from .errors import (
    AntipodalError,
    DistanceZeroError,
    DomainError,
    InsufficientDataError,
    InvalidArgumentError,
)

if TYPE_CHECKING:
    from .curves import Curve

CLAMP_TOL = 1e-12
UNIT_TOL = 1e-9
POINT_TOL = 1e-8


class Kind(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    SPHERE = "sphere"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class SpaceSpec:
    """Ambient geometry: kind, intrinsic dimension ``m + 1`` and radius ``r``."""

    kind: Kind
    m: int
    r: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if int(self.m) != self.m or self.m < 1:
            raise InvalidArgumentError(f"m must be an integer >= 1, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        if self.kind is not Kind.EUCLIDEAN and not self.r > 0:
            raise InvalidArgumentError(f"radius must be positive, got {self.r}")
        object.__setattr__(self, "r", float(self.r))

    @classmethod
    def euclidean(cls, m: int) -> SpaceSpec:
        return cls(Kind.EUCLIDEAN, m)

    @classmethod
    def sphere(cls, m: int, r: float = 1.0) -> SpaceSpec:
        return cls(Kind.SPHERE, m, r)

    @classmethod
    def hyperbolic(cls, m: int, r: float = 1.0) -> SpaceSpec:
        return cls(Kind.HYPERBOLIC, m, r)

    @property
    def dim(self) -> int:
        """Embedding dimension."""
        return self.m + 1 if self.kind is Kind.EUCLIDEAN else self.m + 2

    @property
    def embedded(self) -> bool:
        return self.kind is not Kind.EUCLIDEAN

    @property
    def metric(self) -> np.ndarray:
        """Diagonal of the ambient bilinear form."""
        g = np.ones(self.dim)
        if self.kind is Kind.HYPERBOLIC:
            g[0] = -1.0
        return g

    @property
    def gauss_sign(self) -> float:
        """Sign s with ``nabla_x y = d y + s/r^2 <x, y> q``; zero in Euclidean space."""
        return {Kind.EUCLIDEAN: 0.0, Kind.SPHERE: 1.0, Kind.HYPERBOLIC: -1.0}[self.kind]

    @property
    def quadric(self) -> float:
        """Value of ``<q, q>`` on the model (unused for Euclidean space)."""
        return -self.r**2 if self.kind is Kind.HYPERBOLIC else self.r**2

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "m": self.m, "radius": self.r}

    @classmethod
    def from_dict(cls, d: dict) -> SpaceSpec:
        return cls(Kind(d["kind"]), int(d["m"]), float(d.get("radius", 1.0)))


def _check_dim(space: SpaceSpec, *arrays):
    for a in arrays:
        if np.shape(a)[-1] != space.dim:
            raise InvalidArgumentError(
                f"expected vectors of dimension {space.dim}, got shape {np.shape(a)}"
            )


def inner(space: SpaceSpec, x, y) -> np.ndarray:
    """Ambient bilinear form: Lorentz for the hyperboloid, dot product otherwise."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_dim(space, x, y)
    return np.sum(x * y * space.metric, axis=-1)


def norm(space: SpaceSpec, x) -> np.ndarray:
    """Norm of tangent vectors (the form is positive definite on tangent spaces)."""
    return np.sqrt(np.maximum(inner(space, x, x), 0.0))


def _clamp(x, lo, hi, what):
    x = np.asarray(x, dtype=float)
    bad = (x < lo - CLAMP_TOL) | (x > hi + CLAMP_TOL)
    if np.any(bad):
        raise DomainError(f"{what} argument outside [{lo}, {hi}]: {x[bad].ravel()[:3]}")
    return np.clip(x, lo, hi)


def check_point(space: SpaceSpec, q, tol: float = POINT_TOL) -> np.ndarray:
    """Return ``q`` as an array after validating the model constraint."""
    q = np.asarray(q, dtype=float)
    _check_dim(space, q)
    if not np.all(np.isfinite(q)):
        raise InvalidArgumentError("point has non-finite coordinates")
    if space.embedded:
        dev = np.abs(inner(space, q, q) - space.quadric) / space.r**2
        if np.any(dev > tol):
            raise InvalidArgumentError(
                f"point off the {space.kind.value} model by {np.max(dev):.3g} (relative)"
            )
        if space.kind is Kind.HYPERBOLIC and np.any(q[..., 0] <= 0):
            raise InvalidArgumentError("hyperboloid point on the lower sheet (x_0 <= 0)")
    return q


def check_tangent(space: SpaceSpec, p, v, tol: float = POINT_TOL) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    _check_dim(space, v)
    if space.embedded:
        dev = np.abs(inner(space, p, v)) / space.r
        if np.any(dev > tol * np.maximum(1.0, norm(space, v))):
            raise InvalidArgumentError(f"vector not tangent at base point ({np.max(dev):.3g})")
    return v


def project_to_model(space: SpaceSpec, q) -> np.ndarray:
    """Nearest-by-scaling point on the model quadric."""
    q = np.asarray(q, dtype=float)
    if space.kind is Kind.SPHERE:
        return q * (space.r / np.linalg.norm(q, axis=-1, keepdims=True))
    if space.kind is Kind.HYPERBOLIC:
        qq = inner(space, q, q)
        if np.any(qq >= 0) or np.any(q[..., 0] <= 0):
            raise DomainError("vector is not future timelike; cannot project to the hyperboloid")
        return q * (space.r / np.sqrt(-qq))[..., None]
    return q


def project_to_tangent(space: SpaceSpec, p, w) -> np.ndarray:
    """Orthogonal projection (ambient form) of ``w`` onto the tangent space at ``p``."""
    w = np.asarray(w, dtype=float)
    _check_dim(space, p, w)
    if not space.embedded:
        return w.copy()
    p = np.asarray(p, dtype=float)
    coef = inner(space, w, p) / space.quadric
    return w - coef[..., None] * p


def exp(space: SpaceSpec, p, v, u) -> np.ndarray:
    """Point at distance ``u`` along the geodesic leaving ``p`` with unit velocity ``v``."""
    p = check_point(space, p)
    v = check_tangent(space, p, v)
    nv = norm(space, v)
    if np.any(np.abs(nv - 1.0) > UNIT_TOL):
        raise InvalidArgumentError(f"direction must have unit norm, got {nv}")
    u = np.asarray(u, dtype=float)[..., None]
    r = space.r
    if space.kind is Kind.SPHERE:
        return np.cos(u / r) * p + r * np.sin(u / r) * v
    if space.kind is Kind.HYPERBOLIC:
        return np.cosh(u / r) * p + r * np.sinh(u / r) * v
    return p + u * v


def exp_vec(space: SpaceSpec, p, w) -> np.ndarray:
    """Exponential map of an arbitrary tangent vector ``w`` (zero allowed)."""
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=float)
    if not space.embedded:
        return p + w
    r = space.r
    u = norm(space, w)[..., None]
    x = u / r
    small = x < 1e-8
    xs = np.where(small, 1.0, x)
    if space.kind is Kind.SPHERE:
        c = np.cos(x)
        sinc = np.where(small, 1.0 - x**2 / 6, np.sin(xs) / xs)
    else:
        c = np.cosh(x)
        sinc = np.where(small, 1.0 + x**2 / 6, np.sinh(xs) / xs)
    return c * p + sinc * w


def log(space: SpaceSpec, p, q):
    """Inverse of :func:`exp`: returns ``(u, v)`` with ``exp(p, v, u) == q``.

    Raises :class:`DistanceZeroError` when ``q == p`` and
    :class:`AntipodalError` when ``q == -p`` on the sphere.
    """
    p = check_point(space, p)
    q = check_point(space, q)
    r = space.r
    if space.kind is Kind.EUCLIDEAN:
        w = q - p
        u = np.linalg.norm(w, axis=-1)
        if np.any(u <= CLAMP_TOL * np.maximum(1.0, np.linalg.norm(p, axis=-1))):
            raise DistanceZeroError("log undefined for coincident points")
        return u, w / u[..., None]

    c = inner(space, p, q) / space.quadric
    w = q - c[..., None] * p
    wn = norm(space, w)
    if space.kind is Kind.SPHERE:
        if np.any((wn <= CLAMP_TOL * r) & (c > 0)):
            raise DistanceZeroError("log undefined for coincident points")
        if np.any((wn <= CLAMP_TOL * r) & (c < 0)):
            raise AntipodalError("log undefined for antipodal points")
        u = r * np.arctan2(wn / r, c)
    else:
        if np.any(wn <= CLAMP_TOL * r):
            raise DistanceZeroError("log undefined for coincident points")
        u = r * np.arcsinh(wn / r)
    return u, w / wn[..., None]


def geodesic_distance(space: SpaceSpec, p, q) -> np.ndarray:
    """Riemannian distance, computed from the chord for accuracy near zero."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    _check_dim(space, p, q)
    d = p - q
    r = space.r
    if space.kind is Kind.EUCLIDEAN:
        return np.linalg.norm(d, axis=-1)
    if space.kind is Kind.SPHERE:
        half = _clamp(np.linalg.norm(d, axis=-1) / (2 * r), 0.0, 1.0, "arcsin")
        return 2 * r * np.arcsin(half)
    dd = inner(space, d, d)
    scale = np.maximum(np.linalg.norm(p, axis=-1) * np.linalg.norm(q, axis=-1), r**2)
    if np.any(dd < -CLAMP_TOL * scale):
        raise DomainError("points are not on a common hyperboloid sheet")
    return 2 * r * np.arcsinh(np.sqrt(np.maximum(dd, 0.0)) / (2 * r))


def covariant_derivative(space: SpaceSpec, curve: Curve, field) -> np.ndarray:
    """Covariant derivative of a tangent field sampled along ``curve``.

    ``field`` has one row per curve sample. The embedding derivative uses
    the curve's finite-difference stencils; the Gauss-formula correction
    ``+/- (1/r^2) <t, X> q`` is added and the result projected back to the
    tangent spaces.
    """
    field = np.asarray(field, dtype=float)
    if curve.n < 5:
        raise InsufficientDataError("covariant derivative needs at least 5 samples")
    if field.shape != curve.samples.shape:
        raise InvalidArgumentError(
            f"field shape {field.shape} does not match curve samples {curve.samples.shape}"
        )
    dx = _fd.derivative(field, curve.h, 1, curve.closed)
    if not space.embedded:
        return dx
    q = curve.samples
    t = curve.tangent
    corr = space.gauss_sign / space.r**2 * inner(space, t, field)
    return project_to_tangent(space, q, dx + corr[:, None] * q)
