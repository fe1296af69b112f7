"""Classification of curves from their normal development.

A curve in S^{m+1}(r) / H^{m+1}(r) / E^{m+1} lies on a geodesic sphere of
radius ``z0`` iff its normal development satisfies ``sum a_i kappa_i + c = 0``
with constant ``a`` (unit) and ``c = cot(z0/r)/r`` (``coth(z0/r)/r``,
``1/z0``); it lies on a totally geodesic hypersurface iff ``c = 0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _fd
from .ambient import Kind, SpaceSpec, geodesic_distance, inner, project_to_model
from .curves import Curve
from .errors import (
    InsufficientDataError,
    InvalidArgumentError,
    UndefinedNormalError,
    VanishingTorsionError,
)
from .framing import FrenetData, RMData, rm_transport

TOL_REL = 1e-5
TOL_ORIGIN = 1e-6
NULL_TOL = 1e-7
EPS_TAU = 1e-6
EPS_KAPPA = 1e-8
# curvature scale below which a development is treated as identically zero
VANISHING_DEV = 1e-7


class Regime(str, enum.Enum):
    SPHERE = "sphere"
    ORIGIN_LINE = "origin_line"
    HYPERBOLIC_NON_SPHERE = "hyperbolic_non_sphere"
    INDETERMINATE = "indeterminate"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class NormalDevelopment:
    values: np.ndarray
    s: np.ndarray

    @property
    def m(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class HyperplaneFit:
    """Affine fit ``<a, kappa> + c = 0`` with ``|a| = 1`` and ``c >= 0``."""

    a: np.ndarray
    c: float
    rms_residual: float
    scale: float
    null_dim: int = 1


@dataclass(frozen=True)
class HyperplaneSection:
    normal: np.ndarray
    rms_residual: float
    relative_residual: float
    offset: float = 0.0
    unique: bool = True


@dataclass(frozen=True)
class SphericalVerdict:
    is_geodesic_sphere: bool
    regime: Regime
    fit: HyperplaneFit
    z0: float | None = None
    center: np.ndarray | None = None
    center_spread: float | None = None


@dataclass(frozen=True)
class TotallyGeodesicVerdict:
    is_totally_geodesic: bool
    development_fit: HyperplaneFit
    development_pass: bool
    section: HyperplaneSection
    section_pass: bool


@dataclass(frozen=True)
class ClassificationReport:
    spherical: SphericalVerdict
    totally_geodesic: TotallyGeodesicVerdict
    tolerances: dict = field(default_factory=dict)

    @property
    def conflict(self) -> bool:
        return self.spherical.is_geodesic_sphere and self.totally_geodesic.is_totally_geodesic


def normal_development(rm: RMData) -> NormalDevelopment:
    return NormalDevelopment(np.array(rm.kappa), np.array(rm.s))


def fit_hyperplane(dev: NormalDevelopment | np.ndarray, prefer: str = "max_offset",
                   null_tol: float = NULL_TOL) -> HyperplaneFit:
    """Total-least-squares affine hyperplane through the development samples.

    The normal is the eigenvector of the smallest eigenvalue of the centred
    second-moment matrix. When several directions are flat (spread below
    ``null_tol * scale``) the hyperplane is chosen among them by offset:
    ``prefer="max_offset"`` takes the one farthest from the origin (so a
    constant development gives ``a = -kappa/|kappa|``, ``c = |kappa|``),
    ``"min_offset"`` the one closest to it.
    """
    X = np.asarray(dev.values if isinstance(dev, NormalDevelopment) else dev, dtype=float)
    if X.ndim != 2 or X.shape[1] == 0:
        raise InvalidArgumentError("development must have m >= 1 columns")
    k, m = X.shape
    if k < m:
        # m points already pin down a hyperplane of the m-dimensional development space
        raise InsufficientDataError(f"need at least m = {m} development samples")
    if prefer not in ("max_offset", "min_offset"):
        raise InvalidArgumentError(f"unknown preference {prefer!r}")
    scale = float(np.sqrt(np.mean(np.sum(X**2, axis=1))))
    mu = X.mean(axis=0)
    Y = X - mu
    evals, evecs = np.linalg.eigh(Y.T @ Y / k)
    spread = np.sqrt(np.maximum(evals, 0.0))
    null = spread <= null_tol * scale
    null[0] = True
    N = evecs[:, null]
    proj = N @ (N.T @ mu)
    if N.shape[1] == 1 or np.linalg.norm(proj) == 0.0:
        a = N[:, 0]
    elif prefer == "max_offset":
        a = -proj / np.linalg.norm(proj)
    else:
        # a unit vector in the flat subspace orthogonal to its centroid component
        u = proj / np.linalg.norm(proj)
        resid = N - np.outer(u, u @ N)
        a = resid[:, np.argmax(np.linalg.norm(resid, axis=0))]
        a = a / np.linalg.norm(a)
    c = float(-a @ mu)
    if c < 0:
        a, c = -a, -c
    rms = float(np.sqrt(np.mean((X @ a + c) ** 2)))
    return HyperplaneFit(a, c, rms, scale, int(N.shape[1]))


def _fit_ok(fit: HyperplaneFit, tol_rel: float) -> bool:
    return fit.rms_residual <= tol_rel * max(fit.scale, fit.c)


def _vanishing(fit: HyperplaneFit, space: SpaceSpec, length_scale: float) -> bool:
    return fit.scale * length_scale <= VANISHING_DEV


def _length_scale(space: SpaceSpec, curve: Curve | None) -> float:
    if space.embedded:
        return space.r
    if curve is None:
        return 1.0
    return max(float(np.sqrt(np.mean(np.sum((curve.samples - curve.samples.mean(0))**2, 1)))),
               1e-300)


def classify_spherical(space: SpaceSpec, fit: HyperplaneFit, tol_rel: float = TOL_REL,
                       tol_origin: float = TOL_ORIGIN) -> SphericalVerdict:
    """Geodesic-sphere verdict and radius from a development fit."""
    if not _fit_ok(fit, tol_rel):
        return SphericalVerdict(False, Regime.NONE, fit)
    c = fit.c
    if c <= tol_origin * fit.scale or c == 0.0:
        return SphericalVerdict(False, Regime.ORIGIN_LINE, fit)
    r = space.r
    if space.kind is Kind.EUCLIDEAN:
        return SphericalVerdict(True, Regime.SPHERE, fit, z0=1.0 / c)
    if space.kind is Kind.SPHERE:
        return SphericalVerdict(True, Regime.SPHERE, fit, z0=r * np.arctan2(1.0, r * c))
    rc = r * c
    if rc > 1.0 + tol_origin:
        return SphericalVerdict(True, Regime.SPHERE, fit, z0=r * np.arctanh(1.0 / rc))
    if rc > 1.0 - tol_origin:
        return SphericalVerdict(False, Regime.INDETERMINATE, fit)
    return SphericalVerdict(False, Regime.HYPERBOLIC_NON_SPHERE, fit)


@dataclass(frozen=True)
class CenterEstimate:
    point: np.ndarray
    spread: float
    stable: bool
    per_sample: np.ndarray = field(repr=False, default=None)


def recover_center(space: SpaceSpec, curve: Curve, rm: RMData, fit: HyperplaneFit, z0: float,
                   tol: float | None = None) -> CenterEstimate:
    """Centre of the geodesic sphere: ``P(s) = exp_{alpha(s)}(z0 w(s))``, ``w = -sum a_i n_i``.

    ``P(s)`` is constant for a spherical curve; the estimate is the mean
    pushed back onto the model and ``spread`` the largest distance from it.
    """
    r = space.r
    tol = 1e-4 * max(1.0, r) if tol is None else tol
    w = -np.einsum("i,nid->nd", fit.a, rm.normals)
    alpha = curve.samples
    if space.kind is Kind.SPHERE:
        P = np.cos(z0 / r) * alpha + r * np.sin(z0 / r) * w
    elif space.kind is Kind.HYPERBOLIC:
        P = np.cosh(z0 / r) * alpha + r * np.sinh(z0 / r) * w
    else:
        P = alpha + z0 * w
    center = project_to_model(space, P.mean(axis=0))
    spread = float(np.max(geodesic_distance(space, P, center)))
    return CenterEstimate(center, spread, spread <= tol, P)


def section_fit(space: SpaceSpec, curve: Curve, null_tol: float = NULL_TOL) -> HyperplaneSection:
    """Best hyperplane containing the samples.

    Sphere/hyperboloid: linear hyperplane ``<x, nu> = 0`` in the ambient form
    (Lorentz pairing on the hyperboloid), ``|nu|_e = 1``. Euclidean space:
    affine hyperplane with free offset.
    """
    X = curve.samples
    k = X.shape[0]
    G = space.metric
    scale = float(np.sqrt(np.mean(np.sum(X**2, axis=1))))
    offset = 0.0
    if space.embedded:
        Y = X * G
        evals, evecs = np.linalg.eigh(Y.T @ Y / k)
    else:
        mu = X.mean(axis=0)
        Y = X - mu
        scale = float(np.sqrt(np.mean(np.sum(Y**2, axis=1))))
        evals, evecs = np.linalg.eigh(Y.T @ Y / k)
    nu = evecs[:, 0]
    nu = nu * np.sign(nu[np.argmax(np.abs(nu))])
    if space.embedded:
        pair = inner(space, X, nu)
    else:
        offset = float(nu @ mu)
        pair = X @ nu - offset
    rms = float(np.sqrt(np.mean(pair**2)))
    spread = np.sqrt(np.maximum(evals, 0.0))
    unique = bool(spread[1] > null_tol * max(scale, 1e-300))
    rel = rms / scale if scale > 0 else 0.0
    return HyperplaneSection(nu, rms, rel, offset, unique)


def classify_totally_geodesic(space: SpaceSpec, curve: Curve, dev: NormalDevelopment,
                              tol_rel: float = TOL_REL,
                              tol_origin: float = TOL_ORIGIN) -> TotallyGeodesicVerdict:
    """Totally-geodesic verdict from two concordant tests.

    Development test: a hyperplane through the origin fits the development
    (residual within ``tol_rel``, offset within ``tol_origin``, both relative
    to the development scale). Section test: the samples lie on a hyperplane
    section of the model (relative residual within ``tol_rel``).
    """
    fit = fit_hyperplane(dev, prefer="min_offset")
    if _vanishing(fit, space, _length_scale(space, curve)):
        dev_pass = True
    else:
        dev_pass = _fit_ok(fit, tol_rel) and fit.c <= tol_origin * fit.scale
    sec = section_fit(space, curve)
    sec_pass = sec.relative_residual <= tol_rel
    return TotallyGeodesicVerdict(dev_pass and sec_pass, fit, dev_pass, sec, sec_pass)


def classify_curve(curve: Curve, tol_rel: float = TOL_REL, tol_origin: float = TOL_ORIGIN,
                   initial_frame=None, rm: RMData | None = None) -> ClassificationReport:
    """Full pipeline: RM frame, development, both verdicts and the centre."""
    space = curve.space
    rm = rm_transport(space, curve, initial_frame) if rm is None else rm
    dev = normal_development(rm)
    fit = fit_hyperplane(dev)
    if _vanishing(fit, space, _length_scale(space, curve)):
        fit = HyperplaneFit(fit.a, 0.0, fit.rms_residual, fit.scale, fit.null_dim)
    verdict = classify_spherical(space, fit, tol_rel, tol_origin)
    if verdict.is_geodesic_sphere:
        est = recover_center(space, curve, rm, fit, verdict.z0)
        verdict = SphericalVerdict(True, verdict.regime, fit, verdict.z0, est.point, est.spread)
    tg = classify_totally_geodesic(space, curve, dev, tol_rel, tol_origin)
    return ClassificationReport(verdict, tg, {"residual": tol_rel, "origin": tol_origin})


# -- Frenet-based residuals ----------------------------------------------------


def _check_frenet(frenet: FrenetData, cols: int):
    bad = np.flatnonzero(frenet.kappa < EPS_KAPPA)
    if bad.size:
        raise UndefinedNormalError("curvature below threshold", int(bad[0]))
    if frenet.torsions.shape[1] < cols:
        raise InvalidArgumentError(f"need {cols} torsion column(s)")
    tau = frenet.torsions[:, :cols]
    bad = np.argwhere(np.abs(tau) < EPS_TAU)
    if bad.size:
        raise VanishingTorsionError("torsion below threshold", int(bad[0, 0]))


def _trim(values, closed: bool, width: int):
    if not closed:
        values = values.copy()
        values[:width] = np.nan
        values[-width:] = np.nan
    return values


def frenet_sphere_residual(space: SpaceSpec, frenet: FrenetData) -> np.ndarray:
    """Per-sample ``d/ds[(1/tau) d/ds(1/kappa)] + tau/kappa``.

    Vanishes exactly for curves on a geodesic sphere of S^3(r), H^3(r) or a
    sphere of E^3. On open curves the samples within reach of the one-sided
    boundary stencils are returned as NaN.
    """
    if space.m != 2:
        raise InvalidArgumentError("the Frenet sphere residual is defined for 3-manifolds")
    _check_frenet(frenet, 1)
    h, closed = frenet.h, frenet.closed
    rho, tau = frenet.rho, frenet.tau
    inner_term = _fd.derivative(rho, h, 1, closed) / tau
    res = _fd.derivative(inner_term, h, 1, closed) + tau * rho
    return _trim(res, closed, 12)


def euclidean_frenet_residual_e4(frenet: FrenetData) -> np.ndarray:
    """Per-sample spherical-curve residual in E^4.

    ``d/ds{ (1/tau_2) [ d/ds((1/tau_1) d/ds(1/kappa)) + tau_1/kappa ] }
    + (tau_2/tau_1) d/ds(1/kappa)``, which vanishes for curves on a sphere.
    """
    space = frenet.space
    if space.kind is not Kind.EUCLIDEAN or space.m != 3:
        raise InvalidArgumentError("the E^4 residual needs Frenet data of a curve in E^4")
    _check_frenet(frenet, 2)
    h, closed = frenet.h, frenet.closed
    rho = frenet.rho
    tau1, tau2 = frenet.torsions[:, 0], frenet.torsions[:, 1]
    drho = _fd.derivative(rho, h, 1, closed)
    bracket = _fd.derivative(drho / tau1, h, 1, closed) + tau1 * rho
    res = _fd.derivative(bracket / tau2, h, 1, closed) + tau2 / tau1 * drho
    return _trim(res, closed, 18)


def rms(values) -> float:
    """Root-mean-square over the finite entries."""
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    return float(np.sqrt(np.mean(v**2))) if v.size else float("nan")
