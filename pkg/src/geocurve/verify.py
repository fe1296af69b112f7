"""Seeded end-to-end checks of the geometry, framing and classification code.

Each check builds its inputs from independent ground truth (generators with
known centre, radius or hyperplane; closed-form geodesics) and compares the
pipeline output against it. Results contain no timings, so two runs with the
same seed produce identical text.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import _fd
from .ambient import Kind, SpaceSpec, covariant_derivative, exp, geodesic_distance, inner, log
from .classification import (
    TOL_ORIGIN,
    TOL_REL,
    classify_curve,
    euclidean_frenet_residual_e4,
    fit_hyperplane,
    frenet_sphere_residual,
    normal_development,
    rms,
)
from .curves import (
    FourierLoopSpec,
    generate_e4_spherical,
    generate_geodesic,
    generate_geodesic_sphere_curve,
    generate_helix,
    generate_helix_control,
    generate_random_curve,
    generate_spherical_spiral,
    generate_totally_geodesic_curve,
    origin,
    random_point,
    tangent_basis,
)
from .framing import (
    center_tangent_field,
    euclidean_frenet_general,
    frenet_frame_3d,
    rm_from_frenet_e3,
    rm_transport,
)

N_SAMPLES = 2000


@dataclass
class CheckResult:
    name: str
    passed: bool
    metrics: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def line(self) -> str:
        shown = ", ".join(f"{k}={_short(v)}" for k, v in self.metrics.items())
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<28} {shown}"


def _short(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.3e}"
    return str(v)


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 0
    tol_residual: float = TOL_REL
    tol_origin: float = TOL_ORIGIN
    n: int = N_SAMPLES


def _finish(name, failures, metrics, limit=None, elapsed=None) -> CheckResult:
    if limit is not None and elapsed > limit:
        failures.append(f"runtime above {limit} s")
    metrics = dict(metrics)
    if limit is not None:
        metrics["within_time_limit"] = elapsed <= limit
    return CheckResult(name, not failures, metrics, failures)


# -- 1 -----------------------------------------------------------------------


def check_exp_log(cfg: VerifyConfig) -> CheckResult:
    """exp(p, log(p, q)) == q on random pairs."""
    spaces = [SpaceSpec.sphere(1, 1.0), SpaceSpec.sphere(2, 2.0),
              SpaceSpec.hyperbolic(1, 1.0), SpaceSpec.hyperbolic(2, 0.5)]
    pairs = []
    for i, space in enumerate(spaces):
        rng = np.random.default_rng([cfg.seed, 1, i])
        pts = np.array([random_point(space, rng) for _ in range(2000)])
        pairs.append((space, pts[:1000], pts[1000:]))
    worst = 0.0
    failures = []
    t0 = time.perf_counter()
    for space, p, q in pairs:
        u, v = log(space, p, q)
        err = np.max(np.linalg.norm(exp(space, p, v, u) - q, axis=-1)) / max(1.0, space.r)
        worst = max(worst, float(err))
        if err >= 1e-10:
            failures.append(f"{space.kind.value} m={space.m} r={space.r}: {err:.2e}")
    return _finish("exp_log_round_trip", failures, {"max_rel_error": worst},
                   1.0, time.perf_counter() - t0)


# -- 2 and 4 -----------------------------------------------------------------


def sphere_grid(seed: int, count: int = 50):
    """``count`` cases cycling over space x m x r x z0/r."""
    grid = [(k, m, r, f) for k in (Kind.SPHERE, Kind.HYPERBOLIC) for m in (1, 2, 3)
            for r in (0.5, 1.0, 2.0) for f in (0.3, 0.7)]
    cases = []
    for i in range(count):
        kind, m, r, f = grid[i % len(grid)]
        space = SpaceSpec(kind, m, r)
        rng = np.random.default_rng([seed, 2, i])
        p = random_point(space, rng)
        loop = FourierLoopSpec.random(m + 1, seed=int(rng.integers(2**31)))
        cases.append((space, p, f * r, loop))
    return cases


def _sphere_cases(cfg: VerifyConfig):
    for space, p, z0, loop in sphere_grid(cfg.seed):
        curve = generate_geodesic_sphere_curve(space, p, z0, loop, cfg.n)
        yield space, p, z0, curve


def check_geodesic_spheres(cfg: VerifyConfig) -> CheckResult:
    """Fit residual, recovered radius and centre on generated sphere curves."""
    t0 = time.perf_counter()
    failures = []
    worst_fit = worst_z0 = worst_center = 0.0
    count = 0
    for space, p, z0, curve in _sphere_cases(cfg):
        count += 1
        rep = classify_curve(curve, cfg.tol_residual, cfg.tol_origin)
        sph = rep.spherical
        fit = sph.fit
        rel_fit = fit.rms_residual / max(fit.scale, fit.c)
        worst_fit = max(worst_fit, rel_fit)
        tag = f"{space.kind.value} m={space.m} r={space.r} z0={z0:.3g}"
        if not rel_fit < cfg.tol_residual or not sph.is_geodesic_sphere:
            failures.append(f"{tag}: fit {rel_fit:.2e}, regime {sph.regime.value}")
            continue
        dz = abs(sph.z0 - z0) / space.r
        dc = float(geodesic_distance(space, sph.center, p)) / space.r
        worst_z0, worst_center = max(worst_z0, dz), max(worst_center, dc)
        if dz >= 1e-4:
            failures.append(f"{tag}: z0 error {dz:.2e}")
        if dc >= 1e-4:
            failures.append(f"{tag}: centre error {dc:.2e}")
    return _finish("geodesic_sphere_pipeline", failures,
                   {"curves": count, "max_fit_rel": worst_fit, "max_z0_rel": worst_z0,
                    "max_center_rel": worst_center}, 30.0, time.perf_counter() - t0)


def check_center_field(cfg: VerifyConfig) -> CheckResult:
    """The field of geodesic directions from the centre is rotation minimizing."""
    failures = []
    worst_off = worst_lam = 0.0
    for space, p, z0, curve in _sphere_cases(cfg):
        cf = center_tangent_field(space, curve, p)
        r = space.r
        x = z0 / r
        expected = 1 / (r * np.tan(x)) if space.kind is Kind.SPHERE else 1 / (r * np.tanh(x))
        off = float(np.max(cf.off_tangent))
        lam = float(np.max(np.abs(cf.lam - expected)) / expected)
        worst_off, worst_lam = max(worst_off, off), max(worst_lam, lam)
        if off >= 1e-6 or lam >= 1e-4:
            failures.append(f"{space.kind.value} m={space.m} r={r}: off {off:.2e}, lambda {lam:.2e}")
    return _finish("center_field_rm", failures,
                   {"max_off_tangent": worst_off, "max_lambda_rel": worst_lam})


# -- 3 -----------------------------------------------------------------------


def random_section_normal(space: SpaceSpec, rng) -> np.ndarray:
    """Random unit normal; spacelike with margin on the hyperboloid."""
    while True:
        nu = rng.standard_normal(space.dim)
        nu /= np.linalg.norm(nu)
        if space.kind is not Kind.HYPERBOLIC or inner(space, nu, nu) > 0.2:
            return nu


def check_totally_geodesic(cfg: VerifyConfig, count: int = 20) -> CheckResult:
    """Section curves pass both tests; sphere curves have a large offset.

    Sections of dimension at least two are used: for ``m = 1`` the section
    is a geodesic, whose development vanishes identically.
    """
    failures = []
    worst_c = worst_angle = 0.0
    min_ratio = np.inf
    spaces = [Kind.SPHERE, Kind.HYPERBOLIC, Kind.EUCLIDEAN]
    for j, kind in enumerate(spaces):
        for i in range(count):
            m = 2 + i % 2
            space = SpaceSpec(kind, m, 1.0)
            rng = np.random.default_rng([cfg.seed, 3, j, i])
            nu = random_section_normal(space, rng)
            loop = FourierLoopSpec.random(m, seed=int(rng.integers(2**31)))
            curve = generate_totally_geodesic_curve(space, nu, loop, cfg.n)
            rep = classify_curve(curve, cfg.tol_residual, cfg.tol_origin)
            tg = rep.totally_geodesic
            fit = tg.development_fit
            c_rel = fit.c / fit.scale if fit.scale > 0 else 0.0
            found = tg.section.normal / np.linalg.norm(tg.section.normal)
            angle = float(np.arccos(min(1.0, abs(found @ nu))))
            worst_c, worst_angle = max(worst_c, c_rel), max(worst_angle, angle)
            tag = f"{kind.value} m={m} #{i}"
            if not c_rel < cfg.tol_origin:
                failures.append(f"{tag}: offset {c_rel:.2e}")
            if not angle < 1e-4:
                failures.append(f"{tag}: normal off by {angle:.2e} rad")
            if not tg.is_totally_geodesic:
                failures.append(f"{tag}: verdict false")
    for i, (space, p, z0, loop) in enumerate(sphere_grid(cfg.seed + 1, count)):
        curve = generate_geodesic_sphere_curve(space, p, z0, loop, cfg.n)
        fit = fit_hyperplane(normal_development(rm_transport(space, curve)), prefer="min_offset")
        ratio = fit.c / fit.scale
        min_ratio = min(min_ratio, ratio)
        if not ratio > 0.1:
            failures.append(f"sphere control {i}: c/scale {ratio:.2e}")
    return _finish("totally_geodesic_sections", failures,
                   {"max_offset_rel": worst_c, "max_normal_angle": worst_angle,
                    "min_control_ratio": float(min_ratio)})


# -- 5 -----------------------------------------------------------------------


def check_frenet_residuals(cfg: VerifyConfig, count: int = 5) -> CheckResult:
    """Frenet spherical-curve residual separates spherical curves from controls."""
    failures = []
    worst_sph = worst_e4 = 0.0
    min_ctl = min_e4_ctl = np.inf
    min_tau = np.inf
    for kind in (Kind.SPHERE, Kind.HYPERBOLIC, Kind.EUCLIDEAN):
        space = SpaceSpec(kind, 2, 1.0)
        p = origin(space)
        z0 = 0.8 if space.embedded else 1.0
        for i in range(count):
            seed = cfg.seed * 1000 + i
            fr = frenet_frame_3d(space, generate_spherical_spiral(space, p, z0, seed, cfg.n))
            tau = float(np.min(np.abs(fr.tau)))
            res = rms(frenet_sphere_residual(space, fr))
            min_tau, worst_sph = min(min_tau, tau), max(worst_sph, res)
            if tau <= 0.05:
                failures.append(f"{kind.value} spiral {i}: min |tau| {tau:.3f}")
            if not res < 1e-3:
                failures.append(f"{kind.value} spiral {i}: residual {res:.2e}")
            frc = frenet_frame_3d(space, generate_helix_control(space, seed, cfg.n))
            ctl = rms(frenet_sphere_residual(space, frc))
            min_ctl = min(min_ctl, ctl)
            if not ctl > 1e-1:
                failures.append(f"{kind.value} control {i}: residual {ctl:.2e}")
    for i in range(count):
        seed = cfg.seed * 1000 + i
        res = rms(euclidean_frenet_residual_e4(
            euclidean_frenet_general(generate_e4_spherical(2.0, seed, cfg.n))))
        ctl = rms(euclidean_frenet_residual_e4(
            euclidean_frenet_general(generate_e4_spherical(2.0, seed, cfg.n, radial=0.3))))
        worst_e4, min_e4_ctl = max(worst_e4, res), min(min_e4_ctl, ctl)
        if not res < 1e-2:
            failures.append(f"E4 spherical {i}: residual {res:.2e}")
        if not ctl > 1e-1:
            failures.append(f"E4 control {i}: residual {ctl:.2e}")
    return _finish("frenet_residuals", failures,
                   {"min_abs_tau": min_tau, "max_spherical": worst_sph, "min_control": min_ctl,
                    "max_e4_spherical": worst_e4, "min_e4_control": min_e4_ctl})


# -- 6 -----------------------------------------------------------------------


def best_rotation_rms(a, b) -> float:
    """RMS of ``a - b R`` for the rotation ``R`` of the plane that minimizes it."""
    za = a[:, 0] + 1j * a[:, 1]
    zb = b[:, 0] + 1j * b[:, 1]
    w = np.vdot(zb, za)
    rot = w / abs(w) if abs(w) > 0 else 1.0
    return float(np.sqrt(np.mean(np.abs(za - rot * zb) ** 2)))


def check_rm_frenet_e3(cfg: VerifyConfig, count: int = 5) -> CheckResult:
    """RM frames from Frenet data in E^3 agree with directly transported ones.

    Inputs are helices, spherical spirals and perturbed helices, whose
    curvature stays away from zero so the Frenet frame is well conditioned.
    """
    failures = []
    worst_id = worst_theta = worst_dev = 0.0
    e3 = SpaceSpec.euclidean(2)
    curves = [generate_helix(1.0, 1.0, 4 * np.pi, cfg.n)]
    for i in range(count):
        seed = cfg.seed * 1000 + i
        curves.append(generate_spherical_spiral(e3, np.zeros(3), 1.0, seed, cfg.n))
        curves.append(generate_helix_control(e3, seed, cfg.n))
    for i, curve in enumerate(curves):
        fr = frenet_frame_3d(e3, curve)
        rf = rm_from_frenet_e3(fr, 0.0)
        ident = float(np.max(np.abs(np.sum(rf.kappa**2, axis=1) - fr.kappa**2)))
        dtheta = _fd.derivative(rf.theta, curve.h, 1, closed=False)
        theta_rms = rms(dtheta - fr.tau)
        dev = best_rotation_rms(rm_transport(e3, curve).kappa, rf.kappa)
        worst_id = max(worst_id, ident)
        worst_theta, worst_dev = max(worst_theta, theta_rms), max(worst_dev, dev)
        if not ident < 1e-12:
            failures.append(f"curve {i}: kappa identity {ident:.2e}")
        if not theta_rms < 1e-5:
            failures.append(f"curve {i}: theta' - tau {theta_rms:.2e}")
        if not dev < 1e-5:
            failures.append(f"curve {i}: development mismatch {dev:.2e}")
    return _finish("rm_frenet_consistency_e3", failures,
                   {"max_identity": worst_id, "max_theta_rms": worst_theta,
                    "max_development_rms": worst_dev})


# -- 7 -----------------------------------------------------------------------


def check_gauss_formula(cfg: VerifyConfig, count: int = 10) -> CheckResult:
    """Normal part of the embedding acceleration and geodesic covariant acceleration."""
    failures = []
    worst_normal = worst_geo = 0.0
    for j, kind in enumerate((Kind.SPHERE, Kind.HYPERBOLIC)):
        for i in range(count):
            space = SpaceSpec(kind, 1 + i % 3, (0.5, 1.0, 2.0)[i % 3])
            r = space.r
            curve = generate_random_curve(space, cfg.seed * 1000 + 10 * j + i, cfg.n)
            q, t, acc = curve.samples, curve.velocity, curve.acceleration
            coef = inner(space, acc, q) / space.quadric
            expected = -space.gauss_sign / r**2 * inner(space, t, t)
            err = float(np.max(np.abs(coef - expected)) * r)
            worst_normal = max(worst_normal, err)
            if not err < 1e-6:
                failures.append(f"{kind.value} curve {i}: normal part error {err:.2e}")

            rng = np.random.default_rng([cfg.seed, 7, j, i])
            p = random_point(space, rng)
            v = tangent_basis(space, p).T @ rng.standard_normal(space.m + 1)
            geo = generate_geodesic(space, p, v, 2.0 * r, cfg.n)
            nab = covariant_derivative(space, geo, geo.tangent)
            g = float(np.max(np.sqrt(np.abs(inner(space, nab, nab)))))
            worst_geo = max(worst_geo, g)
            if not g < 1e-6:
                failures.append(f"{kind.value} geodesic {i}: covariant acceleration {g:.2e}")
    return _finish("gauss_formula", failures,
                   {"max_normal_error": worst_normal, "max_geodesic_accel": worst_geo})


# -- 8 -----------------------------------------------------------------------


def check_large_radius(cfg: VerifyConfig) -> CheckResult:
    """Curved-space radius tends to the Euclidean one as the ambient radius grows."""
    failures = []
    metrics = {}
    radius = 1.0
    loop = FourierLoopSpec.random(3, seed=cfg.seed * 1000 + 8)
    e3 = SpaceSpec.euclidean(2)
    euc = classify_curve(generate_geodesic_sphere_curve(e3, np.zeros(3), radius, loop, cfg.n),
                         cfg.tol_residual, cfg.tol_origin).spherical
    if not euc.is_geodesic_sphere:
        failures.append("Euclidean reference not classified spherical")
    for kind in (Kind.SPHERE, Kind.HYPERBOLIC):
        gaps = []
        for r in (10.0, 100.0):
            space = SpaceSpec(kind, 2, r)
            sph = classify_curve(
                generate_geodesic_sphere_curve(space, origin(space), radius, loop, cfg.n),
                cfg.tol_residual, cfg.tol_origin).spherical
            if not sph.is_geodesic_sphere or euc.z0 is None:
                failures.append(f"{kind.value} r={r:g}: not classified spherical")
                continue
            gap = abs(sph.z0 - 1.0 / sph.fit.c) / sph.z0
            to_euclid = abs(sph.z0 - euc.z0) / euc.z0
            gaps.append(gap)
            metrics[f"{kind.value}_r{r:g}_gap"] = gap
            if not gap < 1e-2:
                failures.append(f"{kind.value} r={r:g}: gap {gap:.2e}")
            if not to_euclid < 1e-2:
                failures.append(f"{kind.value} r={r:g}: differs from Euclidean by {to_euclid:.2e}")
        if len(gaps) == 2 and not gaps[1] < gaps[0]:
            failures.append(f"{kind.value}: gap does not shrink with r")
    return _finish("large_radius_limit", failures, metrics)


CHECKS = (
    ("exp_log_round_trip", check_exp_log),
    ("geodesic_sphere_pipeline", check_geodesic_spheres),
    ("totally_geodesic_sections", check_totally_geodesic),
    ("center_field_rm", check_center_field),
    ("frenet_residuals", check_frenet_residuals),
    ("rm_frenet_consistency_e3", check_rm_frenet_e3),
    ("gauss_formula", check_gauss_formula),
    ("large_radius_limit", check_large_radius),
)


def run_all(cfg: VerifyConfig = VerifyConfig()) -> list[CheckResult]:
    results = []
    for name, fn in CHECKS:
        try:
            results.append(fn(cfg))
        except Exception as exc:  # a crashing check is a failing check
            results.append(CheckResult(name, False, {}, [f"{type(exc).__name__}: {exc}"]))
    return results


def format_table(results) -> str:
    lines = [r.line() for r in results]
    for r in results:
        lines += [f"  {r.name}: {f}" for f in r.failures[:10]]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
