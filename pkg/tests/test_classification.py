import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geocurve.ambient import SpaceSpec, geodesic_distance
from geocurve.classification import (
    HyperplaneFit,
    Regime,
    classify_curve,
    classify_spherical,
    classify_totally_geodesic,
    euclidean_frenet_residual_e4,
    fit_hyperplane,
    frenet_sphere_residual,
    normal_development,
    recover_center,
    rms,
    section_fit,
)
from geocurve.curves import (
    Curve,
    FourierLoopSpec,
    generate_geodesic,
    generate_geodesic_sphere_curve,
    generate_helix,
    generate_random_curve,
    generate_spherical_spiral,
    generate_totally_geodesic_curve,
    random_point,
)
from geocurve.errors import InsufficientDataError, InvalidArgumentError, VanishingTorsionError
from geocurve.framing import default_normals, euclidean_frenet_general, frenet_frame_3d, rm_transport
from geocurve.verify import random_section_normal

S2 = SpaceSpec.sphere(1)


def small_circle(n=800):
    return generate_geodesic_sphere_curve(S2, [1.0, 0, 0], np.pi / 4, FourierLoopSpec.circle(2), n)


def test_fit_two_points():
    fit = fit_hyperplane(np.array([[1.0, 0.0], [0.0, 1.0]]))
    np.testing.assert_allclose(fit.a, -np.array([1, 1]) / np.sqrt(2), atol=1e-12)
    assert fit.c == pytest.approx(1 / np.sqrt(2))
    assert fit.rms_residual < 1e-15


def test_fit_line_through_origin():
    fit = fit_hyperplane(np.array([[1.0, 1.0], [2.0, 2.0]]))
    assert abs(fit.c) < 1e-12
    assert abs(abs(fit.a @ np.array([1, -1]) / np.sqrt(2)) - 1) < 1e-12
    assert fit.rms_residual < 1e-12


def test_fit_constant_development():
    fit = fit_hyperplane(np.full((50, 1), 2.0))
    np.testing.assert_allclose(fit.a, [-1.0])
    assert fit.c == pytest.approx(2.0)
    assert fit.rms_residual == 0.0
    fit2 = fit_hyperplane(np.tile([0.6, 0.8], (30, 1)))
    np.testing.assert_allclose(fit2.a, [-0.6, -0.8], atol=1e-12)
    assert fit2.c == pytest.approx(1.0)


def test_fit_errors():
    with pytest.raises(InvalidArgumentError):
        fit_hyperplane(np.zeros((5, 0)))
    with pytest.raises(InsufficientDataError):
        fit_hyperplane(np.zeros((2, 3)))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), m=st.integers(1, 4))
def test_fit_invariants(seed, m):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((40, m))
    fit = fit_hyperplane(X)
    assert abs(np.linalg.norm(fit.a) - 1) < 1e-12
    assert fit.c >= 0 and fit.rms_residual >= 0
    # exact hyperplane data is recovered
    a = rng.standard_normal(m)
    a /= np.linalg.norm(a)
    c = rng.uniform(0.1, 2.0)
    Y = X - np.outer(X @ a + c, a)
    fit = fit_hyperplane(Y)
    assert fit.rms_residual < 1e-10
    assert fit.c == pytest.approx(c, rel=1e-9)


def fit_with(c, scale=None):
    return HyperplaneFit(np.array([-1.0]), c, 0.0, c if scale is None else scale)


def test_classify_spherical_examples():
    v = classify_spherical(S2, fit_with(1.0))
    assert v.is_geodesic_sphere and v.regime is Regime.SPHERE
    assert v.z0 == pytest.approx(np.pi / 4)
    v = classify_spherical(SpaceSpec.hyperbolic(1), fit_with(0.5))
    assert not v.is_geodesic_sphere and v.regime is Regime.HYPERBOLIC_NON_SPHERE
    v = classify_spherical(SpaceSpec.hyperbolic(1), fit_with(1.0))
    assert v.regime is Regime.INDETERMINATE
    v = classify_spherical(SpaceSpec.hyperbolic(1, 2.0), fit_with(1.0))
    assert v.z0 == pytest.approx(2.0 * np.arctanh(0.5))
    v = classify_spherical(SpaceSpec.sphere(1), fit_with(0.0, 1.0))
    assert v.regime is Regime.ORIGIN_LINE
    bad = HyperplaneFit(np.array([-1.0]), 1.0, 0.1, 1.0)
    assert classify_spherical(S2, bad).regime is Regime.NONE


def test_classify_euclidean_circle_radius_two():
    n = 600
    s = np.arange(n) * 4 * np.pi / n
    circle = Curve(SpaceSpec.euclidean(1), np.column_stack([2 * np.cos(s / 2), 2 * np.sin(s / 2)]),
                   s, closed=True)
    rep = classify_curve(circle)
    assert rep.spherical.is_geodesic_sphere
    assert rep.spherical.z0 == pytest.approx(2.0, rel=1e-9)
    np.testing.assert_allclose(rep.spherical.center, [0, 0], atol=1e-8)
    assert rep.spherical.center_spread < 1e-8


def test_small_circle_development_and_verdicts():
    curve = small_circle()
    rm = rm_transport(S2, curve)
    dev = normal_development(rm)
    np.testing.assert_allclose(np.abs(dev.values), 1.0, atol=1e-9)
    rep = classify_curve(curve)
    assert rep.spherical.is_geodesic_sphere
    assert rep.spherical.z0 == pytest.approx(np.pi / 4, abs=1e-8)
    np.testing.assert_allclose(rep.spherical.center, [1, 0, 0], atol=1e-8)
    tg = rep.totally_geodesic
    assert not tg.is_totally_geodesic and not tg.development_pass
    assert tg.development_fit.c == pytest.approx(1.0, abs=1e-8)
    assert not rep.conflict


def test_geodesic_development_is_zero():
    geo = generate_geodesic(SpaceSpec.sphere(2), [1.0, 0, 0, 0], [0, 0.6, 0.8, 0], 2 * np.pi, 600)
    dev = normal_development(rm_transport(geo.space, geo))
    assert np.max(np.abs(dev.values)) < 1e-9


def test_equator_section():
    eq = generate_totally_geodesic_curve(S2, [0, 0, 1.0], None, 400)
    sec = section_fit(S2, eq)
    np.testing.assert_allclose(np.abs(sec.normal), [0, 0, 1], atol=1e-12)
    assert sec.rms_residual < 1e-14 and sec.unique
    rep = classify_curve(eq)
    assert rep.totally_geodesic.is_totally_geodesic
    assert not rep.spherical.is_geodesic_sphere


def test_geodesic_in_s3_section_not_unique():
    geo = generate_geodesic(SpaceSpec.sphere(2), [1.0, 0, 0, 0], [0, 1.0, 0, 0], 2 * np.pi, 600)
    rep = classify_curve(geo)
    assert rep.totally_geodesic.is_totally_geodesic
    assert not rep.totally_geodesic.section.unique


def test_hyperbolic_section_normal_recovered():
    space = SpaceSpec.hyperbolic(2)
    rng = np.random.default_rng(3)
    nu = random_section_normal(space, rng)
    curve = generate_totally_geodesic_curve(space, nu, FourierLoopSpec.random(2, 3), 2000)
    rep = classify_curve(curve)
    assert rep.totally_geodesic.is_totally_geodesic
    got = rep.totally_geodesic.section.normal
    angle = np.arccos(min(1.0, abs(got @ nu) / np.linalg.norm(nu)))
    assert angle < 1e-4


def test_euclidean_plane_section_has_offset():
    space = SpaceSpec.euclidean(2)
    curve = generate_totally_geodesic_curve(space, [0, 0, 1.0], FourierLoopSpec.random(2, 1), 1000)
    shifted = Curve(space, curve.samples + [0, 0, 3.0], curve.s, curve.closed)
    sec = section_fit(space, shifted)
    assert sec.offset == pytest.approx(3.0)
    assert classify_curve(shifted).totally_geodesic.is_totally_geodesic


@settings(max_examples=12, deadline=None)
@given(kind=st.sampled_from(["sphere", "hyperbolic"]), m=st.integers(1, 3),
       r=st.sampled_from([0.5, 1.0, 2.0]), frac=st.floats(0.2, 0.8), seed=st.integers(0, 10**6))
def test_geodesic_sphere_forward_and_converse(kind, m, r, frac, seed):
    space = SpaceSpec(kind, m, r)
    p = random_point(space, np.random.default_rng(seed))
    z0 = frac * r * (np.pi / 2 if kind == "sphere" else 1.5)
    curve = generate_geodesic_sphere_curve(space, p, z0, FourierLoopSpec.random(m + 1, seed), 2000)
    rep = classify_curve(curve)
    fit = rep.spherical.fit
    assert fit.rms_residual < 1e-6 * max(fit.scale, fit.c)
    assert rep.spherical.is_geodesic_sphere
    assert abs(rep.spherical.z0 - z0) < 1e-4 * r
    assert rep.spherical.center_spread < 1e-4 * r
    assert geodesic_distance(space, rep.spherical.center, p) < 1e-4 * max(1, r)
    np.testing.assert_allclose(geodesic_distance(space, curve.samples, rep.spherical.center),
                               rep.spherical.z0, atol=1e-4 * r)
    assert not rep.totally_geodesic.is_totally_geodesic


def test_recover_center_flags_unstable_center():
    curve = generate_random_curve(S2, 4, 1000)
    rm = rm_transport(S2, curve)
    fit = fit_hyperplane(normal_development(rm))
    est = recover_center(S2, curve, rm, fit, 0.5)
    assert not est.stable and est.spread > 1e-2


def test_gauge_invariance():
    space = SpaceSpec.sphere(2)
    p = random_point(space, np.random.default_rng(2))
    curve = generate_geodesic_sphere_curve(space, p, 0.7, FourierLoopSpec.random(3, 2), 2000)
    N0 = default_normals(space, curve.samples[0], curve.tangent[0])
    c, s = np.cos(1.1), np.sin(1.1)
    rotated = np.array([c * N0[0] + s * N0[1], -s * N0[0] + c * N0[1]])
    a, b = classify_curve(curve), classify_curve(curve, initial_frame=rotated)
    assert a.spherical.is_geodesic_sphere == b.spherical.is_geodesic_sphere
    assert abs(a.spherical.z0 - b.spherical.z0) < 1e-8
    np.testing.assert_allclose(a.spherical.center, b.spherical.center, atol=1e-8)
    assert abs(a.spherical.fit.c - b.spherical.fit.c) < 1e-8
    np.testing.assert_allclose(a.totally_geodesic.section.normal, b.totally_geodesic.section.normal,
                               atol=1e-8)


def test_helix_residual_is_tau_over_kappa():
    helix = generate_helix(1.0, 2.0, 20.0, 2000)
    e3 = SpaceSpec.euclidean(2)
    res = frenet_sphere_residual(e3, frenet_frame_3d(e3, helix))
    finite = res[np.isfinite(res)]
    np.testing.assert_allclose(finite, 2.0, rtol=1e-5)  # tau/kappa = b/a
    assert np.isnan(res[0]) and np.isnan(res[-1])


@pytest.mark.parametrize("kind,z0", [("sphere", 0.8), ("hyperbolic", 0.8), ("euclidean", 2.0)])
def test_spherical_spiral_residual_small(kind, z0):
    space = SpaceSpec(kind, 2, 1.0)
    p = random_point(space, np.random.default_rng(1))
    spiral = generate_spherical_spiral(space, p, z0, 1, 2000)
    fr = frenet_frame_3d(space, spiral)
    assert np.min(np.abs(fr.tau)) > 0.05
    assert rms(frenet_sphere_residual(space, fr)) < 1e-3


def test_vanishing_torsion_error():
    n = 400
    s = np.arange(n) * 2 * np.pi / n
    e3 = SpaceSpec.euclidean(2)
    circle = Curve(e3, np.column_stack([np.cos(s), np.sin(s), 0 * s]), s, True)
    with pytest.raises(VanishingTorsionError) as info:
        frenet_sphere_residual(e3, frenet_frame_3d(e3, circle))
    assert info.value.index == 0


def test_frenet_residual_needs_three_manifold():
    fr = frenet_frame_3d(SpaceSpec.euclidean(2), generate_helix(1.0, 1.0, 5.0, 200))
    with pytest.raises(InvalidArgumentError):
        frenet_sphere_residual(SpaceSpec.sphere(3), fr)
    with pytest.raises(InvalidArgumentError):
        euclidean_frenet_residual_e4(fr)


def test_e4_residual_constant_curvatures():
    # (a e^{i p s}, b e^{i q s}) has constant curvature and torsions; every derivative
    # term vanishes and so does tau_1 rho differentiated, leaving the constant value 0
    a, b, p, q = 1.0, 0.5, 1.0, 2.0
    speed = np.hypot(a * p, b * q)
    n = 2000
    s = np.arange(n) * 2 * np.pi * speed / n
    u = s / speed
    pts = np.column_stack([a * np.cos(p * u), a * np.sin(p * u), b * np.cos(q * u),
                           b * np.sin(q * u)])
    fr = euclidean_frenet_general(Curve(SpaceSpec.euclidean(3), pts, s, True))
    assert np.ptp(fr.kappa) < 1e-8 and np.max(np.ptp(fr.torsions, axis=0)) < 1e-5
    # tau_2 comes from a fourth derivative, so rounding noise of order eps / h^4 is
    # amplified twice more by the nested derivatives of the residual
    assert rms(euclidean_frenet_residual_e4(fr)) < 1e-3


def test_great_circle_on_s2_passes_both_tests():
    geo = generate_geodesic(S2, [1.0, 0, 0], [0, 0.6, 0.8], 2 * np.pi, 500)
    dev = normal_development(rm_transport(S2, geo))
    tg = classify_totally_geodesic(S2, geo, dev)
    assert tg.development_pass and tg.section_pass and tg.is_totally_geodesic
    assert tg.section.unique
    np.testing.assert_allclose(np.abs(tg.section.normal), [0, 0.8, 0.6], atol=1e-10)
