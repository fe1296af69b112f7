import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geocurve.ambient import (
    Kind,
    SpaceSpec,
    check_point,
    covariant_derivative,
    exp,
    exp_vec,
    geodesic_distance,
    inner,
    log,
    norm,
    project_to_model,
    project_to_tangent,
)
from geocurve.curves import Curve, generate_geodesic, random_point, tangent_basis
from geocurve.errors import (
    AntipodalError,
    DistanceZeroError,
    InsufficientDataError,
    InvalidArgumentError,
)

S2 = SpaceSpec.sphere(1)
H2 = SpaceSpec.hyperbolic(1)


def test_space_spec_dimensions_and_validation():
    assert SpaceSpec.euclidean(2).dim == 3
    assert SpaceSpec.sphere(2, 3.0).dim == 4
    assert SpaceSpec.hyperbolic(3).dim == 5
    with pytest.raises(InvalidArgumentError):
        SpaceSpec.sphere(0)
    with pytest.raises(InvalidArgumentError):
        SpaceSpec.hyperbolic(1, -1.0)
    with pytest.raises(ValueError):
        SpaceSpec("torus", 1)
    s = SpaceSpec.hyperbolic(2, 0.5)
    assert SpaceSpec.from_dict(s.to_dict()) == s


def test_inner_lorentz_and_euclidean():
    assert inner(H2, [1, 0, 0], [1, 0, 0]) == -1
    assert inner(H2, [0, 1, 0], [0, 1, 0]) == 1
    assert inner(SpaceSpec.euclidean(1), [1, 2], [3, 4]) == 11
    with pytest.raises(InvalidArgumentError):
        inner(H2, [1, 0], [1, 0])


def test_check_point_rejects_off_model_and_lower_sheet():
    check_point(H2, [1, 0, 0])
    with pytest.raises(InvalidArgumentError):
        check_point(H2, [-1, 0, 0])
    with pytest.raises(InvalidArgumentError):
        check_point(S2, [1, 1, 0])
    with pytest.raises(InvalidArgumentError):
        check_point(S2, [np.nan, 0, 1])


def test_project_to_tangent_examples():
    p = np.array([1.0, 0, 0])
    np.testing.assert_allclose(project_to_tangent(S2, p, [1, 1, 0]), [0, 1, 0])
    np.testing.assert_allclose(project_to_tangent(S2, p, [0, 1, 2]), [0, 1, 2])
    np.testing.assert_allclose(project_to_tangent(S2, p, p), [0, 0, 0])
    q = np.array([np.cosh(1), np.sinh(1), 0])
    w = project_to_tangent(H2, q, [1.0, 2.0, 3.0])
    assert abs(inner(H2, w, q)) < 1e-14
    np.testing.assert_allclose(project_to_tangent(H2, q, w), w)


def test_exp_examples():
    np.testing.assert_allclose(exp(S2, [1, 0, 0], [0, 1, 0], np.pi / 2), [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(exp(H2, [1, 0, 0], [0, 1, 0], 1.0),
                               [np.cosh(1), np.sinh(1), 0], atol=1e-15)
    np.testing.assert_allclose(exp(S2, [1, 0, 0], [0, 0, 1], 0.0), [1, 0, 0])
    e = SpaceSpec.euclidean(1)
    np.testing.assert_allclose(exp(e, [1, 1], [0.6, 0.8], 5.0), [4, 5])


def test_exp_requires_unit_tangent():
    with pytest.raises(InvalidArgumentError):
        exp(S2, [1, 0, 0], [0, 2, 0], 1.0)
    with pytest.raises(InvalidArgumentError):
        exp(S2, [1, 0, 0], [1, 0, 0], 1.0)


def test_log_examples_and_errors():
    u, v = log(S2, [1, 0, 0], [0, 0, 1])
    assert u == pytest.approx(np.pi / 2)
    np.testing.assert_allclose(v, [0, 0, 1], atol=1e-15)
    u, v = log(H2, [1, 0, 0], [np.cosh(2), np.sinh(2), 0])
    assert u == pytest.approx(2.0)
    np.testing.assert_allclose(v, [0, 1, 0], atol=1e-12)
    with pytest.raises(DistanceZeroError):
        log(S2, [1, 0, 0], [1, 0, 0])
    with pytest.raises(AntipodalError):
        log(S2, [1, 0, 0], [-1, 0, 0])
    with pytest.raises(DistanceZeroError):
        log(H2, [1, 0, 0], [1, 0, 0])


def test_distance_examples():
    assert geodesic_distance(S2, [1, 0, 0], [0, 1, 0]) == pytest.approx(np.pi / 2)
    assert geodesic_distance(S2, [1, 0, 0], [1, 0, 0]) == 0.0
    assert geodesic_distance(H2, [1, 0, 0], [np.cosh(2), np.sinh(2), 0]) == pytest.approx(2.0)
    assert geodesic_distance(S2, [1, 0, 0], [-1, 0, 0]) == pytest.approx(np.pi)


spaces = st.sampled_from([
    SpaceSpec.sphere(1, 1.0), SpaceSpec.sphere(2, 2.0), SpaceSpec.sphere(3, 0.5),
    SpaceSpec.hyperbolic(1, 1.0), SpaceSpec.hyperbolic(2, 0.5), SpaceSpec.hyperbolic(3, 2.0),
    SpaceSpec.euclidean(2),
])


@settings(max_examples=60, deadline=None)
@given(space=spaces, seed=st.integers(0, 2**32 - 1))
def test_exp_log_round_trip_property(space, seed):
    rng = np.random.default_rng(seed)
    p, q = random_point(space, rng), random_point(space, rng)
    u, v = log(space, p, q)
    assert u > 0
    assert abs(norm(space, v) - 1) < 1e-12
    if space.embedded:
        assert abs(inner(space, v, p)) < 1e-10 * max(1, space.r)
    np.testing.assert_allclose(exp(space, p, v, u), q, atol=1e-10 * max(1, space.r))
    assert geodesic_distance(space, p, q) == pytest.approx(u, rel=1e-10, abs=1e-12)
    assert geodesic_distance(space, q, p) == pytest.approx(geodesic_distance(space, p, q),
                                                           rel=1e-12, abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(space=spaces, seed=st.integers(0, 2**32 - 1), u=st.floats(0.0, 3.0))
def test_exp_stays_on_model(space, seed, u):
    rng = np.random.default_rng(seed)
    p = random_point(space, rng)
    E = tangent_basis(space, p) if space.embedded else np.eye(space.dim)
    v = rng.standard_normal(E.shape[0]) @ E
    v = v / norm(space, v)
    q = exp(space, p, v, u * space.r)
    if space.embedded:
        assert abs(inner(space, q, q) - space.quadric) < 1e-10 * space.r**2
    np.testing.assert_allclose(exp_vec(space, p, u * space.r * v), q, atol=1e-12 * max(1, space.r))


def test_project_to_model_on_hyperboloid():
    q = project_to_model(H2, [2.0, 0.5, 0.1])
    assert inner(H2, q, q) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        project_to_model(H2, [0.1, 2.0, 0.0])


def test_covariant_derivative_great_circle_vanishes():
    n = 400
    s = np.arange(n) * 2 * np.pi / n
    curve = Curve(S2, np.column_stack([np.cos(s), np.sin(s), np.zeros(n)]), s, closed=True)
    nab = covariant_derivative(S2, curve, curve.tangent)
    assert np.max(np.abs(nab)) < 1e-8


def test_covariant_derivative_hyperbolic_geodesic():
    space = SpaceSpec.hyperbolic(2)
    p = np.array([1.0, 0, 0, 0])
    geo = generate_geodesic(space, p, [0, 0.6, 0.8, 0], 3.0, 1000)
    nab = covariant_derivative(space, geo, geo.tangent)
    assert np.max(norm(space, nab)) < 1e-6


def test_covariant_derivative_small_circle_curvature():
    # circle at colatitude pi/4: geodesic curvature cot(pi/4) = 1
    n = 800
    a = np.sin(np.pi / 4)
    s = np.arange(n) * 2 * np.pi * a / n
    pts = np.column_stack([np.full(n, np.cos(np.pi / 4)), a * np.cos(s / a), a * np.sin(s / a)])
    curve = Curve(S2, pts, s, closed=True)
    nab = covariant_derivative(S2, curve, curve.tangent)
    np.testing.assert_allclose(norm(S2, nab), 1.0, atol=1e-9)


def test_covariant_derivative_euclidean_is_plain_derivative():
    e = SpaceSpec.euclidean(1)
    n = 200
    s = np.arange(n) * 2 * np.pi / n
    curve = Curve(e, np.column_stack([np.cos(s), np.sin(s)]), s, closed=True)
    nab = covariant_derivative(e, curve, curve.tangent)
    np.testing.assert_allclose(nab, -curve.samples, atol=1e-7)


def test_covariant_derivative_shape_checks():
    n = 50
    s = np.linspace(0, 1, n)
    curve = Curve(SpaceSpec.euclidean(1), np.column_stack([s, 0 * s]), s, closed=False)
    with pytest.raises(InvalidArgumentError):
        covariant_derivative(curve.space, curve, np.zeros((n, 3)))


def test_curve_needs_five_samples():
    s = np.linspace(0, 1, 4)
    with pytest.raises((InsufficientDataError, InvalidArgumentError)):
        Curve(SpaceSpec.euclidean(1), np.column_stack([s, 0 * s]), s, closed=False)


def test_kind_is_string_enum():
    assert Kind("sphere") is Kind.SPHERE
    assert Kind.HYPERBOLIC.value == "hyperbolic"
