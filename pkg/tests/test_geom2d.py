import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodograph.errors import CoincidentPoints, CollinearPoints, DegenerateLine, InsufficientPoints, ParallelLines
from hodograph.geom2d import (
    Circle,
    Line,
    Vec2,
    fit_circle,
    line_circle_intersections,
    line_circle_parameters,
    line_intersection,
    perpendicular_bisector,
    power_of_point,
    reflect_point_in_line,
    star,
)

coord = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
vec = st.builds(Vec2, coord, coord)


def close(u: Vec2, v: Vec2, tol=1e-12) -> bool:
    return u.distance(v) <= tol


# ---------------------------------------------------------------- star


@pytest.mark.parametrize(
    "w, expected",
    [((1, 0), (0, 1)), ((0, 0), (0, 0)), ((3, 4), (-4, 3))],
)
def test_star_examples(w, expected):
    assert star(Vec2.of(w)) == Vec2.of(expected)


def test_star_twice_is_minus():
    assert star(star(Vec2(3.0, 4.0))) == Vec2(-3.0, -4.0)


@given(vec)
def test_star_properties(w):
    s = star(w)
    assert star(s) == -w
    assert s.norm() == pytest.approx(w.norm(), rel=1e-15, abs=0)
    assert s.dot(w) == 0.0
    assert w.cross(s) >= 0.0


# ---------------------------------------------------------------- reflection


VERTICAL = Line(Vec2(1.0, 0.0), Vec2(0.0, 1.0))


def test_reflect_examples():
    assert close(reflect_point_in_line(Vec2(-1.0, 0.0), VERTICAL), Vec2(3.0, 0.0))
    assert close(reflect_point_in_line(Vec2(4 / 3, 0.0), VERTICAL), Vec2(2 / 3, 0.0), 1e-15)
    q = Vec2(1.0, 7.5)
    assert close(reflect_point_in_line(q, VERTICAL), q)


def test_reflect_matches_projection_oracle():
    l = Line(Vec2(0.3, -1.2), Vec2(2.0, 0.7))
    q = Vec2(-4.0, 2.5)
    u = l.direction / l.direction.norm()
    foot = l.point + u * (q - l.point).dot(u)
    assert close(reflect_point_in_line(q, l), foot * 2.0 - q, 1e-12)


def test_degenerate_line_rejected():
    with pytest.raises(DegenerateLine):
        Line(Vec2(0.0, 0.0), Vec2(0.0, 0.0))


@given(vec, vec, vec)
def test_reflection_involution_and_isometry(q, a, d):
    if d.norm() < 1e-3:
        return
    l = Line(a, d)
    once = reflect_point_in_line(q, l)
    assert close(reflect_point_in_line(once, l), q, 1e-12 * max(1.0, 1e3))
    # distance to a point on the line is preserved
    on = l.point + l.direction * 0.37
    assert once.distance(on) == pytest.approx(q.distance(on), rel=1e-9, abs=1e-9)


# ---------------------------------------------------------------- power of a point and secants


def test_power_examples():
    c = Circle(Vec2(0.5, -2.0), 2.0)
    assert power_of_point(c.center, c) == pytest.approx(-4.0)
    assert power_of_point(c.point_at(1.1), c) == pytest.approx(0.0, abs=1e-14)
    unit = Circle(Vec2(0.0, 0.0), 1.0)
    assert power_of_point(Vec2(3.0, 0.0), unit) == 8.0
    t = line_circle_parameters(Line(Vec2(3.0, 0.0), Vec2(-1.0, 0.0)), unit)
    assert t == pytest.approx([2.0, 4.0])


def test_power_sign_inside():
    c = Circle(Vec2(0.0, 0.0), 1.0)
    assert power_of_point(Vec2(0.2, 0.1), c) < 0 < power_of_point(Vec2(2.0, 0.0), c)


def test_line_circle_examples():
    unit = Circle(Vec2(0.0, 0.0), 1.0)
    pts = line_circle_intersections(Line(Vec2(0.0, 0.0), Vec2(1.0, 0.0)), unit)
    assert [tuple(p.to_array()) for p in pts] == [pytest.approx((-1.0, 0.0)), pytest.approx((1.0, 0.0))]
    assert line_circle_intersections(Line(Vec2(2.0, 0.0), Vec2(0.0, 1.0)), unit) == []
    pts = line_circle_intersections(Line(Vec2(0.0, 0.0), Vec2(1.0, 0.0)), Circle(Vec2(3.0, 0.0), 1.0))
    assert close(pts[0], Vec2(2.0, 0.0)) and close(pts[1], Vec2(4.0, 0.0))


def test_line_circle_sorted_along_direction():
    unit = Circle(Vec2(0.0, 0.0), 1.0)
    pts = line_circle_intersections(Line(Vec2(0.0, 0.0), Vec2(-1.0, 0.0)), unit)
    assert close(pts[0], Vec2(1.0, 0.0)) and close(pts[1], Vec2(-1.0, 0.0))


def test_tangent_line_gives_one_point():
    unit = Circle(Vec2(0.0, 0.0), 1.0)
    pts = line_circle_intersections(Line(Vec2(1.0, -5.0), Vec2(0.0, 1.0)), unit)
    assert len(pts) == 1 and close(pts[0], Vec2(1.0, 0.0), 1e-9)


@settings(max_examples=200)
@given(
    st.builds(Vec2, st.floats(-50, 50), st.floats(-50, 50)),
    st.floats(0.1, 20.0),
    st.builds(Vec2, st.floats(-50, 50), st.floats(-50, 50)),
    st.floats(0.0, 2 * math.pi),
    st.floats(0.1, 10.0),
)
def test_secant_product_equals_power(center, radius, q, angle, scale):
    c = Circle(center, radius)
    l = Line(q, Vec2.from_polar(scale, angle))
    t = line_circle_parameters(l, c)
    if len(t) != 2:
        return
    pw = power_of_point(q, c)
    assert t[0] * t[1] == pytest.approx(pw, rel=1e-9, abs=1e-9 * radius * radius)


# ---------------------------------------------------------------- bisectors and intersections


def test_bisector_examples():
    b = perpendicular_bisector(Vec2(0.0, 0.0), Vec2(2.0, 0.0))
    assert close(b.point, Vec2(1.0, 0.0)) and abs(b.direction.unit().cross(Vec2(0.0, 1.0))) < 1e-15
    b = perpendicular_bisector(Vec2(0.0, 0.0), Vec2(0.0, 2.0))
    assert close(b.point, Vec2(0.0, 1.0)) and abs(b.direction.unit().cross(Vec2(-1.0, 0.0))) < 1e-15
    a, c = Vec2(0.0, 0.0), Vec2(2.0, 2.0)
    b = perpendicular_bisector(a, c)
    assert close(b.point, Vec2(1.0, 1.0))
    assert abs(b.direction.unit().cross(Vec2(-1.0, 1.0).unit())) < 1e-15
    for t in np.linspace(-5, 5, 11):
        x = b.at(float(t))
        assert abs(x.distance(a) - x.distance(c)) < 1e-12


def test_bisector_coincident():
    with pytest.raises(CoincidentPoints):
        perpendicular_bisector(Vec2(1.0, 1.0), Vec2(1.0, 1.0))


def test_line_intersection():
    x = line_intersection(Line(Vec2(0.0, 0.0), Vec2(1.0, 1.0)), Line(Vec2(2.0, 0.0), Vec2(0.0, 1.0)))
    assert close(x, Vec2(2.0, 2.0))
    with pytest.raises(ParallelLines):
        line_intersection(Line(Vec2(0.0, 0.0), Vec2(1.0, 0.0)), Line(Vec2(0.0, 1.0), Vec2(-3.0, 0.0)))


# ---------------------------------------------------------------- circle fit


def test_fit_three_points():
    pts = [Vec2.from_polar(1.0, a) for a in (0.0, 2 * math.pi / 3, 4 * math.pi / 3)]
    c, rms = fit_circle(pts)
    assert close(c.center, Vec2(0.0, 0.0), 1e-14)
    assert c.radius == pytest.approx(1.0, rel=1e-14)
    assert rms < 1e-14


def test_fit_round_trip_hodograph_like():
    center, radius = Vec2(0.0, -1 / math.sqrt(2)), math.sqrt(2)
    pts = [center + Vec2.from_polar(radius, a) for a in np.linspace(0, 2 * math.pi, 100, endpoint=False)]
    c, rms = fit_circle(pts)
    assert close(c.center, center, 1e-10)
    assert abs(c.radius - radius) < 1e-10
    assert rms < 1e-10


def test_fit_accepts_array():
    a = np.linspace(0, 1.0, 12)
    pts = np.column_stack([5 + 2 * np.cos(a), -3 + 2 * np.sin(a)])
    c, _ = fit_circle(pts)
    assert close(c.center, Vec2(5.0, -3.0), 1e-9)


def test_fit_errors():
    with pytest.raises(InsufficientPoints):
        fit_circle([Vec2(0.0, 0.0), Vec2(1.0, 0.0)])
    with pytest.raises(CollinearPoints):
        fit_circle([Vec2(float(t), 2.0 * t + 1.0) for t in range(10)])


@settings(max_examples=100)
@given(
    st.builds(Vec2, st.floats(-100, 100), st.floats(-100, 100)),
    st.floats(1e-2, 1e3),
    st.integers(10, 60),
    st.floats(0.0, 2 * math.pi),
)
def test_fit_recovers_well_spread_samples(center, radius, n, start):
    angles = start + np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    pts = [center + Vec2.from_polar(radius, float(a)) for a in angles]
    c, rms = fit_circle(pts)
    scale = max(radius, center.norm())
    assert c.center.distance(center) <= 1e-9 * scale
    assert c.radius == pytest.approx(radius, rel=1e-9, abs=1e-9 * scale)
    assert rms <= 1e-9 * scale


def test_circle_rejects_negative_radius():
    with pytest.raises(ValueError):
        Circle(Vec2(0.0, 0.0), -1.0)


def test_operations_reject_degenerate_line():
    l = Line(Vec2(0.0, 0.0), Vec2(1.0, 0.0))
    object.__setattr__(l, "direction", Vec2(0.0, 0.0))
    with pytest.raises(DegenerateLine):
        reflect_point_in_line(Vec2(1.0, 1.0), l)
    with pytest.raises(DegenerateLine):
        line_circle_intersections(l, Circle(Vec2(0.0, 0.0), 1.0))
