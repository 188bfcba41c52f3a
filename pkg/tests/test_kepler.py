import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodograph.conics import ConicClass
from hodograph.errors import CollisionApproach, CollisionState, DegenerateOrbit, NonPositiveStep, OutOfBranch
from hodograph.geom2d import Vec2, fit_circle
from hodograph.kepler import (
    KeplerState,
    anomaly_grid,
    elements_from_state,
    hodograph,
    lrl_residual,
    momentum_from_position,
    rk4_arrays,
    rk4_trajectory,
    sample_orbit,
    sample_orbit_arrays,
)

S = math.sqrt(0.5)


def state(r, p, k=1.0):
    return KeplerState(Vec2.of(r), Vec2.of(p), k)


CIRC = state((1, 0), (0, 1))
E2 = state((1, 0), (0, S))
E2R = state((1, 0), (0, -S))
H1 = state((1, 0), (0, 2))
P1 = state((1, 0), (0, math.sqrt(2)))


def near(u: Vec2, v, tol=1e-12):
    return u.distance(Vec2.of(v)) <= tol


def lrl_of(row, k):
    x, y, px, py = row
    r = math.hypot(x, y)
    L = x * py - y * px
    return np.array([L * py - k * x / r, -L * px - k * y / r])


# ---------------------------------------------------------------- elements


def test_elements_circular():
    el = elements_from_state(CIRC)
    assert el.E == pytest.approx(-0.5) and el.L == 1.0
    assert near(el.A, (0, 0)) and el.e == pytest.approx(0.0, abs=1e-15)
    assert el.conic_class is ConicClass.CIRCLE and el.a == pytest.approx(1.0)


def test_elements_e2():
    el = elements_from_state(E2)
    assert el.E == pytest.approx(-0.75, rel=1e-15)
    assert el.L == pytest.approx(S, rel=1e-15)
    assert near(el.A, (-0.5, 0), 1e-15)
    assert el.e == pytest.approx(0.5, rel=1e-15)
    assert el.a == pytest.approx(2 / 3, rel=1e-15)
    assert near(el.I, (2 / 3, 0), 1e-15)
    assert el.b2 == pytest.approx(1 / 3, rel=1e-14)
    assert el.conic_class is ConicClass.ELLIPSE


def test_elements_h1():
    el = elements_from_state(H1)
    assert (el.E, el.L, el.e, el.a) == pytest.approx((1.0, 2.0, 3.0, 0.5), rel=1e-15)
    assert near(el.A, (3, 0)) and near(el.I, (3, 0))
    assert el.b2 == pytest.approx(2.0, rel=1e-14)
    assert el.conic_class is ConicClass.HYPERBOLA_BRANCH


def test_elements_parabola_has_no_second_focus():
    el = elements_from_state(P1)
    assert el.conic_class is ConicClass.PARABOLA
    assert el.I is None and el.geometry is None
    assert abs(el.E) <= el.energy_tolerance
    assert near(el.A, (1, 0), 1e-15)


def test_near_parabolic_energy_classified_before_division():
    el = elements_from_state(state((1, 0), (0, math.sqrt(2) * (1 + 1e-12))))
    assert el.conic_class is ConicClass.PARABOLA and el.I is None


def test_degenerate_is_not_an_error():
    el = elements_from_state(state((1, 0), (0.5, 0)))
    assert el.conic_class is ConicClass.DEGENERATE and el.geometry is None
    with pytest.raises(DegenerateOrbit):
        hodograph(el)
    with pytest.raises(DegenerateOrbit):
        sample_orbit(el, 0.0)
    with pytest.raises(DegenerateOrbit):
        momentum_from_position(el, Vec2(1.0, 0.0))


def test_collision_state():
    with pytest.raises(CollisionState):
        elements_from_state(state((0, 0), (1, 0)))
    with pytest.raises(CollisionState):
        lrl_residual(state((0, 0), (1, 0)))
    with pytest.raises(CollisionState):
        momentum_from_position(elements_from_state(E2), Vec2(0.0, 0.0))


def test_k_must_be_positive():
    with pytest.raises(ValueError):
        state((1, 0), (0, 1), k=0.0)


def test_b2_and_alternative_expression():
    for s in (E2, E2R, H1, state((0.4, 1.3), (-0.8, 0.2), k=3.0)):
        el = elements_from_state(s)
        assert el.b2 == pytest.approx(el.geometry.b ** 2, rel=1e-12)
        assert abs(el.L) / abs(el.E) == pytest.approx(2 * el.b2 / abs(el.L), rel=1e-12)
        assert el.A.norm() == pytest.approx(el.k * el.e, rel=1e-12)
        assert el.I.norm() == pytest.approx(2 * el.a * el.e, rel=1e-9)


def test_second_focus_direction():
    # toward apoastron for bound orbits, toward periastron for open ones
    el = elements_from_state(E2)
    peri = sample_orbit(el, el.periapsis_angle).r
    assert el.I.dot(peri) < 0 < el.A.dot(peri)
    el = elements_from_state(H1)
    peri = sample_orbit(el, el.periapsis_angle).r
    assert el.I.dot(peri) > 0 and el.A.dot(peri) > 0


# ---------------------------------------------------------------- sampling


def test_sample_circular():
    s = sample_orbit(elements_from_state(CIRC), math.pi / 2)
    assert near(s.r, (0, 1)) and near(s.p, (-1, 0))


def test_sample_e2():
    el = elements_from_state(E2)
    assert math.cos(el.periapsis_angle) == pytest.approx(-1.0)
    s = sample_orbit(el, 0.0)
    assert near(s.r, (1, 0), 1e-15) and near(s.p, (0, S), 1e-15)
    assert sample_orbit(el, math.pi).r.norm() == pytest.approx(1 / 3, rel=1e-15)


def test_sample_h1():
    el = elements_from_state(H1)
    s = sample_orbit(el, 0.0)
    assert near(s.r, (1, 0), 1e-15) and near(s.p, (0, 2), 1e-15)


def test_sample_out_of_branch():
    el = elements_from_state(H1)
    with pytest.raises(OutOfBranch):
        sample_orbit(el, math.pi)
    with pytest.raises(OutOfBranch):
        sample_orbit_arrays(el, [0.0, math.pi])


def test_momentum_from_position_examples():
    assert near(momentum_from_position(elements_from_state(E2), Vec2(1.0, 0.0)), (0, S), 1e-15)
    assert near(momentum_from_position(elements_from_state(CIRC), Vec2(0.0, 1.0)), (-1, 0))
    assert near(momentum_from_position(elements_from_state(H1), Vec2(1.0, 0.0)), (0, 2), 1e-15)


def test_arrays_agree_with_scalar_sampler():
    el = elements_from_state(state((0.7, -0.2), (0.3, 1.1), k=1.7))
    phis = anomaly_grid(el, 17)
    r, p = sample_orbit_arrays(el, phis)
    for phi, ri, pi in zip(phis, r, p):
        s = sample_orbit(el, float(phi))
        assert np.allclose(s.as_row(), [*ri, *pi], rtol=1e-14, atol=1e-14)


def test_anomaly_grid_shapes():
    el = elements_from_state(E2)
    g = anomaly_grid(el, 8)
    assert len(g) == 8 and math.cos(g[0]) == pytest.approx(-1.0)
    assert np.allclose(np.diff(g), 2 * math.pi / 8)
    el = elements_from_state(H1)
    g = anomaly_grid(el, 9)
    half = math.acos(-1 / 3)
    assert g[0] == pytest.approx(-half + 1e-3) and g[-1] == pytest.approx(half - 1e-3)


orbit_states = st.builds(
    lambda rad, th, px, py, k: state((rad * math.cos(th), rad * math.sin(th)), (px, py), k),
    st.floats(0.2, 5.0),
    st.floats(-math.pi, math.pi),
    st.floats(-2.0, 2.0),
    st.floats(-2.0, 2.0),
    st.floats(0.3, 4.0),
)


def _usable(el):
    return el.conic_class in (ConicClass.ELLIPSE, ConicClass.HYPERBOLA_BRANCH) and abs(el.L) > 1e-2 and abs(el.e - 1) > 1e-3


@settings(max_examples=150, deadline=None)
@given(orbit_states, st.floats(0.0, 1.0))
def test_round_trip_elements(s, u):
    el = elements_from_state(s)
    if not _usable(el):
        return
    phis = anomaly_grid(el, 64)
    phi = float(phis[int(u * 63)])
    back = elements_from_state(sample_orbit(el, phi))
    scale = max(abs(el.E), el.k / s.r.norm())
    assert back.E == pytest.approx(el.E, rel=1e-9, abs=1e-9 * scale)
    assert back.L == pytest.approx(el.L, rel=1e-9)
    assert back.A.distance(el.A) <= 1e-9 * el.k * max(1.0, el.e)


@settings(max_examples=100, deadline=None)
@given(orbit_states)
def test_sampled_momenta_on_hodograph(s):
    el = elements_from_state(s)
    if not _usable(el):
        return
    h = hodograph(el)
    _, p = sample_orbit_arrays(el, anomaly_grid(el, 90))
    d = np.hypot(p[:, 0] - h.circle.center.x, p[:, 1] - h.circle.center.y)
    assert np.max(np.abs(d - h.circle.radius)) <= 1e-9 * h.circle.radius
    if el.E > 0:
        assert np.min(np.sum(p * p, axis=1) - 2 * el.E) > 0


# ---------------------------------------------------------------- hodograph


def test_hodograph_examples():
    h = hodograph(elements_from_state(CIRC))
    assert near(h.circle.center, (0, 0)) and h.circle.radius == pytest.approx(1.0)
    assert h.arc_restriction is None
    el = elements_from_state(E2)
    h = hodograph(el)
    assert near(h.circle.center, (0, -S), 1e-15) and h.circle.radius == pytest.approx(math.sqrt(2))
    assert h.circle.center.norm() == pytest.approx(el.e * h.circle.radius, rel=1e-15)
    h = hodograph(elements_from_state(P1))
    assert near(h.circle.center, (0, S), 1e-15) and h.circle.radius == pytest.approx(S)
    assert abs(h.circle.center.norm() - h.circle.radius) <= 1e-9 * h.circle.radius


def test_hodograph_sign_follows_L():
    h = hodograph(elements_from_state(E2R))
    assert near(h.circle.center, (0, S), 1e-15)
    assert h.circle.radius == pytest.approx(math.sqrt(2))


def test_hodograph_arc_restriction():
    el = elements_from_state(H1)
    h = hodograph(el)
    assert h.arc_restriction == pytest.approx(2.0)
    assert h.on_arc(Vec2(0.0, 2.0))
    assert not h.on_arc(Vec2(0.0, 1.0))


# ---------------------------------------------------------------- LRL


def test_lrl_residual_examples():
    assert lrl_residual(E2).norm() < 1e-14
    assert lrl_residual(H1).norm() < 1e-14


def test_lrl_residual_matches_finite_difference_oracle():
    rng = np.random.default_rng(7)
    for _ in range(20):
        rad = rng.uniform(0.5, 3.0)
        th = rng.uniform(-math.pi, math.pi)
        s = state((rad * math.cos(th), rad * math.sin(th)), tuple(rng.uniform(-1.5, 1.5, 2)), k=2.0)
        h = 1e-3
        fwd = rk4_arrays(s, h, 1)[-1]
        back = rk4_arrays(KeplerState(s.r, -s.p, s.k), h, 1)[-1]
        back = np.array([back[0], back[1], -back[2], -back[3]])
        fd = (lrl_of(fwd, 2.0) - lrl_of(back, 2.0)) / (2 * h)
        res = lrl_residual(s)
        assert res.norm() < 1e-12
        assert np.hypot(*fd) < 1e-8
        assert abs(res.x - fd[0]) < 1e-8 and abs(res.y - fd[1]) < 1e-8


# ---------------------------------------------------------------- RK4


def test_rk4_circular_closure():
    n = 10_000
    traj = rk4_arrays(CIRC, 2 * math.pi / n, n)
    assert traj.shape == (n + 1, 4)
    assert np.hypot(traj[-1, 0] - 1.0, traj[-1, 1]) < 1e-8
    E = 0.5 * (traj[:, 2] ** 2 + traj[:, 3] ** 2) - 1 / np.hypot(traj[:, 0], traj[:, 1])
    assert np.max(np.abs(E + 0.5)) < 1e-10


def test_rk4_e2_lrl_drift_over_period():
    el = elements_from_state(E2)
    n = 4000
    traj = rk4_arrays(E2, el.period() / n, n)
    drift = max(np.hypot(*(lrl_of(row, 1.0) - el.A.to_array())) for row in traj)
    assert drift < 1e-8
    assert np.hypot(traj[-1, 0] - 1.0, traj[-1, 1]) < 1e-6


def test_rk4_tiny_step_leaves_state_unchanged():
    dt = 1e-9
    traj = rk4_trajectory(E2, dt, 1)
    assert len(traj) == 2
    assert traj[1].r.distance(E2.r) < 10 * dt and traj[1].p.distance(E2.p) < 10 * dt


def test_rk4_errors():
    with pytest.raises(NonPositiveStep):
        rk4_arrays(E2, 0.0, 10)
    with pytest.raises(NonPositiveStep):
        rk4_arrays(E2, -1.0, 10)
    with pytest.raises(NonPositiveStep):
        rk4_arrays(E2, 0.1, 0)
    # radial infall that lands inside r_min at a sampled stage
    with pytest.raises(CollisionApproach):
        rk4_arrays(state((2e-6, 0), (0, 0)), 1e-9, 1000)
    with pytest.raises(CollisionApproach):
        rk4_arrays(state((5e-7, 0), (0, 1)), 1e-3, 10)


def test_rk4_momenta_on_analytic_hodograph():
    for s in (E2, E2R):
        el = elements_from_state(s)
        h = hodograph(el)
        traj = rk4_arrays(s, el.period() / 4000, 4000)
        c, rms = fit_circle(traj[:, 2:4])
        assert c.center.distance(h.circle.center) <= 1e-6 * h.circle.radius
        assert c.radius == pytest.approx(h.circle.radius, rel=1e-6)
