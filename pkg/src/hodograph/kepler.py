"""Kepler dynamics in the plane with unit mass and attractive coupling ``k``.

Conventions: ``L = cross(r, p)`` is signed; the Laplace-Runge-Lenz vector is
``A = p x L - k r/|r| = -L star(p) - k r/|r|``; the second-focus vector is
``I = A / E``.  Orbits are parameterized by the polar angle ``phi`` of the
position, never by time, except in :func:`rk4_trajectory`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .conics import ConicClass, ConicGeometry, classify
from .errors import (
    CollisionApproach,
    CollisionState,
    DegenerateOrbit,
    NonPositiveStep,
    OutOfBranch,
)
from .geom2d import TAU_ZERO, Circle, Vec2, star

R_MIN = 1e-6
ENERGY_TOL_SCALE = 1e-9


@dataclass(frozen=True)
class KeplerState:
    r: Vec2
    p: Vec2
    k: float = 1.0

    def __post_init__(self):
        if not self.k > 0.0:
            raise ValueError(f"coupling k must be positive (attractive), got {self.k}")

    def as_row(self) -> tuple[float, float, float, float]:
        return (self.r.x, self.r.y, self.p.x, self.p.y)

    @classmethod
    def from_row(cls, row, k: float) -> KeplerState:
        x, y, px, py = (float(v) for v in row)
        return cls(Vec2(x, y), Vec2(px, py), k)


@dataclass(frozen=True)
class OrbitElements:
    k: float
    E: float
    L: float
    A: Vec2
    I: Optional[Vec2]
    e: float
    conic_class: ConicClass
    geometry: Optional[ConicGeometry]

    @property
    def energy_tolerance(self) -> float:
        return energy_tolerance(self.k, self.L)

    @property
    def is_parabolic(self) -> bool:
        return self.conic_class is ConicClass.PARABOLA

    @property
    def a(self) -> float:
        if self.geometry is None:
            return math.inf
        return self.geometry.a

    @property
    def b2(self) -> float:
        """Squared minor semi-axis ``L^2 / (2|E|)``."""
        return self.L * self.L / (2.0 * abs(self.E))

    @property
    def periapsis_angle(self) -> float:
        """Polar angle of the periastron; 0 for circular orbits."""
        if self.conic_class is ConicClass.CIRCLE:
            return 0.0
        return self.A.angle()

    @property
    def semi_latus_rectum(self) -> float:
        return self.L * self.L / self.k

    @property
    def asymptote_half_angle(self) -> float:
        """Half-width of the admissible anomaly range about the periastron.

        ``pi`` for bound orbits (no restriction), ``arccos(-1/e)`` for the
        hyperbolic branch and ``pi`` (exclusive) for the parabola.
        """
        if self.e > 1.0:
            return math.acos(-1.0 / self.e)
        return math.pi

    def period(self) -> float:
        if not self.conic_class.is_bound:
            raise DegenerateOrbit(f"{self.conic_class.value} orbit is not periodic")
        return 2.0 * math.pi * self.a ** 1.5 / math.sqrt(self.k)


def energy_tolerance(k: float, L: float) -> float:
    """Energy below which an orbit is treated as parabolic (``1e-9 k^2/L^2``)."""
    if abs(L) <= TAU_ZERO:
        return ENERGY_TOL_SCALE * k * k / TAU_ZERO ** 2
    return ENERGY_TOL_SCALE * k * k / (L * L)


def elements_from_state(s: KeplerState) -> OrbitElements:
    rn = s.r.norm()
    if rn <= TAU_ZERO:
        raise CollisionState(f"state at the force centre: |r| = {rn}")
    k = s.k
    E = 0.5 * s.p.norm2() - k / rn
    L = s.r.cross(s.p)
    A = -L * star(s.p) - s.r * (k / rn)
    e = A.norm() / k
    cls = classify(e, L)
    if cls is not ConicClass.DEGENERATE and abs(E) <= energy_tolerance(k, L):
        # classification precedes any 1/E evaluation
        cls = ConicClass.PARABOLA

    I = None
    geometry = None
    if cls.is_central:
        I = A / E
        a = k / (2.0 * abs(E))
        b = abs(L) / math.sqrt(2.0 * abs(E))
        axis = A.unit() if cls is not ConicClass.CIRCLE else Vec2(1.0, 0.0)
        geometry = ConicGeometry(Vec2(0.0, 0.0), I, a, b, e, a * e, axis, cls)
    return OrbitElements(k, E, L, A, I, e, cls, geometry)


def _require_orbit(el: OrbitElements) -> None:
    if el.conic_class is ConicClass.DEGENERATE:
        raise DegenerateOrbit("L = 0: radial (degenerate) motion")


def momentum_from_position(el: OrbitElements, r: Vec2) -> Vec2:
    """The momentum at ``r`` on the orbit: ``star(A)/L + (k/L) star(r/|r|)``."""
    _require_orbit(el)
    rn = r.norm()
    if rn <= TAU_ZERO:
        raise CollisionState(f"position at the force centre: |r| = {rn}")
    return (star(el.A) + star(r) * (el.k / rn)) / el.L


def _denominator(el: OrbitElements, phi):
    return 1.0 + el.e * np.cos(phi - el.periapsis_angle)


def sample_orbit(el: OrbitElements, phi: float) -> KeplerState:
    """State on the orbit at polar angle ``phi`` (focal conic equation)."""
    _require_orbit(el)
    denom = float(_denominator(el, phi))
    if denom <= TAU_ZERO:
        raise OutOfBranch(f"phi = {phi} lies outside the branch (1 + e cos = {denom})")
    r = Vec2.from_polar(el.semi_latus_rectum / denom, phi)
    return KeplerState(r, momentum_from_position(el, r), el.k)


def sample_orbit_arrays(el: OrbitElements, phis) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`sample_orbit`; returns ``(r, p)`` arrays of shape ``(n, 2)``."""
    _require_orbit(el)
    phis = np.asarray(phis, dtype=float)
    denom = _denominator(el, phis)
    if np.any(denom <= TAU_ZERO):
        raise OutOfBranch("anomaly grid leaves the branch")
    rad = el.semi_latus_rectum / denom
    c, s = np.cos(phis), np.sin(phis)
    r = np.column_stack([rad * c, rad * s])
    # p = (star(A) + k star(r_hat)) / L
    p = np.column_stack([-el.A.y - el.k * s, el.A.x + el.k * c]) / el.L
    return r, p


def anomaly_grid(el: OrbitElements, n: int, inset: float = 1e-3) -> np.ndarray:
    """``n`` uniformly spaced admissible polar angles.

    Bound orbits get the full turn starting at the periastron (endpoint
    excluded).  Open orbits get the open interval between the asymptote
    directions, pulled in by ``inset`` radians at each end.
    """
    _require_orbit(el)
    if n < 1:
        raise ValueError("grid needs at least one point")
    phi_a = el.periapsis_angle
    if el.conic_class.is_bound:
        return phi_a + np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    half = el.asymptote_half_angle - inset
    if half <= 0.0:
        raise OutOfBranch("inset wider than the branch")
    return phi_a + np.linspace(-half, half, n)


@dataclass(frozen=True)
class Hodograph:
    circle: Circle
    arc_restriction: Optional[float] = None

    def on_arc(self, p: Vec2) -> bool:
        return self.arc_restriction is None or p.norm2() > self.arc_restriction


def hodograph(el: OrbitElements) -> Hodograph:
    """Momentum-space circle centred at ``star(A)/L`` with radius ``k/|L|``.

    For ``E > 0`` only the arc with ``|p|^2 > 2E`` is traversed.
    """
    _require_orbit(el)
    center = star(el.A) / el.L
    arc = 2.0 * el.E if el.E > el.energy_tolerance else None
    return Hodograph(Circle(center, el.k / abs(el.L)), arc)


def lrl_residual(s: KeplerState) -> Vec2:
    """Closed-form ``dA/dt`` at ``s``; identically zero for the Kepler force."""
    if s.r.norm() <= TAU_ZERO:
        raise CollisionState("state at the force centre")
    (dx, dy), = _kernels.lrl_rate(np.array([s.as_row()]), s.k)
    return Vec2(float(dx), float(dy))


def rk4_arrays(s0: KeplerState, dt: float, n_steps: int, r_min: float = R_MIN) -> np.ndarray:
    """RK4 trajectory as an ``(n_steps + 1, 4)`` array of ``(x, y, px, py)``."""
    if not dt > 0.0:
        raise NonPositiveStep(f"time step must be positive, got {dt}")
    if n_steps < 1:
        raise NonPositiveStep(f"need at least one step, got {n_steps}")
    states, status, last = _kernels.rk4_integrate(np.array([s0.as_row()]), s0.k, dt, n_steps, r_min)
    if status == _kernels.COLLISION:
        raise CollisionApproach(f"|r| dropped below {r_min} at step {last}")
    return states[:, 0, :]


def rk4_trajectory(s0: KeplerState, dt: float, n_steps: int, r_min: float = R_MIN) -> list[KeplerState]:
    rows = rk4_arrays(s0, dt, n_steps, r_min)
    return [KeplerState.from_row(row, s0.k) for row in rows]


def time_scale(el: OrbitElements) -> float:
    """A natural time unit: the period, or ``2 pi q^1.5/sqrt(k)`` with ``q`` the semi-latus rectum."""
    if el.conic_class.is_bound:
        return el.period()
    length = el.a if el.geometry is not None else el.semi_latus_rectum
    return 2.0 * math.pi * length ** 1.5 / math.sqrt(el.k)
