"""The synthetic constructions relating orbit, director circles and hodograph.

Forward (orbit point to fixed focus):

    P --scale r by k/(-E|r|)--> I' on D_I --reflect in tangent l_P--> I

``I`` does not depend on ``P``.  The central reflection through the conic
centre sends ``I'`` to ``O''`` on ``D_O``; as affine vectors ``II' = -OO''``.

Hodograph to orbit:

* three steps: rotate by -pi/2, scale by ``L/(-E)``, translate by ``I``;
  sends the hodograph onto ``D_I`` and ``p`` onto ``I'``;
* two commuting steps: rotate by +pi/2, scale by ``L/(-E)``; sends the
  hodograph onto ``D_O`` and ``p`` onto ``O''``.

Reverse: the orbit is the envelope of the perpendicular bisectors of ``OO'``
as ``O'`` runs over ``D_O``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .conics import ConicClass
from .errors import DegenerateOrbit, NonAdjacentBisectorsParallel, ParabolicEnergy, ParallelLines
from .geom2d import ORIGIN, Circle, Line, Vec2, line_intersection, perpendicular_bisector, reflect_point_in_line, star
from .kepler import KeplerState, OrbitElements, elements_from_state


@dataclass(frozen=True)
class TraceLengths:
    OP: float
    PI_prime: float
    PI: float
    II_prime: float
    OO_second: float


@dataclass(frozen=True)
class ConstructionTrace:
    P: Vec2
    tangent: Line
    I_prime: Vec2
    I: Vec2
    O_second: Vec2
    lengths: TraceLengths


def _require_nonparabolic(el: OrbitElements) -> None:
    if el.conic_class is ConicClass.DEGENERATE:
        raise DegenerateOrbit("L = 0: the construction needs a tangent line")
    if el.conic_class is ConicClass.PARABOLA or el.I is None:
        raise ParabolicEnergy(f"|E| = {abs(el.E):.3g} is within the parabolic tolerance")


def vhh_construct(s: KeplerState, el: Optional[OrbitElements] = None) -> ConstructionTrace:
    """Run the two-step construction at the state ``s``.

    ``el`` may be passed to skip recomputing the elements; it must belong to
    the same orbit.
    """
    if el is None:
        el = elements_from_state(s)
    _require_nonparabolic(el)
    r = s.r
    # negative factor for E > 0: I' lands opposite to P
    i_prime = r * (s.k / (-el.E * r.norm()))
    tangent = Line(r, s.p)
    i_point = reflect_point_in_line(i_prime, tangent)
    o_second = ORIGIN + i_point - i_prime
    lengths = TraceLengths(
        OP=r.norm(),
        PI_prime=r.distance(i_prime),
        PI=r.distance(i_point),
        II_prime=i_point.distance(i_prime),
        OO_second=o_second.norm(),
    )
    return ConstructionTrace(r, tangent, i_prime, i_point, o_second, lengths)


def second_focus_chord(s: KeplerState, el: Optional[OrbitElements] = None) -> tuple[Vec2, float]:
    """``O''`` (on ``D_O``) and ``|OO''|``, which equals ``(|L|/|E|) |p|``."""
    trace = vhh_construct(s, el)
    return trace.O_second, trace.lengths.OO_second


def homothety_factor(el: OrbitElements) -> float:
    """``L/(-E)`` with signs kept; negative for ``E > 0`` or ``L < 0`` (not both)."""
    _require_nonparabolic(el)
    return el.L / (-el.E)


def feynman_map(q: Vec2, el: OrbitElements) -> Vec2:
    s = homothety_factor(el)
    rotated = Vec2(q.y, -q.x)  # rotation by -pi/2
    return el.I + rotated * s


def streamlined_map(q: Vec2, el: OrbitElements) -> Vec2:
    return star(q) * homothety_factor(el)


def feynman_map_circle(c: Circle, el: OrbitElements) -> Circle:
    return Circle(feynman_map(c.center, el), abs(homothety_factor(el)) * c.radius)


def streamlined_map_circle(c: Circle, el: OrbitElements) -> Circle:
    return Circle(streamlined_map(c.center, el), abs(homothety_factor(el)) * c.radius)


def director_arc(el: OrbitElements, n: int, inset: float = 0.05) -> np.ndarray:
    """``n`` increasing angles ``theta`` for points ``O' = I + 2a (cos, sin)`` on ``D_O``.

    For bound orbits the full turn (endpoint excluded).  For a hyperbolic
    branch only the arc facing ``O`` is traced: directions from ``I`` toward
    points of the branch, which lie within ``pi - arccos(-1/e)`` of the
    direction from ``I`` back to the periastron, pulled in by ``inset``.
    """
    _require_nonparabolic(el)
    if el.conic_class.is_bound:
        return np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    mid = el.periapsis_angle + math.pi
    half = math.pi - el.asymptote_half_angle - inset
    if half <= 0.0:
        raise ValueError("inset wider than the director arc")
    return mid + np.linspace(-half, half, n)


def _on_branch_arc(el: OrbitElements, theta: float) -> bool:
    if el.conic_class.is_bound:
        return True
    mid = el.periapsis_angle + math.pi
    delta = math.remainder(theta - mid, 2.0 * math.pi)
    return abs(delta) < math.pi - el.asymptote_half_angle


def envelope_orbit(el: OrbitElements, theta_grid: Sequence[float]) -> list[Vec2]:
    """Recover orbit points as intersections of adjacent bisectors of ``OO'``.

    ``O'(theta) = I + 2a (cos theta, sin theta)``.  Each consecutive pair of
    grid angles yields one point, which approximates the orbit to second
    order in the grid spacing.  Angles off the hyperbolic branch arc are
    dropped; parallel adjacent pairs are skipped.
    """
    _require_nonparabolic(el)
    thetas = np.asarray(theta_grid, dtype=float)
    if np.any(np.diff(thetas) <= 0.0):
        raise ValueError("theta grid must be strictly increasing")
    thetas = [t for t in thetas if _on_branch_arc(el, float(t))]
    if len(thetas) < 3:
        raise ValueError(f"need >= 3 admissible grid angles, got {len(thetas)}")

    d_o = Circle(el.I, 2.0 * el.a)
    bisectors = [perpendicular_bisector(ORIGIN, d_o.point_at(float(t))) for t in thetas]
    points = []
    for b1, b2 in zip(bisectors, bisectors[1:]):
        try:
            points.append(_adjacent_intersection(b1, b2))
        except NonAdjacentBisectorsParallel:
            continue
    return points


def _adjacent_intersection(b1: Line, b2: Line) -> Vec2:
    try:
        return line_intersection(b1, b2)
    except ParallelLines as exc:
        raise NonAdjacentBisectorsParallel(str(exc)) from exc
