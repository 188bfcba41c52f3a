"""Focal conics: gardener form, director circles and pedal distances.

A conic here always has a focus at the force centre ``O`` (the origin).  For
ellipses and hyperbolas ``I`` is the other, "empty" focus.  Each focus has a
director circle of radius ``2a`` centred at the *other* focus:

* ``D_I`` is centred at ``O``,
* ``D_O`` is centred at ``I``,

and every point of the conic is equidistant from ``O`` and ``D_O`` (and from
``I`` and ``D_I``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import NoDirectorCircle, NoGardenerForm
from .geom2d import ORIGIN, TAU_ZERO, Circle, Line, Vec2

TAU_E = 1e-9


class ConicClass(enum.Enum):
    ELLIPSE = "ellipse"
    PARABOLA = "parabola"
    HYPERBOLA_BRANCH = "hyperbola-branch"
    CIRCLE = "circle"
    DEGENERATE = "degenerate"

    @property
    def is_central(self) -> bool:
        """Ellipse, circle or hyperbola: the conics with a centre and finite ``a``."""
        return self in (ConicClass.ELLIPSE, ConicClass.CIRCLE, ConicClass.HYPERBOLA_BRANCH)

    @property
    def is_bound(self) -> bool:
        return self in (ConicClass.ELLIPSE, ConicClass.CIRCLE)


def classify(e: float, L: float) -> ConicClass:
    if abs(L) <= TAU_ZERO:
        return ConicClass.DEGENERATE
    if e <= TAU_E:
        return ConicClass.CIRCLE
    if abs(e - 1.0) <= TAU_E:
        return ConicClass.PARABOLA
    if e < 1.0:
        return ConicClass.ELLIPSE
    return ConicClass.HYPERBOLA_BRANCH


@dataclass(frozen=True)
class ConicGeometry:
    focus_O: Vec2
    focus_I: Vec2
    a: float
    b: float
    e: float
    f: float
    axis: Vec2
    conic_class: ConicClass

    @property
    def center(self) -> Vec2:
        return (self.focus_O + self.focus_I) * 0.5

    @property
    def major_axis(self) -> float:
        return 2.0 * self.a

    def reflect_through_center(self, q: Vec2) -> Vec2:
        """Central symmetry about the conic centre; swaps the foci."""
        return self.focus_O + self.focus_I - q

    @classmethod
    def from_foci(cls, focus_I: Vec2, a: float, conic_class: ConicClass, focus_O: Vec2 = ORIGIN):
        """Build an ellipse/circle/hyperbola from its foci and semi-major axis."""
        d = focus_I - focus_O
        f = 0.5 * d.norm()
        e = f / a
        if conic_class is ConicClass.HYPERBOLA_BRANCH:
            b = a * math.sqrt(max(e * e - 1.0, 0.0))
        else:
            b = a * math.sqrt(max(1.0 - e * e, 0.0))
        if f > TAU_ZERO:
            # I lies toward apoastron for bound orbits, toward periastron otherwise
            axis = d.unit() if conic_class is ConicClass.HYPERBOLA_BRANCH else -d.unit()
        else:
            axis = Vec2(1.0, 0.0)
        return cls(focus_O, focus_I, a, b, e, f, axis, conic_class)


def _require_central(g: ConicGeometry, exc: type[Exception]) -> None:
    if not g.conic_class.is_central:
        raise exc(f"{g.conic_class.value} conic has no finite second focus")


def director_circles(g: ConicGeometry) -> tuple[Circle, Circle]:
    """Return ``(D_O, D_I)``: radius ``2a``, centred at ``I`` and ``O`` respectively."""
    _require_central(g, NoDirectorCircle)
    r = 2.0 * g.a
    return Circle(g.focus_I, r), Circle(g.focus_O, r)


def distance_point_to_circle(q: Vec2, c: Circle) -> float:
    return abs(q.distance(c.center) - c.radius)


def gardener_statistic(g: ConicGeometry, p: Vec2) -> float:
    """Sum (ellipse) or absolute difference (hyperbola) of focal distances.

    Equals ``2a`` for every point ``p`` on the conic.
    """
    _require_central(g, NoGardenerForm)
    d_o = p.distance(g.focus_O)
    d_i = p.distance(g.focus_I)
    if g.conic_class is ConicClass.HYPERBOLA_BRANCH:
        return abs(d_i - d_o)
    return d_o + d_i


def tangent_pedal_products(g: ConicGeometry, t: Line) -> tuple[float, float, float]:
    """Signed distances from ``O`` and ``I`` to a tangent line, and their product.

    The normal is oriented toward ``O``, so ``rho_O >= 0``.  The foci lie on
    the same side of an ellipse tangent and on opposite sides of a hyperbola
    tangent, hence the product is ``+b^2`` or ``-b^2``.
    """
    _require_central(g, NoDirectorCircle)
    n = t.unit_normal()
    rho_o = (g.focus_O - t.point).dot(n)
    rho_i = (g.focus_I - t.point).dot(n)
    if rho_o < 0.0:
        rho_o, rho_i = -rho_o, -rho_i
    return rho_o, rho_i, rho_o * rho_i
