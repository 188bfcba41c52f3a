"""Planar vectors, lines and circles.

All values are immutable; every function is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CoincidentPoints,
    CollinearPoints,
    DegenerateLine,
    InsufficientPoints,
    ParallelLines,
)

TAU_ZERO = 1e-12
TAU_GEOM = 1e-9


@dataclass(frozen=True, slots=True)
class Vec2:
    x: float
    y: float

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> Vec2:
        return Vec2(-self.x, -self.y)

    def __mul__(self, s: float) -> Vec2:
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> Vec2:
        return Vec2(self.x / s, self.y / s)

    def __iter__(self):
        yield self.x
        yield self.y

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Vec2) -> float:
        """Scalar z-component of the 3D cross product."""
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def norm2(self) -> float:
        return self.x * self.x + self.y * self.y

    def star(self) -> Vec2:
        return Vec2(-self.y, self.x)

    def unit(self) -> Vec2:
        n = self.norm()
        if n <= TAU_ZERO:
            raise ValueError("cannot normalize a zero vector")
        return Vec2(self.x / n, self.y / n)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def distance(self, other: Vec2) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y])

    @classmethod
    def from_polar(cls, radius: float, angle: float) -> Vec2:
        return cls(radius * math.cos(angle), radius * math.sin(angle))

    @classmethod
    def of(cls, v: Iterable[float]) -> Vec2:
        x, y = v
        return cls(float(x), float(y))


ORIGIN = Vec2(0.0, 0.0)


def star(w: Vec2) -> Vec2:
    """Rotate ``w`` by +pi/2: ``(x, y) -> (-y, x)``.

    The pair ``(w, star(w))`` is positively oriented and ``star(star(w)) == -w``.
    """
    return Vec2(-w.y, w.x)


@dataclass(frozen=True, slots=True)
class Line:
    point: Vec2
    direction: Vec2

    def __post_init__(self):
        if self.direction.norm() < TAU_ZERO:
            raise DegenerateLine(f"line direction {self.direction} is (numerically) zero")

    def unit_direction(self) -> Vec2:
        return self.direction.unit()

    def unit_normal(self) -> Vec2:
        """``star(direction)`` normalized; the left-hand side of the line is positive."""
        return star(self.direction).unit()

    def at(self, t: float) -> Vec2:
        return self.point + self.direction * t

    def signed_distance(self, q: Vec2) -> float:
        return (q - self.point).dot(self.unit_normal())


@dataclass(frozen=True, slots=True)
class Circle:
    center: Vec2
    radius: float

    def __post_init__(self):
        if not self.radius >= 0.0:
            raise ValueError(f"circle radius must be non-negative, got {self.radius}")

    def point_at(self, theta: float) -> Vec2:
        return self.center + Vec2.from_polar(self.radius, theta)

    def contains(self, q: Vec2) -> bool:
        return q.distance(self.center) < self.radius


def _check_line(l: Line) -> None:
    # Line validates on construction, but a Line built via object.__setattr__
    # or a duck-typed stand-in still has to be rejected here.
    if l.direction.norm() < TAU_ZERO:
        raise DegenerateLine(f"line direction {l.direction} is (numerically) zero")


def reflect_point_in_line(q: Vec2, l: Line) -> Vec2:
    """Mirror image of ``q`` across ``l``."""
    _check_line(l)
    u = l.unit_direction()
    w = q - l.point
    return l.point + u * (2.0 * w.dot(u)) - w


def power_of_point(q: Vec2, c: Circle) -> float:
    """``|q - center|^2 - radius^2``; negative iff ``q`` is inside ``c``."""
    return (q - c.center).norm2() - c.radius * c.radius


def line_circle_parameters(l: Line, c: Circle) -> list[float]:
    """Signed arc-length parameters of the intersections of ``l`` with ``c``.

    Parameters are measured along the unit direction from ``l.point``, so the
    product of the two values is the power of ``l.point`` with respect to ``c``.
    Sorted ascending; a tangent line gives a single value.
    """
    _check_line(l)
    u = l.unit_direction()
    w = l.point - c.center
    half_b = u.dot(w)
    # quarter discriminant = r^2 - (perpendicular distance)^2
    disc = half_b * half_b - (w.norm2() - c.radius * c.radius)
    scale = max(c.radius * c.radius, TAU_ZERO)
    if abs(disc) <= TAU_GEOM * scale:
        return [-half_b]
    if disc < 0.0:
        return []
    root = math.sqrt(disc)
    # avoid cancellation in the smaller root
    q = -half_b - math.copysign(root, half_b) if half_b != 0.0 else -root
    t1 = q
    t2 = (w.norm2() - c.radius * c.radius) / q if q != 0.0 else root
    return sorted((t1, t2))


def line_circle_intersections(l: Line, c: Circle) -> list[Vec2]:
    params = line_circle_parameters(l, c)
    u = l.unit_direction()
    return [l.point + u * t for t in params]


def perpendicular_bisector(a: Vec2, b: Vec2) -> Line:
    d = b - a
    if d.norm() <= TAU_ZERO:
        raise CoincidentPoints(f"bisector of coincident points {a}, {b}")
    return Line((a + b) * 0.5, star(d))


def line_intersection(l1: Line, l2: Line) -> Vec2:
    _check_line(l1)
    _check_line(l2)
    d1, d2 = l1.direction, l2.direction
    denom = d1.cross(d2)
    if abs(denom) <= TAU_GEOM * d1.norm() * d2.norm():
        raise ParallelLines("lines are parallel")
    s = (l2.point - l1.point).cross(d2) / denom
    return l1.at(s)


def fit_circle(points: Sequence[Vec2] | np.ndarray) -> tuple[Circle, float]:
    """Algebraic (Kasa) least-squares circle through ``points``.

    Solves ``2 cx x + 2 cy y + c = x^2 + y^2`` in the least-squares sense on
    centroid-shifted data, then ``r^2 = c + cx^2 + cy^2``.  Returns the circle
    and the RMS of ``|p - center| - r`` over the inputs.
    """
    pts = _as_points(points)
    if len(pts) < 3:
        raise InsufficientPoints(f"need at least 3 points, got {len(pts)}")

    centroid = pts.mean(axis=0)
    q = pts - centroid
    scale = np.abs(q).max()
    if scale <= TAU_ZERO:
        raise CollinearPoints("all points coincide")
    q = q / scale
    sv = np.linalg.svd(q, compute_uv=False)
    if sv[-1] <= TAU_GEOM * sv[0]:
        raise CollinearPoints("points are collinear")

    design = np.column_stack([2.0 * q, np.ones(len(q))])
    rhs = (q * q).sum(axis=1)
    (cx, cy, c0), *_ = np.linalg.lstsq(design, rhs, rcond=None)
    radius = math.sqrt(c0 + cx * cx + cy * cy) * scale
    center = np.array([cx, cy]) * scale + centroid

    resid = np.hypot(pts[:, 0] - center[0], pts[:, 1] - center[1]) - radius
    rms = float(np.sqrt(np.mean(resid * resid)))
    return Circle(Vec2(float(center[0]), float(center[1])), radius), rms


def _as_points(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
    else:
        arr = np.array([[p.x, p.y] if isinstance(p, Vec2) else list(p) for p in points], dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) point array, got shape {arr.shape}")
    return arr
