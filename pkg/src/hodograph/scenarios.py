"""Scenarios: an initial state plus grid size and tolerances.

Scenario files are flat ``key = value`` text::

    # elliptic, e = 1/2
    name = E2
    k = 1
    r = 1, 0
    p = 0, 0.70710678118654757
    grid = 360
    tol_rel = 1e-9
    tol_abs = 1e-12

Blank lines and ``#`` comments are ignored.  ``name``, ``grid`` and the
tolerances are optional; ``degenerate = true`` admits ``L = 0`` states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ScenarioFormatError
from .geom2d import TAU_ZERO, Vec2
from .kepler import KeplerState

DEFAULT_GRID = 360


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-9
    abs: float = 1e-12
    rk4: float = 1e-6
    envelope: float = 1e-4


@dataclass(frozen=True)
class Scenario:
    name: str
    k: float
    initial: KeplerState
    phi_count: int = DEFAULT_GRID
    tolerances: Tolerances = field(default_factory=Tolerances)
    degenerate_ok: bool = False

    def __post_init__(self):
        if self.phi_count < 8:
            raise ScenarioFormatError(f"{self.name}: grid must have at least 8 points")
        if self.initial.k != self.k:
            raise ScenarioFormatError(f"{self.name}: k disagrees with the initial state")
        if abs(self.initial.r.cross(self.initial.p)) <= TAU_ZERO and not self.degenerate_ok:
            raise ScenarioFormatError(f"{self.name}: L = 0; pass degenerate_ok=True for radial-motion tests")

    def with_grid(self, n: int) -> Scenario:
        return replace(self, phi_count=n)

    def with_tolerances(self, **kw) -> Scenario:
        return replace(self, tolerances=replace(self.tolerances, **kw))


def make_scenario(name: str, r, p, k: float = 1.0, **kw) -> Scenario:
    return Scenario(name, k, KeplerState(Vec2.of(r), Vec2.of(p), k), **kw)


_S = math.sqrt(0.5)

BUILTIN: dict[str, Scenario] = {
    s.name: s
    for s in (
        make_scenario("circular", (1.0, 0.0), (0.0, 1.0)),
        make_scenario("E2", (1.0, 0.0), (0.0, _S)),
        make_scenario("E2-retro", (1.0, 0.0), (0.0, -_S)),
        make_scenario("H1", (1.0, 0.0), (0.0, 2.0)),
        make_scenario("H1-retro", (1.0, 0.0), (0.0, -2.0)),
        make_scenario("P1", (1.0, 0.0), (0.0, math.sqrt(2.0))),
    )
}

DEFAULT_SUITE = ("circular", "E2", "E2-retro", "H1", "H1-retro", "P1")


def builtin(name: str) -> Scenario:
    try:
        return BUILTIN[name]
    except KeyError:
        raise ScenarioFormatError(f"unknown built-in scenario {name!r}; known: {', '.join(BUILTIN)}") from None


def _vector(key: str, text: str) -> Vec2:
    parts = [t for t in text.replace("(", " ").replace(")", " ").replace(",", " ").split()]
    if len(parts) != 2:
        raise ScenarioFormatError(f"{key}: expected two components, got {text!r}")
    return Vec2(float(parts[0]), float(parts[1]))


def parse_scenario(text: str, default_name: str = "scenario") -> Scenario:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioFormatError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (t.strip() for t in line.split("=", 1))
        if key in values:
            raise ScenarioFormatError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value

    known = {"name", "k", "r", "p", "grid", "tol_rel", "tol_abs", "tol_rk4", "tol_envelope", "degenerate"}
    unknown = set(values) - known
    if unknown:
        raise ScenarioFormatError(f"unknown keys: {', '.join(sorted(unknown))}")
    for key in ("r", "p"):
        if key not in values:
            raise ScenarioFormatError(f"missing required key {key!r}")

    try:
        k = float(values.get("k", "1"))
        r = _vector("r", values["r"])
        p = _vector("p", values["p"])
        grid = int(values.get("grid", DEFAULT_GRID))
        tol = Tolerances(
            rel=float(values.get("tol_rel", Tolerances.rel)),
            abs=float(values.get("tol_abs", Tolerances.abs)),
            rk4=float(values.get("tol_rk4", Tolerances.rk4)),
            envelope=float(values.get("tol_envelope", Tolerances.envelope)),
        )
        initial = KeplerState(r, p, k)
    except ValueError as exc:
        raise ScenarioFormatError(str(exc)) from exc
    degenerate = values.get("degenerate", "false").lower() in {"1", "true", "yes"}
    return Scenario(values.get("name", default_name), k, initial, grid, tol, degenerate_ok=degenerate)


def format_scenario(sc: Scenario) -> str:
    s = sc.initial
    t = sc.tolerances
    return (
        f"name = {sc.name}\n"
        f"k = {sc.k!r}\n"
        f"r = {s.r.x!r}, {s.r.y!r}\n"
        f"p = {s.p.x!r}, {s.p.y!r}\n"
        f"grid = {sc.phi_count}\n"
        f"tol_rel = {t.rel!r}\n"
        f"tol_abs = {t.abs!r}\n"
        f"tol_rk4 = {t.rk4!r}\n"
        f"tol_envelope = {t.envelope!r}\n"
    )


def load_scenario(spec: str) -> Scenario:
    """Resolve ``builtin:NAME``, a bare built-in name, or a file path."""
    if spec.startswith("builtin:"):
        return builtin(spec.split(":", 1)[1])
    path = Path(spec)
    if not path.exists() and spec in BUILTIN:
        return BUILTIN[spec]
    return parse_scenario(path.read_text(), default_name=path.stem)
