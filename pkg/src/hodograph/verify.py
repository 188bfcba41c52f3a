"""Scenario-driven invariant checks with measured defects.

Each ``check_*`` function takes a :class:`~hodograph.scenarios.Scenario` and
returns a :class:`CheckReport`.  Defects are dimensionless: lengths are
normalized by the major axis ``2a`` (or the hodograph radius in momentum
space), so one tolerance fits every scenario scale.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from . import _kernels
from .conics import ConicClass, director_circles, distance_point_to_circle, gardener_statistic, tangent_pedal_products
from .constructions import (
    director_arc,
    envelope_orbit,
    feynman_map,
    feynman_map_circle,
    streamlined_map,
    streamlined_map_circle,
    vhh_construct,
)
from .errors import HodographError
from .geom2d import ORIGIN, Vec2, fit_circle
from .kepler import (
    KeplerState,
    OrbitElements,
    anomaly_grid,
    elements_from_state,
    hodograph,
    rk4_arrays,
    sample_orbit_arrays,
    time_scale,
)
from .scenarios import Scenario

RK4_STEPS = 4000
RK4_ENERGY_DRIFT = 1e-8
LRL_DRIFT_TOL = 1e-8
ENVELOPE_MIN_RATIO = 3.5
ENVELOPE_ARC_INSET = 0.05
ANOMALY_INSET = 1e-3


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    scenario: str
    passed: bool
    max_defect: float
    tolerance: float
    samples: int
    notes: str = ""
    skipped: bool = False

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        text = f"{status} {self.check_id:<24} {self.scenario:<12} defect={self.max_defect:.3e} tol={self.tolerance:.1e} n={self.samples}"
        return f"{text}  {self.notes}" if self.notes else text


def _report(check_id, sc, defect, tol, samples, notes="") -> CheckReport:
    defect = float(defect)
    return CheckReport(check_id, sc.name, bool(defect <= tol), defect, float(tol), int(samples), notes)


def _skip(check_id, sc, why) -> CheckReport:
    return CheckReport(check_id, sc.name, True, 0.0, 0.0, 0, f"skipped: {why}", skipped=True)


class _Grid:
    """Analytic samples of one scenario orbit."""

    def __init__(self, sc: Scenario, n: int | None = None):
        self.el = elements_from_state(sc.initial)
        self.phis = anomaly_grid(self.el, n or sc.phi_count, ANOMALY_INSET)
        self.r, self.p = sample_orbit_arrays(self.el, self.phis)

    def states(self):
        k = self.el.k
        for (x, y), (px, py) in zip(self.r, self.p):
            yield KeplerState(Vec2(float(x), float(y)), Vec2(float(px), float(py)), k)

    def traces(self):
        return [vhh_construct(s, self.el) for s in self.states()]


def _max_pairwise(points: np.ndarray) -> float:
    diff = points[:, None, :] - points[None, :, :]
    return float(np.sqrt((diff * diff).sum(axis=-1)).max())


def _pts(vs) -> np.ndarray:
    return np.array([[v.x, v.y] for v in vs])


# ---------------------------------------------------------------- checks


def check_focus_constancy(sc: Scenario) -> CheckReport:
    """Spread of the reflected point ``I`` over the anomaly grid."""
    g = _Grid(sc)
    traces = g.traces()
    pts = _pts(t.I for t in traces)
    scale = max(g.el.I.norm(), 2.0 * g.el.a)
    spread = _max_pairwise(pts) / scale
    offset = float(np.abs(pts - g.el.I.to_array()).max()) / scale
    notes = f"I=({g.el.I.x:.12g}, {g.el.I.y:.12g}) max|I-A/E|/scale={offset:.2e}"
    return _report("focus-constancy", sc, max(spread, offset), sc.tolerances.rel, len(traces), notes)


def _circle_defect(points: np.ndarray, center: Vec2, radius: float) -> tuple[float, str]:
    fit, rms = fit_circle(points)
    dc = fit.center.distance(center) / radius
    dr = abs(fit.radius - radius) / radius
    return max(dc, dr, rms / radius), f"center_err={dc:.2e} radius_err={dr:.2e} rms={rms / radius:.2e}"


def check_hodograph_circle(sc: Scenario) -> CheckReport:
    """Fit a circle to analytic momenta; compare with ``star(A)/L``, ``k/|L|``."""
    g = _Grid(sc)
    h = hodograph(g.el).circle
    defect, notes = _circle_defect(g.p, h.center, h.radius)
    # |center| / radius == e
    ratio = abs(h.center.norm() / h.radius - g.el.e)
    fit, _ = fit_circle(g.p)
    ratio_fit = abs(fit.center.norm() / fit.radius - g.el.e)
    on_circle = float(np.abs(np.hypot(g.p[:, 0] - h.center.x, g.p[:, 1] - h.center.y) - h.radius).max()) / h.radius
    notes += f" offset/radius-e={max(ratio, ratio_fit):.2e} on_circle={on_circle:.2e}"
    return _report("hodograph-circle", sc, max(defect, ratio, ratio_fit, on_circle), sc.tolerances.rel, len(g.p), notes)


def _rk4_run(sc: Scenario, n_steps: int = RK4_STEPS):
    el = elements_from_state(sc.initial)
    span = time_scale(el)
    rows = rk4_arrays(sc.initial, span / n_steps, n_steps)
    if el.conic_class.is_bound:
        rows = rows[:-1]  # last row repeats the first after one period
    return el, rows


def check_hodograph_circle_rk4(sc: Scenario, n_steps: int = RK4_STEPS) -> CheckReport:
    """Same comparison, on momenta of a directly integrated trajectory."""
    el, rows = _rk4_run(sc, n_steps)
    inv = _kernels.invariants(rows, sc.k)
    drift = float(np.abs(inv[:, 0] - el.E).max())
    h = hodograph(el).circle
    defect, notes = _circle_defect(rows[:, 2:], h.center, h.radius)
    notes += f" energy_drift={drift:.2e}"
    if drift >= RK4_ENERGY_DRIFT:
        notes += " (step too coarse)"
        defect = max(defect, math.inf)
    return _report("hodograph-circle-rk4", sc, defect, sc.tolerances.rk4, len(rows), notes)


def check_hodograph_origin(sc: Scenario) -> CheckReport:
    """For ``E = 0`` the hodograph circle passes through ``p = 0``."""
    g = _Grid(sc)
    h = hodograph(g.el).circle
    fit, _ = fit_circle(g.p)
    d_pred = abs(h.center.norm() - h.radius) / h.radius
    d_fit = abs(fit.center.norm() - fit.radius) / fit.radius
    notes = f"predicted={d_pred:.2e} fitted={d_fit:.2e}"
    return _report("hodograph-origin", sc, max(d_pred, d_fit), sc.tolerances.rel, len(g.p), notes)


def check_arc_restriction(sc: Scenario) -> CheckReport:
    """For ``E > 0`` every sampled momentum has ``|p|^2 > 2E`` strictly."""
    g = _Grid(sc)
    margin = float(((g.p * g.p).sum(axis=1) - 2.0 * g.el.E).min())
    # strict inequality: defect -margin must not exceed -tiny
    tol = -np.finfo(float).tiny
    return _report("arc-restriction", sc, -margin, tol, len(g.p), f"min(p^2-2E)={margin:.6g}")


def check_conic_identities(sc: Scenario) -> CheckReport:
    """Gardener, proportionality, director-circle and pedal identities over the grid."""
    g = _Grid(sc)
    el = g.el
    geo = el.geometry
    two_a = 2.0 * el.a
    d_o, d_i = director_circles(geo)
    hyper = el.E > 0.0
    coef = abs(el.L) / abs(el.E)

    defects = dict.fromkeys(
        ("gardener", "trace_gardener", "II'", "OO''", "O''_on_D_O", "equidistance", "perpendicular", "pedal", "containment", "b2"),
        0.0,
    )
    n = 0
    for s, tr in zip(g.states(), g.traces()):
        n += 1
        P = tr.P
        L = tr.lengths
        pn = s.p.norm()
        defects["gardener"] = max(defects["gardener"], abs(gardener_statistic(geo, P) - two_a) / two_a)
        trace_sum = abs(L.PI - L.OP) if hyper else L.OP + L.PI
        defects["trace_gardener"] = max(defects["trace_gardener"], abs(trace_sum - el.k / abs(el.E)) / two_a)
        defects["II'"] = max(defects["II'"], abs(L.II_prime - coef * pn) / (coef * pn))
        defects["OO''"] = max(defects["OO''"], abs(L.OO_second - coef * pn) / (coef * pn))
        defects["O''_on_D_O"] = max(defects["O''_on_D_O"], distance_point_to_circle(tr.O_second, d_o) / two_a)
        defects["equidistance"] = max(defects["equidistance"], abs(P.norm() - distance_point_to_circle(P, d_o)) / two_a)
        defects["perpendicular"] = max(defects["perpendicular"], abs(tr.O_second.dot(s.p)) / (tr.O_second.norm() * pn))
        _, _, prod = tangent_pedal_products(geo, tr.tangent)
        target = -el.b2 if hyper else el.b2
        defects["pedal"] = max(defects["pedal"], abs(prod - target) / el.b2)

    # O inside D_O and I inside D_I for ellipses, outside for hyperbolas
    inside = (d_o.contains(ORIGIN), d_i.contains(el.I))
    if inside != ((not hyper),) * 2:
        defects["containment"] = math.inf
    defects["b2"] = abs(geo.b * geo.b - el.b2) / el.b2

    worst = max(defects, key=defects.get)
    notes = " ".join(f"{k}={v:.1e}" for k, v in defects.items()) + f" worst={worst}"
    return _report("conic-identities", sc, max(defects.values()), sc.tolerances.rel, n, notes)


def _construction_scale(tr) -> float:
    # roundoff in the reflection grows with the coordinates it handles
    return max(tr.P.norm(), tr.I_prime.norm())


def check_maps(sc: Scenario) -> CheckReport:
    """Pointwise: three-step map sends ``p`` to ``I'``; two-step map sends ``p`` to ``O''``."""
    g = _Grid(sc)
    el = g.el
    worst_f = worst_s = worst_c = 0.0
    n = 0
    for s, tr in zip(g.states(), g.traces()):
        n += 1
        scale = _construction_scale(tr)
        f = feynman_map(s.p, el)
        m = streamlined_map(s.p, el)
        worst_f = max(worst_f, f.distance(tr.I_prime) / scale)
        worst_s = max(worst_s, m.distance(tr.O_second) / scale)
        # two-step image is the central reflection (about O) of the three-step one, less I
        worst_c = max(worst_c, m.distance(-(f - el.I)) / scale)
    notes = f"p->I'={worst_f:.1e} p->O''={worst_s:.1e} coherence={worst_c:.1e}"
    return _report("maps", sc, max(worst_f, worst_s, worst_c), sc.tolerances.abs, n, notes)


def check_map_circles(sc: Scenario) -> CheckReport:
    """The fitted hodograph maps onto ``D_O`` (two steps) and ``D_I`` (three steps)."""
    g = _Grid(sc)
    el = g.el
    two_a = 2.0 * el.a
    fitted, _ = fit_circle(g.p)
    d_o, d_i = director_circles(el.geometry)
    defects = {}
    for name, image, target in (
        ("D_O", streamlined_map_circle(fitted, el), d_o),
        ("D_I", feynman_map_circle(fitted, el), d_i),
    ):
        defects[name] = max(image.center.distance(target.center), abs(image.radius - target.radius)) / two_a
    # the momentum origin is a fixed point of the two-step map
    defects["origin"] = streamlined_map(ORIGIN, el).norm() / two_a
    notes = " ".join(f"{k}={v:.1e}" for k, v in defects.items())
    return _report("map-circles", sc, max(defects.values()), sc.tolerances.rel, len(g.p), notes)


def envelope_defect(el: OrbitElements, n: int) -> float:
    """Max ``|d(P, O) - d(P, D_O)| / 2a`` over the envelope points of an ``n``-point arc grid."""
    d_o, _ = director_circles(el.geometry)
    pts = envelope_orbit(el, director_arc(el, n, ENVELOPE_ARC_INSET))
    return max(abs(P.norm() - distance_point_to_circle(P, d_o)) for P in pts) / d_o.radius


def check_envelope(sc: Scenario) -> CheckReport:
    """Orbit recovered from bisector envelope at twice the scenario grid."""
    el = elements_from_state(sc.initial)
    n = 2 * sc.phi_count
    defect = envelope_defect(el, n)
    return _report("envelope", sc, defect, sc.tolerances.envelope, n, f"grid={n}")


def check_envelope_order(sc: Scenario) -> CheckReport:
    """Envelope defect must shrink by >= 3.5 when the grid doubles."""
    el = elements_from_state(sc.initial)
    n = 2 * sc.phi_count
    coarse, fine = envelope_defect(el, n), envelope_defect(el, 2 * n)
    ratio = coarse / fine if fine > 0.0 else math.inf
    return _report("envelope-order", sc, 1.0 / ratio, 1.0 / ENVELOPE_MIN_RATIO, 2, f"ratio={ratio:.3f} ({n}->{2 * n})")


def check_lrl_closed_form(sc: Scenario) -> CheckReport:
    """Closed-form ``dA/dt`` vanishes at every grid state."""
    el = elements_from_state(sc.initial)
    if el.conic_class is ConicClass.DEGENERATE:
        rows = np.array([sc.initial.as_row()])
    else:
        g = _Grid(sc)
        rows = np.column_stack([g.r, g.p])
    rate = _kernels.lrl_rate(rows, sc.k)
    defect = float(np.hypot(rate[:, 0], rate[:, 1]).max())
    return _report("lrl-closed-form", sc, defect, sc.tolerances.abs, len(rows))


def check_lrl_rk4_drift(sc: Scenario, n_steps: int = RK4_STEPS) -> CheckReport:
    """Drift of ``A`` along an RK4 trajectory over one period (or time scale)."""
    el, rows = _rk4_run(sc, n_steps)
    inv = _kernels.invariants(rows, sc.k)
    drift = float(np.hypot(inv[:, 2] - el.A.x, inv[:, 3] - el.A.y).max())
    return _report("lrl-rk4-drift", sc, drift, LRL_DRIFT_TOL, len(rows), f"steps={n_steps}")


# ---------------------------------------------------------------- suite

_NEEDS_CENTRAL = "needs E != 0 (no finite second focus)"

# check_id -> (function, applicability predicate, reason when not applicable)
CHECKS: dict[str, tuple[Callable[[Scenario], CheckReport], Callable[[OrbitElements], bool], str]] = {
    "focus-constancy": (check_focus_constancy, lambda el: el.conic_class.is_central, _NEEDS_CENTRAL),
    "hodograph-circle": (check_hodograph_circle, lambda el: True, ""),
    "hodograph-circle-rk4": (check_hodograph_circle_rk4, lambda el: True, ""),
    "hodograph-origin": (check_hodograph_origin, lambda el: el.is_parabolic, "only for E = 0"),
    "arc-restriction": (check_arc_restriction, lambda el: el.conic_class is ConicClass.HYPERBOLA_BRANCH, "only for E > 0"),
    "conic-identities": (check_conic_identities, lambda el: el.conic_class.is_central, _NEEDS_CENTRAL),
    "maps": (check_maps, lambda el: el.conic_class.is_central, _NEEDS_CENTRAL),
    "map-circles": (check_map_circles, lambda el: el.conic_class.is_central, _NEEDS_CENTRAL),
    "envelope": (check_envelope, lambda el: el.conic_class.is_central, _NEEDS_CENTRAL),
    "envelope-order": (check_envelope_order, lambda el: el.conic_class.is_central, _NEEDS_CENTRAL),
    "lrl-closed-form": (check_lrl_closed_form, lambda el: True, ""),
    "lrl-rk4-drift": (check_lrl_rk4_drift, lambda el: True, ""),
}

# checks that still run on radial (L = 0) motion
_DEGENERATE_OK = {"lrl-closed-form"}

# Each stated result of the theory and the checks that witness it.
MANIFEST: dict[str, tuple[str, ...]] = {
    "second focus I fixed along E<0 orbits": ("focus-constancy",),
    "E<0 orbit is an ellipse, foci O and I, major axis k/(-E)": ("conic-identities",),
    "|II'| = (L/(-E)) p for E<0": ("conic-identities", "maps"),
    "second focus I fixed along E>0 orbits": ("focus-constancy",),
    "E!=0 orbit is an ellipse or hyperbola branch, major axis k/|E|": ("conic-identities",),
    "|II'| = (L/|E|) p = (2b^2/L) p for E!=0": ("conic-identities",),
    "pedal product rho_I rho_O = -b^2 for hyperbolas": ("conic-identities",),
    "hodograph is a circle, centre star(A)/L, radius k/|L|": ("hodograph-circle", "hodograph-circle-rk4"),
    "E>0 hodograph is the arc p^2 > 2E": ("arc-restriction",),
    "E=0 hodograph passes through the origin": ("hodograph-origin",),
    "O'' on D_O and |OO''| = (2b^2/L) p": ("conic-identities",),
    "two-step map sends hodograph to D_O and p to OO''": ("maps", "map-circles"),
    "orbit is envelope of bisectors of OO' / equidistant from O and D_O": ("envelope", "envelope-order"),
    "three-step map sends hodograph to D_I and p to II'": ("maps", "map-circles"),
    "A = E I is conserved": ("lrl-closed-form", "lrl-rk4-drift"),
}


def run_check(check_id: str, sc: Scenario) -> CheckReport:
    fn, applies, why = CHECKS[check_id]
    try:
        el = elements_from_state(sc.initial)
        if el.conic_class is ConicClass.DEGENERATE and check_id not in _DEGENERATE_OK:
            return _skip(check_id, sc, "degenerate orbit (L = 0)")
        if not applies(el):
            return _skip(check_id, sc, why)
        return fn(sc)
    except (HodographError, ArithmeticError, ValueError) as exc:
        return CheckReport(check_id, sc.name, False, math.inf, 0.0, 0, f"error: {type(exc).__name__}: {exc}")


def run_suite(scenarios: Iterable[Scenario], checks: Iterable[str] | None = None) -> list[CheckReport]:
    """All checks on all scenarios, ordered by scenario then check id."""
    ids = list(CHECKS) if checks is None else list(checks)
    return [run_check(cid, sc) for sc in scenarios for cid in ids]


def summary(reports: list[CheckReport]) -> str:
    failed = [r for r in reports if not r.passed]
    skipped = sum(r.skipped for r in reports)
    head = f"{len(reports) - len(failed) - skipped} passed, {len(failed)} failed, {skipped} skipped"
    return head if not failed else head + ": " + ", ".join(f"{r.check_id}@{r.scenario}" for r in failed)


def format_text(reports: list[CheckReport]) -> str:
    return "".join(r.line() + "\n" for r in reports) + summary(reports) + "\n"


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def write_json(reports: list[CheckReport], path) -> None:
    records = [{k: _jsonable(v) for k, v in asdict(r).items()} for r in reports]
    Path(path).write_text(json.dumps(records, indent=1) + "\n")


def read_json(path) -> list[CheckReport]:
    out = []
    for rec in json.loads(Path(path).read_text()):
        rec = {k: (float(v) if k in ("max_defect", "tolerance") else v) for k, v in rec.items()}
        out.append(CheckReport(**rec))
    return out
