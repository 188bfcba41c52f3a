"""SVG reproductions of the construction figures and CSV export.

Everything drawn comes from :func:`trace_table` (the same rows
:func:`export_csv` writes) or from library objects derived from the
scenario's initial state.  Shapes are written in model coordinates inside a
``<g transform="matrix(s 0 0 -s tx ty)">`` group, so a parsed ``<circle>``
gives the model centre and radius directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .conics import director_circles, gardener_statistic
from .constructions import vhh_construct
from .errors import ScenarioClassMismatch
from .geom2d import Circle, Vec2
from .kepler import KeplerState, OrbitElements, anomaly_grid, elements_from_state, hodograph, sample_orbit_arrays
from .scenarios import BUILTIN, Scenario

FIGURE_IDS = (
    "director-circles",
    "vhh-ellipse",
    "vhh-hyperbola",
    "hodographs",
    "complete-ellipse",
    "complete-hyperbola",
    "minimal-ellipse",
    "minimal-hyperbola",
)

# layers each figure draws, in paint order
FIGURE_LAYERS: dict[str, tuple[str, ...]] = {
    "director-circles": ("orbit", "D_I", "D_O", "points", "labels"),
    "vhh-ellipse": ("D_I", "orbit", "tangent", "trace", "points", "labels"),
    "vhh-hyperbola": ("D_I", "I_prime_arc", "orbit", "tangent", "trace", "points", "labels"),
    "hodographs": ("hodograph", "hodograph_arc", "momentum", "points", "labels"),
    "complete-ellipse": ("orbit", "D_I", "D_O", "hodograph", "momentum", "II_prime", "OO_second", "points", "labels"),
    "complete-hyperbola": ("orbit", "D_I", "D_O", "hodograph", "momentum", "II_prime", "OO_second", "points", "labels"),
    "minimal-ellipse": ("orbit", "D_O", "hodograph", "momentum", "OO_second", "points", "labels"),
    "minimal-hyperbola": ("orbit", "D_O", "hodograph", "momentum", "OO_second", "points", "labels"),
}

# "ellipse" / "hyperbola" figures need that orbit class; pairs take (E<0, E>0)
_PAIR_FIGURES = ("director-circles", "hodographs")

COLORS = {
    "orbit": "#404040",
    "D_I": "#d62728",
    "D_O": "#d62728",
    "I_prime_arc": "#d62728",
    "hodograph": "#1f4fd6",
    "hodograph_arc": "#1f4fd6",
    "momentum": "#1f4fd6",
    "II_prime": "#c020c0",
    "OO_second": "#d62728",
    "tangent": "#808080",
    "trace": "#202020",
    "points": "#000000",
    "labels": "#000000",
}

CSV_COLUMNS = (
    "phi", "r_x", "r_y", "p_x", "p_y",
    "I_prime_x", "I_prime_y", "I_x", "I_y", "O_second_x", "O_second_y",
    "defect_focus", "defect_gardener", "defect_hodograph",
)


@dataclass(frozen=True)
class FigureStyle:
    width_px: int = 800
    height_px: int = 640
    stroke_px: float = 2.0
    thin_px: float = 1.0
    point_px: float = 3.5
    font_px: float = 14.0
    dash_px: tuple[float, float] = (8.0, 5.0)
    margin: float = 0.08
    trace_fraction: float = 0.3
    layers: dict[str, bool] = field(default_factory=dict)

    def layer_on(self, name: str) -> bool:
        return self.layers.get(name, True)


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    scenarios: tuple[Scenario, ...]
    style: FigureStyle = field(default_factory=FigureStyle)

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.figure_id!r}")


def default_scenarios(figure_id: str) -> tuple[Scenario, ...]:
    if figure_id in _PAIR_FIGURES:
        return (BUILTIN["E2"], BUILTIN["H1"])
    return (BUILTIN["H1"] if figure_id.endswith("hyperbola") else BUILTIN["E2"],)


# ---------------------------------------------------------------- data


def trace_table(sc: Scenario) -> np.ndarray:
    """One row per anomaly grid point, columns as in :data:`CSV_COLUMNS`.

    Construction columns are NaN when the orbit has no finite second focus.
    """
    el = elements_from_state(sc.initial)
    phis = anomaly_grid(el, sc.phi_count)
    r, p = sample_orbit_arrays(el, phis)
    n = len(phis)
    table = np.full((n, len(CSV_COLUMNS)), np.nan)
    table[:, 0] = phis
    table[:, 1:3] = r
    table[:, 3:5] = p
    h = hodograph(el).circle
    table[:, 13] = np.abs(np.hypot(p[:, 0] - h.center.x, p[:, 1] - h.center.y) - h.radius) / h.radius
    if el.conic_class.is_central:
        scale = max(el.I.norm(), 2.0 * el.a)
        for i in range(n):
            s = KeplerState(Vec2(*r[i]), Vec2(*p[i]), el.k)
            tr = vhh_construct(s, el)
            table[i, 5:11] = (tr.I_prime.x, tr.I_prime.y, tr.I.x, tr.I.y, tr.O_second.x, tr.O_second.y)
            table[i, 11] = tr.I.distance(el.I) / scale
            table[i, 12] = abs(gardener_statistic(el.geometry, tr.P) - 2.0 * el.a) / (2.0 * el.a)
    return table


def _fmt(v: float) -> str:
    return "nan" if math.isnan(v) else f"{v:.17g}"


def export_csv(sc: Scenario, out_path) -> Path:
    table = trace_table(sc)
    lines = [",".join(CSV_COLUMNS)]
    lines += [",".join(_fmt(float(v)) for v in row) for row in table]
    out = Path(out_path)
    with open(out, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return out


def read_csv(path) -> dict[str, np.ndarray]:
    rows = Path(path).read_text().splitlines()
    header = rows[0].split(",")
    data = np.array([[float(v) for v in row.split(",")] for row in rows[1:]]).reshape(-1, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


# ---------------------------------------------------------------- svg drawing


class _Panel:
    """Model-to-screen mapping and element buffer for one panel."""

    def __init__(self, prefix: str, bbox, x0: float, width: float, height: float, style: FigureStyle):
        xmin, ymin, xmax, ymax = bbox
        bw, bh = xmax - xmin, ymax - ymin
        pad = style.margin
        xmin, xmax = xmin - pad * bw, xmax + pad * bw
        ymin, ymax = ymin - pad * bh, ymax + pad * bh
        self.s = min(width / (xmax - xmin), height / (ymax - ymin))
        self.tx = x0 + 0.5 * width - self.s * 0.5 * (xmin + xmax)
        self.ty = 0.5 * height + self.s * 0.5 * (ymin + ymax)
        self.prefix = prefix
        self.style = style
        self.layers: dict[str, list[str]] = {}
        self.labels: list[str] = []

    def px(self, n: float) -> str:
        return _fmt(n / self.s)

    def screen(self, v: Vec2) -> tuple[float, float]:
        return self.s * v.x + self.tx, -self.s * v.y + self.ty

    def _stroke(self, layer: str, width: float, dashed: bool) -> str:
        attrs = f'fill="none" stroke="{COLORS[layer]}" stroke-width="{self.px(width)}"'
        if dashed:
            a, b = self.style.dash_px
            attrs += f' stroke-dasharray="{self.px(a)},{self.px(b)}"'
        return attrs

    def add(self, layer: str, element: str) -> None:
        self.layers.setdefault(layer, []).append(element)

    def circle(self, layer: str, c: Circle, name: str, dashed: bool = False, width: float | None = None) -> None:
        w = self.style.stroke_px if width is None else width
        self.add(layer, f'<circle id="{self.prefix}{name}" class="{name}" cx="{_fmt(c.center.x)}" cy="{_fmt(c.center.y)}" '
                        f'r="{_fmt(c.radius)}" {self._stroke(layer, w, dashed)}/>')

    def polyline(self, layer: str, pts: np.ndarray, name: str, dashed: bool = False, width: float | None = None,
                 closed: bool = False) -> None:
        w = self.style.stroke_px if width is None else width
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        tag = "polygon" if closed else "polyline"
        self.add(layer, f'<{tag} id="{self.prefix}{name}" class="{name}" points="{coords}" {self._stroke(layer, w, dashed)}/>')

    def segment(self, layer: str, a: Vec2, b: Vec2, name: str, width: float | None = None, dashed: bool = False) -> None:
        w = self.style.stroke_px if width is None else width
        self.add(layer, f'<line id="{self.prefix}{name}" class="{name}" x1="{_fmt(a.x)}" y1="{_fmt(a.y)}" '
                        f'x2="{_fmt(b.x)}" y2="{_fmt(b.y)}" {self._stroke(layer, w, dashed)}/>')

    def point(self, v: Vec2, label: str) -> None:
        self.add("points", f'<circle id="{self.prefix}pt-{label}" class="point" data-label="{label}" '
                           f'cx="{_fmt(v.x)}" cy="{_fmt(v.y)}" r="{self.px(self.style.point_px)}" fill="{COLORS["points"]}"/>')
        sx, sy = self.screen(v)
        off = self.style.point_px + 3.0
        self.labels.append(f'<text x="{_fmt(sx + off)}" y="{_fmt(sy - off)}" font-size="{_fmt(self.style.font_px)}" '
                           f'font-family="serif" font-style="italic" fill="{COLORS["labels"]}">{_escape(label)}</text>')

    def render(self, order: Sequence[str]) -> str:
        out = [f'<g id="{self.prefix}model" transform="matrix({_fmt(self.s)} 0 0 {_fmt(-self.s)} {_fmt(self.tx)} {_fmt(self.ty)})">']
        for layer in order:
            if layer == "labels" or not self.style.layer_on(layer):
                continue
            items = self.layers.get(layer, [])
            if items:
                out.append(f'<g id="{self.prefix}layer-{layer}">')
                out.extend(items)
                out.append("</g>")
        out.append("</g>")
        if self.style.layer_on("labels") and "labels" in order:
            out.append(f'<g id="{self.prefix}layer-labels">')
            out.extend(self.labels)
            out.append("</g>")
        return "\n".join(out)


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def _bbox(circles: Sequence[Circle], points: Sequence[Vec2]):
    xs, ys = [], []
    for c in circles:
        xs += [c.center.x - c.radius, c.center.x + c.radius]
        ys += [c.center.y - c.radius, c.center.y + c.radius]
    for v in points:
        xs.append(v.x)
        ys.append(v.y)
    return min(xs), min(ys), max(xs), max(ys)


def _row_vec(table: np.ndarray, i: int, col: int) -> Vec2:
    return Vec2(float(table[i, col]), float(table[i, col + 1]))


def _check_class(figure_id: str, scenarios: Sequence[Scenario]) -> list[OrbitElements]:
    els = [elements_from_state(sc.initial) for sc in scenarios]
    if figure_id in _PAIR_FIGURES:
        if len(els) != 2 or not (els[0].E < 0 < els[1].E) or not all(el.conic_class.is_central for el in els):
            raise ScenarioClassMismatch(f"{figure_id} needs two scenarios: one with E<0, then one with E>0")
        return els
    if len(els) != 1:
        raise ScenarioClassMismatch(f"{figure_id} takes exactly one scenario")
    el = els[0]
    want_bound = figure_id.endswith("ellipse")
    if not el.conic_class.is_central or el.conic_class.is_bound != want_bound:
        need = "E<0" if want_bound else "E>0"
        raise ScenarioClassMismatch(f"{figure_id} needs an orbit with {need}; {scenarios[0].name} is {el.conic_class.value}")
    return els


def _draw_panel(panel: _Panel, figure_id: str, el: OrbitElements, table: np.ndarray) -> None:
    style = panel.style
    i = _trace_index(table, style)
    P = _row_vec(table, i, 1)
    p = _row_vec(table, i, 3)
    i_prime = _row_vec(table, i, 5)
    i_pt = _row_vec(table, i, 7)
    o_second = _row_vec(table, i, 9)
    O = Vec2(0.0, 0.0)
    d_o, d_i = director_circles(el.geometry)
    h = hodograph(el)
    kind = figure_id.split("-")[0]

    if kind in ("director", "vhh", "complete", "minimal"):
        panel.polyline("orbit", table[:, 1:3], "orbit", closed=el.conic_class.is_bound)
    if kind in ("director", "complete"):
        panel.circle("D_I", d_i, "D_I")
    if kind in ("director", "complete", "minimal"):
        panel.circle("D_O", d_o, "D_O", dashed=True)
    if kind == "vhh":
        if el.E > 0:
            panel.circle("D_I", d_i, "D_I", dashed=True, width=style.thin_px)
            panel.polyline("I_prime_arc", table[:, 5:7], "I_prime_arc")
        else:
            panel.circle("D_I", d_i, "D_I")
        # tangent through P along p, long enough to cross the view
        span = 2.0 * d_i.radius / p.norm()
        panel.segment("tangent", P - p * span, P + p * span, "tangent", width=style.thin_px)
        panel.segment("trace", O, P, "OP", width=style.thin_px)
        panel.segment("trace", P, i_prime, "PI_prime", width=style.thin_px)
        panel.segment("trace", P, i_pt, "PI", width=style.thin_px)
        panel.segment("trace", i_pt, i_prime, "II_prime", width=style.thin_px, dashed=True)
        for v, name in ((O, "O"), (P, "P"), (i_prime, "I'"), (i_pt, "I")):
            panel.point(v, name)
    if kind in ("hodographs", "complete", "minimal"):
        panel.circle("hodograph", h.circle, "hodograph", width=style.thin_px if kind != "hodographs" else None)
        panel.segment("momentum", O, p, "p")
    if kind == "hodographs" and el.E > 0:
        panel.polyline("hodograph_arc", table[:, 3:5], "hodograph_arc")
    if kind == "complete":
        panel.segment("II_prime", i_pt, i_prime, "II_prime")
    if kind in ("complete", "minimal"):
        panel.segment("OO_second", O, o_second, "OO_second")
    if kind == "director":
        panel.point(O, "O")
        panel.point(i_pt, "I")
    elif kind == "hodographs":
        panel.point(O, "O")
        panel.point(p, "p")
        panel.point(h.circle.center, "C")
    elif kind in ("complete", "minimal"):
        panel.point(O, "O")
        panel.point(P, "P")
        panel.point(i_pt, "I")
        panel.point(o_second, "O''")
        if kind == "complete":
            panel.point(i_prime, "I'")


def _trace_index(table: np.ndarray, style: FigureStyle) -> int:
    return min(int(style.trace_fraction * len(table)), len(table) - 1)


def _panel_bbox(figure_id: str, el: OrbitElements, table: np.ndarray, style: FigureStyle):
    d_o, d_i = director_circles(el.geometry)
    h = hodograph(el).circle
    O = Vec2(0.0, 0.0)
    if figure_id == "hodographs":
        return _bbox([h], [O])
    circles = [d_i] if figure_id.startswith("vhh") else [d_o] if figure_id.startswith("minimal") else [d_o, d_i]
    if figure_id.startswith(("complete", "minimal")):
        circles.append(h)
    i = _trace_index(table, style)
    pts = [O, el.I, _row_vec(table, i, 1), _row_vec(table, i, 5), _row_vec(table, i, 9)]
    if el.conic_class.is_bound:
        # the whole ellipse is inside D_I
        pts += [Vec2(float(x), float(y)) for x, y in table[:, 1:3]]
    return _bbox(circles, pts)


def render_svg(spec: FigureSpec) -> str:
    els = _check_class(spec.figure_id, spec.scenarios)
    style = spec.style
    n = len(spec.scenarios)
    w_panel = style.width_px / n
    panels = []
    for j, (sc, el) in enumerate(zip(spec.scenarios, els)):
        table = trace_table(sc)
        prefix = f"p{j}-" if n > 1 else ""
        panel = _Panel(prefix, _panel_bbox(spec.figure_id, el, table, style), j * w_panel, w_panel, style.height_px, style)
        _draw_panel(panel, spec.figure_id, el, table)
        panels.append(panel)
    order = FIGURE_LAYERS[spec.figure_id]
    names = ", ".join(sc.name for sc in spec.scenarios)
    body = "\n".join(p.render(order) for p in panels)
    return (
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{style.width_px}" height="{style.height_px}" viewBox="0 0 {style.width_px} {style.height_px}">\n'
        f"<title>{_escape(spec.figure_id)} ({_escape(names)})</title>\n"
        f'<rect x="0" y="0" width="{style.width_px}" height="{style.height_px}" fill="#ffffff"/>\n'
        f"{body}\n</svg>\n"
    )


def render_figure(spec: FigureSpec, out_path) -> Path:
    out = Path(out_path)
    out.write_text(render_svg(spec))
    return out
