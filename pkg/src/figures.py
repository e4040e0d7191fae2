"""FigureRenderer: deterministic SVG drawings of construction traces.

gf(p) planes are drawn on the p x p lattice. Rational and quaternion
coordinates are projected to floats only here, for drawing; quaternion
a+bi+cj+dk is placed at a + b/2 + c/4 + d/8.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from jinja2 import Environment, FileSystemLoader, select_autoescape

from src.construct import Chart, ConstructionTrace, chart_point, geo_add, geo_mul
from src.errors import DesarguesError, FigureSpecError
from src.geometry import Line, Point, join, parallel_through
from src.ratio import RatioContext, construct_ratio2, construct_ratio3
from src.scalar import ModelConfig
from src.schemas import FigureSpec
from src.transforms import dilatation, parallel_projection, translation

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"

COLORS = {
    "given": "#1f2937",
    "aux": "#b45309",
    "meet": "#1d4ed8",
    "map": "#047857",
    "join": "#4b5563",
    "parallel": "#9ca3af",
}


class FigureRenderer:
    """
    Renders a ConstructionTrace as a self-contained SVG document.

    Responsibilities:
    - Map exact coordinates to canvas positions (lattice or float projection)
    - Emit one element per trace step, parallels dashed
    - Embed the trace itself as JSON metadata
    """

    def __init__(self, settings: Dict[str, Any] = None):
        """
        Args:
            settings: Settings configuration dictionary (from settings.json)
        """
        figures = (settings or {}).get("figures", {})
        self.canvas_size = figures.get("canvas_size", 480)
        self.margin = figures.get("margin", 40)
        self.precision = figures.get("precision", 2)
        self.point_radius = figures.get("point_radius", 4)
        self.env = Environment(
            loader=FileSystemLoader(str(TEMPLATES_DIR)),
            autoescape=select_autoescape(enabled_extensions=("j2",), default_for_string=True),
            trim_blocks=True,
            lstrip_blocks=True,
        )

    def _fmt(self, value: float) -> str:
        text = f"{value:.{self.precision}f}"
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return "0" if text in ("-0", "") else text

    def render(self, trace: ConstructionTrace, model: ModelConfig, title: str = "construction",
               canvas_size: Optional[int] = None) -> str:
        size = canvas_size or self.canvas_size
        to_canvas, lattice = self._projection(trace, model, size)
        elements: List[Dict[str, Any]] = []
        point_steps = [s for s in trace.steps if s.kind == "point"]
        for step in trace.steps:
            if step.kind == "point":
                x, y = to_canvas(step.value)
                elements.append({
                    "kind": "point", "label": step.label, "op": step.op, "color": COLORS.get(step.op, "#111827"),
                    "x": self._fmt(x), "y": self._fmt(y), "tx": self._fmt(x + 6), "ty": self._fmt(y - 6),
                })
            else:
                segments, marks = self._line_points(step.value, point_steps, model, to_canvas, size)
                elements.append({
                    "kind": "line", "label": step.label, "op": step.op, "color": COLORS.get(step.op, "#4b5563"),
                    "dashed": step.op == "parallel",
                    "segments": [" ".join(f"{self._fmt(x)},{self._fmt(y)}" for x, y in seg) for seg in segments],
                    "marks": [(self._fmt(x), self._fmt(y)) for x, y in marks],
                })
        template = self.env.get_template("figure.svg.j2")
        return template.render(
            size=size,
            title=title,
            trace_json=json.dumps(trace.to_dict(), sort_keys=True, separators=(",", ":")),
            lattice=[(self._fmt(x), self._fmt(y)) for x, y in lattice],
            elements=elements,
            radius=self.point_radius,
        )

    def _projection(self, trace: ConstructionTrace, model: ModelConfig, size: int):
        span = size - 2 * self.margin
        if model.is_finite:
            p = model.modulus
            step = span / max(p - 1, 1)

            def lattice_xy(point: Point) -> Tuple[float, float]:
                gx, gy = int(point.x.payload[0]), int(point.y.payload[0])
                return self.margin + gx * step, size - self.margin - gy * step

            grid = [(self.margin + i * step, size - self.margin - j * step) for j in range(p) for i in range(p)]
            return lattice_xy, grid

        coords = np.array(
            [[s.value.x.to_float(), s.value.y.to_float()] for s in trace.steps if s.kind == "point"] or [[0.0, 0.0]],
            dtype=float,
        )
        low, high = coords.min(axis=0), coords.max(axis=0)
        extent = float(np.max(high - low)) or 1.0
        center = (low + high) / 2

        def float_xy(point: Point) -> Tuple[float, float]:
            v = (np.array([point.x.to_float(), point.y.to_float()]) - center) / extent * span
            return size / 2 + float(v[0]), size / 2 - float(v[1])

        return float_xy, []

    def _line_points(self, line: Line, point_steps, model: ModelConfig, to_canvas, size: int):
        """Polyline segments and per-point marks of one line."""
        if model.is_finite:
            # lines wrap around the lattice: stroke each straight run, mark every point
            runs = self._lattice_runs(line, model)
            segments = [[to_canvas(point) for point in run] for run in runs if len(run) > 1]
            return segments, [to_canvas(point) for run in runs for point in run]
        incident = [to_canvas(s.value) for s in point_steps if line.contains(s.value)]
        base = np.array(to_canvas(line.base))
        ahead = np.array(to_canvas(line.point_at(line.dir.x.one_like())))
        direction = ahead - base
        norm = float(np.linalg.norm(direction)) or 1.0
        direction = direction / norm
        anchors = np.array(incident) if incident else base.reshape(1, 2)
        ts = anchors @ direction
        pad = self.margin / 2
        start = anchors[int(np.argmin(ts))] - direction * pad
        end = anchors[int(np.argmax(ts))] + direction * pad
        if len(incident) < 2:
            start, end = start - direction * size / 4, end + direction * size / 4
        return [[(float(start[0]), float(start[1])), (float(end[0]), float(end[1]))]], []

    @staticmethod
    def _lattice_runs(line: Line, model: ModelConfig) -> List[List[Point]]:
        """Points of a gf(p) line in lattice order, split where the line wraps."""
        def cell(point: Point) -> Tuple[int, int]:
            return int(point.x.payload[0]), int(point.y.payload[0])

        step = (0, 1) if line.dir.x.is_zero else (1, int(line.dir.y.payload[0]))
        points = sorted((line.point_at(t) for t in model.elements()), key=cell)
        runs = [[points[0]]]
        for prev, point in zip(points, points[1:]):
            (x0, y0), (x1, y1) = cell(prev), cell(point)
            if (x1 - x0, y1 - y0) == step:
                runs[-1].append(point)
            else:
                runs.append([point])
        return runs


# --- figure specs ---------------------------------------------------------------

def _scalars(spec: FigureSpec, model: ModelConfig) -> Dict[str, Any]:
    try:
        return {name: model.parse_scalar(text) for name, text in spec.inputs.items()}
    except DesarguesError as e:
        raise FigureSpecError(f"figure input: {e}") from e


def build_figure_trace(spec: FigureSpec) -> Tuple[ConstructionTrace, ModelConfig]:
    """
    Run the construction a FigureSpec names and return its trace.

    Raises:
        FigureSpecError: if the inputs violate the construction's preconditions
    """
    model = ModelConfig.parse(spec.model)
    s = _scalars(spec, model)
    chart = Chart.standard(model)
    A, B = chart_point(chart, s["a"]), chart_point(chart, s["b"])
    try:
        if spec.kind == "add":
            return geo_add(chart, A, B)[1], model
        if spec.kind == "mul":
            return geo_mul(chart, A, B)[1], model
        ctx = RatioContext(chart)
        if spec.kind == "ratio2":
            return construct_ratio2(ctx, A, B)[1], model
        if spec.kind == "ratio3":
            return construct_ratio3(ctx, A, B, chart_point(chart, s["c"]))[1], model
        if spec.kind == "pproj":
            return _projection_trace(chart, [A, B, chart_point(chart, s["c"])], s), model
        return _map_trace(spec.kind, chart, A, B, s), model
    except DesarguesError as e:
        raise FigureSpecError(f"{spec.kind} figure: {e}", {"cause": e.code}) from e


def _projection_trace(chart: Chart, points: List[Point], s: Dict[str, Any]) -> ConstructionTrace:
    model = chart.O.model
    zero, one = model.zero(), model.one()
    target = Line(Point(zero, s["offset"]), Point(one, s["slope"]))
    direction = Line(chart.O, Point(s["dir_x"], s["dir_y"]))
    pproj = parallel_projection(chart.line, target, direction)
    trace = ConstructionTrace()
    trace.given("O", chart.O)
    trace.given("I", chart.I)
    trace.given("l_OI", chart.line)
    l_target = trace.given("target", target)
    l_dir = trace.given("d", direction)
    projected = set()
    for name, X in zip("ABC", points):
        if X in projected:
            continue
        projected.add(X)
        lx = trace.given(name, X)
        through = trace.record(f"m_{name}", parallel_through(direction, X), "parallel", (l_dir, lx))
        trace.record(f"{name}'", pproj(X), "meet", (through, l_target))
    return trace


def _map_trace(kind: str, chart: Chart, A: Point, B: Point, s: Dict[str, Any]) -> ConstructionTrace:
    V = Point(s["vx"], s["vy"])
    m = translation(V) if kind == "translation" else dilatation(V, s["factor"])
    trace = ConstructionTrace()
    trace.given("O", chart.O)
    trace.given("I", chart.I)
    trace.given("l_OI", chart.line)
    la, lb = trace.given("A", A), trace.given("B", B)
    if A != B:
        trace.record("l_AB", join(A, B), "join", (la, lb))
    lv = trace.given("v" if kind == "translation" else "V", V)
    images = []
    for name, X, lx in (("A", A, la), ("B", B, lb)):
        image = trace.record(f"{name}'", m(X), "map", (lx,), note=str(m), mapping=m)
        images.append(image)
        if kind == "dilatation" and X != V:
            trace.record(f"l_V{name}", join(V, X), "join", (lv, lx))
        elif kind == "translation" and m(X) != X:
            trace.record(f"l_{name}{name}'", join(X, m(X)), "join", (lx, image))
    if m(A) != m(B):
        trace.record("l_A'B'", join(m(A), m(B)), "join", tuple(images))
    return trace
