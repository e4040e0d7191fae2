"""Evaluate parsed construction scripts against the plane engine.

Bindings are resolved strictly in order. Every object a statement creates is
recorded in one session trace, so an ``emit`` can draw the whole figure so
far. Failed assertions are collected and evaluation continues; the first
engine error stops the run with a positioned diagnostic.
"""
import json
import logging
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, computed_field

from src.construct import Chart, ConstructionTrace, geo_add, geo_inv, geo_mul, geo_neg
from src.dsl import Assert, Diagnostic, Emit, Let, Operand, PointLit, Pos, Ref, Script
from src.errors import DesarguesError, NoIntersectionError, TypeMismatchError
from src.figures import FigureRenderer
from src.geometry import Line, Point, collinear, is_parallel, join, meet, parallel_through
from src.ratio import RatioContext, construct_ratio2, construct_ratio3
from src.scalar import ModelConfig
from src.transforms import dilatation, project_point, translation

logger = logging.getLogger(__name__)

Value = Union[Point, Line, Chart]


class AssertionResult(BaseModel):
    line: int
    column: int
    statement: str
    passed: bool
    operands: Dict[str, str] = {}


class Artifact(BaseModel):
    name: str
    svg: str
    trace: Dict[str, Any]

    def trace_json(self) -> str:
        return json.dumps(self.trace, indent=2, sort_keys=True)


class RunReport(BaseModel):
    """Outcome of one script run."""

    model: str
    bindings: Dict[str, str] = {}
    assertions: List[AssertionResult] = []
    artifacts: List[Artifact] = []
    error: Optional[Diagnostic] = None

    @computed_field
    @property
    def passed(self) -> bool:
        return self.error is None and all(a.passed for a in self.assertions)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1


def _kind(value: Value) -> str:
    if isinstance(value, Chart):
        return "chart"
    return "point" if isinstance(value, Point) else "line"


def _show(value: Value) -> str:
    if isinstance(value, Chart):
        return f"chart(O={value.O}, I={value.I})"
    return str(value)


class _StatementError(Exception):
    def __init__(self, error: DesarguesError, pos: Pos):
        self.error = error
        self.pos = pos


class Interpreter:
    """
    Runs one Script.

    Responsibilities:
    - Keep the environment of bound points, lines and charts
    - Dispatch each ``let`` to the construction it names, recording the trace
    - Check assertions and collect their operand values
    - Render ``emit`` artifacts through FigureRenderer
    """

    def __init__(self, script: Script, settings: Dict[str, Any] = None):
        self.script = script
        self.settings = settings or {}
        self.model = ModelConfig.parse(script.model.spec)
        self.env: Dict[str, Value] = {}
        self.labels: Dict[str, str] = {}
        self.trace = ConstructionTrace()
        self.renderer = FigureRenderer(self.settings)

    # --- operands -------------------------------------------------------------

    def _value(self, operand: Operand) -> Value:
        if isinstance(operand, Ref):
            return self.env[operand.name]
        return Point.of(self.model, operand.x, operand.y)

    def _label(self, operand: Operand) -> str:
        if isinstance(operand, Ref):
            return self.labels[operand.name]
        value = self._value(operand)
        return self.trace.given(f"({operand.x}, {operand.y})", value)

    def _expect(self, operand: Operand, *kinds: str) -> Value:
        value = self._value(operand)
        if _kind(value) not in kinds:
            name = operand.name if isinstance(operand, Ref) else "literal"
            raise _StatementError(
                TypeMismatchError(f"'{name}' is a {_kind(value)}, expected {' or '.join(kinds)}"),
                operand.pos,
            )
        return value

    def _line(self, operand: Operand) -> Line:
        value = self._expect(operand, "line", "chart")
        return value.line if isinstance(value, Chart) else value

    def _point(self, operand: Operand) -> Point:
        return self._expect(operand, "point")

    def _chart(self, ref: Ref) -> Chart:
        return self._expect(ref, "chart")

    def _scalar(self, text: str):
        return self.model.parse_scalar(text)

    # --- statements -------------------------------------------------------------

    def _bind(self, stmt: Let, value: Value, label: str) -> None:
        self.env[stmt.name] = value
        self.labels[stmt.name] = label
        logger.debug(f"{stmt.name} = {_show(value)}")

    def _record(self, stmt: Let, value: Value, op: str, inputs=(), **extra) -> None:
        self._bind(stmt, value, self.trace.record(stmt.name, value, op, tuple(inputs), **extra))

    def _constructed(self, stmt: Let, value: Point) -> None:
        self._bind(stmt, value, self.trace.relabel_last(stmt.name))

    def let(self, stmt: Let) -> None:
        op, args = stmt.op, stmt.args
        if op == "point":
            self._record(stmt, Point.of(self.model, args[0], args[1]), "given")
        elif op == "join":
            P, Q = self._point(args[0]), self._point(args[1])
            self._record(stmt, join(P, Q), "join", (self._label(args[0]), self._label(args[1])))
        elif op == "meet":
            l1, l2 = self._line(args[0]), self._line(args[1])
            result = meet(l1, l2)
            if result.status != "point":
                raise NoIntersectionError(f"lines are {result.status}, they have no single meet point")
            self._record(stmt, result.point, "meet", (self._label(args[0]), self._label(args[1])))
        elif op == "parallel":
            first = self._expect(args[0], "line", "chart", "point")
            line_arg, point_arg = (args[1], args[0]) if isinstance(first, Point) else (args[0], args[1])
            line, point = self._line(line_arg), self._point(point_arg)
            self._record(stmt, parallel_through(line, point), "parallel",
                         (self._label(line_arg), self._label(point_arg)))
        elif op == "chart":
            chart = Chart.from_points(self._point(args[0]), self._point(args[1]))
            self._record(stmt, chart.line, "join", (self._label(args[0]), self._label(args[1])))
            self.env[stmt.name] = chart
        elif op in ("add", "mul", "neg", "inv"):
            self._chart_op(stmt)
        elif op in ("ratio2", "ratio3"):
            ctx = RatioContext(self._chart(stmt.on))
            points = [self._point(a) for a in args]
            build = construct_ratio2 if op == "ratio2" else construct_ratio3
            value, _ = build(ctx, *points, trace=self.trace)
            self._constructed(stmt, value)
        elif op == "translate":
            X = self._point(args[0])
            m = translation(Point(self._scalar(args[1]), self._scalar(args[2])))
            self._record(stmt, m(X), "map", (self._label(args[0]),), note=str(m), mapping=m)
        elif op == "dilate":
            X, V = self._point(args[0]), self._point(args[1])
            m = dilatation(V, self._scalar(args[2]))
            self._record(stmt, m(X), "map", (self._label(args[0]),), note=str(m), mapping=m)
        elif op == "pproj":
            X = self._point(args[0])
            target, direction = self._line(args[1]), self._line(args[2])
            image = project_point(X, target, direction)
            through = self.trace.record(f"m_{stmt.name}", parallel_through(direction, X), "parallel",
                                        (self._label(args[2]), self._label(args[0])))
            self._record(stmt, image, "meet", (through, self._label(args[1])))

    def _chart_op(self, stmt: Let) -> None:
        chart = self._chart(stmt.on)
        points = [self._point(a) for a in stmt.args]
        build = {"add": geo_add, "mul": geo_mul, "neg": geo_neg, "inv": geo_inv}[stmt.op]
        value, _ = build(chart, *points, trace=self.trace)
        self._constructed(stmt, value)

    def check(self, stmt: Assert) -> AssertionResult:
        pred, args = stmt.pred, stmt.args
        if pred == "eq":
            a, b = (self._value(x) for x in args)
            a = a.line if isinstance(a, Chart) else a
            b = b.line if isinstance(b, Chart) else b
            holds = a == b
        elif pred == "collinear":
            holds = collinear(*(self._point(x) for x in args))
        elif pred == "parallel":
            holds = is_parallel(self._line(args[0]), self._line(args[1]))
        else:
            holds = self._line(args[1]).contains(self._point(args[0]))
        operands = {_operand_text(x): _show(self._value(x)) for x in args}
        text = f"{pred}({', '.join(_operand_text(x) for x in args)})"
        if not holds:
            logger.warning(f"assertion {text} failed at line {stmt.pos.line}: {operands}")
        return AssertionResult(line=stmt.pos.line, column=stmt.pos.column, statement=text,
                               passed=holds, operands=operands)

    def emit(self, stmt: Emit) -> Artifact:
        svg = self.renderer.render(self.trace, self.model, title=stmt.name)
        return Artifact(name=stmt.name, svg=svg, trace=self.trace.to_dict())

    def run(self) -> RunReport:
        report = RunReport(model=self.model.label)
        for stmt in self.script.statements:
            try:
                if isinstance(stmt, Let):
                    self.let(stmt)
                elif isinstance(stmt, Assert):
                    report.assertions.append(self.check(stmt))
                else:
                    report.artifacts.append(self.emit(stmt))
            except _StatementError as e:
                report.error = _diagnostic(e.error, e.pos)
            except DesarguesError as e:
                report.error = _diagnostic(e, stmt.pos)
            if report.error is not None:
                logger.error(f"run stopped: {report.error}")
                break
        report.bindings = {name: _show(value) for name, value in self.env.items()}
        return report


def _operand_text(operand: Operand) -> str:
    if isinstance(operand, PointLit):
        return f"point({operand.x}, {operand.y})"
    return operand.name


def _diagnostic(error: DesarguesError, pos: Pos) -> Diagnostic:
    return Diagnostic(line=pos.line, column=pos.column, message=str(error), code=error.code)


def evaluate(script: Script, settings: Dict[str, Any] = None) -> RunReport:
    """
    Run a parsed script.

    Args:
        script: output of ``src.dsl.parse``
        settings: Settings configuration dictionary (figures section is used by ``emit``)

    Returns:
        RunReport with bindings, assertion results, artifacts and the stopping error, if any
    """
    return Interpreter(script, settings).run()
