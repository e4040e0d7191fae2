"""Ruler-only constructions on a charted line, with full trace recording.

A chart is a line with marked points O (zero) and I (unit). Addition and
multiplication of line points follow the three-step algorithms:

Addition (A + B), auxiliary B1 off the line:
    P1 = (parallel to OI through B1) meet (parallel to OB1 through A)
    C  = (parallel to BB1 through P1) meet OI

Multiplication (A * B), auxiliary B1 off the line:
    P1 = (parallel to IB1 through A) meet OB1
    C  = (parallel to BB1 through P1) meet OI

With left-parametric lines the multiplication lands on coord(A) * coord(B),
A being the left factor. Negation and inversion run the same figures backwards.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from src.errors import AuxOnLineError, CoincidentPointsError, OffLineError, ZeroPointError
from src.geometry import Line, Point, is_parallel, join, left_factor, meet, parallel_through
from src.scalar import Scalar

logger = logging.getLogger(__name__)

AuxChoice = Union[Point, str, int, None]
TraceValue = Union[Point, Line]


@dataclass(frozen=True)
class Chart:
    """A line with zero O and unit I; its points form a skew field."""

    line: Line
    O: Point
    I: Point

    def __post_init__(self):
        if self.O == self.I:
            raise CoincidentPointsError("chart needs O != I")
        if not (self.line.contains(self.O) and self.line.contains(self.I)):
            raise OffLineError("chart points O and I must lie on the chart line")

    @classmethod
    def from_points(cls, O: Point, I: Point) -> "Chart":
        return cls(join(O, I), O, I)

    @classmethod
    def standard(cls, model) -> "Chart":
        """The x-axis with O=(0,0), I=(1,0)."""
        zero, one = model.zero(), model.one()
        return cls.from_points(Point(zero, zero), Point(one, zero))


@dataclass
class TraceStep:
    """One recorded object. ``inputs`` are labels of earlier steps."""

    label: str
    kind: str  # "point" or "line"
    value: TraceValue
    op: str  # given | aux | join | parallel | meet | map
    inputs: Tuple[str, ...] = ()
    note: str = ""
    mapping: Optional[Callable[[Point], Point]] = field(default=None, repr=False, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"label": self.label, "kind": self.kind, "op": self.op, "inputs": list(self.inputs)}
        if isinstance(self.value, Point):
            data["coords"] = [str(self.value.x), str(self.value.y)]
        else:
            data["base"] = [str(self.value.base.x), str(self.value.base.y)]
            data["dir"] = [str(self.value.dir.x), str(self.value.dir.y)]
        if self.note:
            data["note"] = self.note
        return data


class ConstructionTrace:
    """Ordered record of every object a construction creates."""

    def __init__(self):
        self.steps: List[TraceStep] = []
        self._labels: Dict[str, TraceStep] = {}

    def __len__(self) -> int:
        return len(self.steps)

    def __getitem__(self, label: str) -> TraceStep:
        return self._labels[label]

    def __contains__(self, label: str) -> bool:
        return label in self._labels

    def _fresh(self, label: str) -> str:
        if label not in self._labels:
            return label
        n = 2
        while f"{label}_{n}" in self._labels:
            n += 1
        return f"{label}_{n}"

    def find(self, value: TraceValue) -> Optional[str]:
        for step in self.steps:
            if step.value == value:
                return step.label
        return None

    def record(self, label: str, value: TraceValue, op: str, inputs: Tuple[str, ...] = (),
               note: str = "", mapping: Optional[Callable[[Point], Point]] = None) -> str:
        for name in inputs:
            if name not in self._labels:
                raise KeyError(f"trace input '{name}' recorded before use")
        step = TraceStep(
            label=self._fresh(label),
            kind="point" if isinstance(value, Point) else "line",
            value=value,
            op=op,
            inputs=tuple(inputs),
            note=note,
            mapping=mapping,
        )
        self.steps.append(step)
        self._labels[step.label] = step
        return step.label

    def given(self, label: str, value: TraceValue) -> str:
        """Reference an existing object with this value, or record it as given."""
        existing = self.find(value)
        return existing if existing is not None else self.record(label, value, "given")

    def relabel_last(self, label: str) -> str:
        """Rename the most recent step, if the new name is free."""
        step = self.steps[-1]
        if label == step.label or label in self._labels:
            return step.label
        del self._labels[step.label]
        step.label = label
        self._labels[label] = step
        return label

    @property
    def auxiliary(self) -> Dict[str, Point]:
        """The auxiliary point(s) B1 and the constructed P_i points."""
        return {
            s.label: s.value for s in self.steps
            if s.op == "aux" or (s.kind == "point" and s.label.startswith("P"))
        }

    @property
    def result(self) -> Optional[Point]:
        for step in reversed(self.steps):
            if step.kind == "point":
                return step.value
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {"steps": [s.to_dict() for s in self.steps]}


def _recompute(step: TraceStep, values: Dict[str, TraceValue]) -> TraceValue:
    args = [values[name] for name in step.inputs]
    if step.op == "join":
        return join(*args)
    if step.op == "parallel":
        return parallel_through(args[0], args[1])
    if step.op == "meet":
        result = meet(args[0], args[1])
        if result.status != "point":
            raise ValueError(f"step {step.label}: lines are {result.status}")
        return result.point
    if step.op == "map":
        return step.mapping(args[0])
    return step.value


def replay_trace(trace: ConstructionTrace) -> Dict[str, TraceValue]:
    """Recompute every step from the givens; returns label -> recomputed value."""
    values: Dict[str, TraceValue] = {}
    for step in trace.steps:
        values[step.label] = _recompute(step, values)
    return values


def verify_trace(trace: ConstructionTrace) -> List[str]:
    """
    Re-check a trace: ordering, replayed values and every implied incidence.

    Returns:
        List of human-readable failures (empty when the trace is sound)
    """
    failures: List[str] = []
    seen: Dict[str, TraceValue] = {}
    for step in trace.steps:
        missing = [name for name in step.inputs if name not in seen]
        if missing:
            failures.append(f"{step.label}: inputs {missing} not recorded earlier")
            continue
        args = [seen[name] for name in step.inputs]
        try:
            recomputed = _recompute(step, seen)
        except (ValueError, TypeError) as e:
            failures.append(f"{step.label}: replay failed ({e})")
            continue
        if recomputed != step.value:
            failures.append(f"{step.label}: replay gives {recomputed}, recorded {step.value}")
        if step.op == "join" and not all(step.value.contains(p) for p in args):
            failures.append(f"{step.label}: join does not contain its points")
        if step.op == "parallel" and not (is_parallel(step.value, args[0]) and step.value.contains(args[1])):
            failures.append(f"{step.label}: not parallel through its point")
        if step.op == "meet" and not all(line.contains(step.value) for line in args):
            failures.append(f"{step.label}: meet point off one of its lines")
        seen[step.label] = step.value
    return failures


def chart_coordinate(chart: Chart, point: Point) -> Scalar:
    """
    The scalar x with ``point = O + x*(I - O)``.

    Raises:
        OffLineError: if the point is not on the chart line
    """
    x = left_factor(chart.I - chart.O, point - chart.O)
    if x is None:
        raise OffLineError(f"point {point} is not on the chart line {chart.line}")
    return x


def chart_point(chart: Chart, x: Scalar) -> Point:
    return chart.O + (chart.I - chart.O).scaled(x)


def _require_on_line(chart: Chart, *points: Point) -> None:
    for p in points:
        if not chart.line.contains(p):
            raise OffLineError(f"point {p} is not on the chart line {chart.line}")


def resolve_aux(chart: Chart, aux: AuxChoice = "auto") -> Point:
    """
    Pick the auxiliary point B1.

    ``"auto"``/None gives the first of O+(0,1), O+(1,0), O+(1,1) off the line;
    an int seeds a random admissible choice; a Point is used as given.

    Raises:
        AuxOnLineError: if an explicit point lies on the chart line
    """
    if isinstance(aux, Point):
        if chart.line.contains(aux):
            raise AuxOnLineError(f"auxiliary point {aux} lies on the chart line")
        return aux
    model = chart.O.model
    zero, one = model.zero(), model.one()
    if aux is None or aux == "auto":
        for offset in (Point(zero, one), Point(one, zero), Point(one, one)):
            candidate = chart.O + offset
            if not chart.line.contains(candidate):
                return candidate
    rng = random.Random(f"aux:{aux}")
    while True:
        candidate = Point(model.random_scalar(rng), model.random_scalar(rng))
        if not chart.line.contains(candidate):
            return candidate


def _meet_point(trace: ConstructionTrace, label: str, a: str, b: str) -> Tuple[Point, str]:
    result = meet(trace[a].value, trace[b].value)
    if result.status != "point":
        raise AssertionError(f"construction lines {a}, {b} are {result.status}")
    return result.point, trace.record(label, result.point, "meet", (a, b))


def _start(chart: Chart, trace: Optional[ConstructionTrace]) -> Tuple[ConstructionTrace, str, str, str]:
    trace = trace if trace is not None else ConstructionTrace()
    lo = trace.given("O", chart.O)
    li = trace.given("I", chart.I)
    ll = trace.given("l_OI", chart.line)
    return trace, lo, li, ll


def _aux(trace: ConstructionTrace, chart: Chart, aux: AuxChoice) -> str:
    b1 = resolve_aux(chart, aux)
    existing = trace.find(b1)
    return existing if existing is not None else trace.record("B1", b1, "aux")


def geo_add(chart: Chart, A: Point, B: Point, aux: AuxChoice = "auto",
            trace: Optional[ConstructionTrace] = None) -> Tuple[Point, ConstructionTrace]:
    """
    Construct C = A + B on the chart line.

    Raises:
        OffLineError: if A or B is off the line
        AuxOnLineError: if the auxiliary point is on the line
    """
    _require_on_line(chart, A, B)
    trace, lo, li, ll = _start(chart, trace)
    la, lb = trace.given("A", A), trace.given("B", B)
    lb1 = _aux(trace, chart, aux)
    b1 = trace[lb1].value
    # step 2
    l_ob1 = trace.record("l_OB1", join(chart.O, b1), "join", (lo, lb1))
    m1 = trace.record("m_B1", parallel_through(chart.line, b1), "parallel", (ll, lb1))
    m2 = trace.record("m_A", parallel_through(trace[l_ob1].value, A), "parallel", (l_ob1, la))
    p1, lp1 = _meet_point(trace, "P1", m1, m2)
    # step 3
    l_bb1 = trace.record("l_BB1", join(B, b1), "join", (lb, lb1))
    m3 = trace.record("m_P1", parallel_through(trace[l_bb1].value, p1), "parallel", (l_bb1, lp1))
    c, _ = _meet_point(trace, "C", m3, ll)
    logger.debug(f"geo_add: {A} + {B} = {c}")
    return c, trace


def geo_mul(chart: Chart, A: Point, B: Point, aux: AuxChoice = "auto",
            trace: Optional[ConstructionTrace] = None) -> Tuple[Point, ConstructionTrace]:
    """
    Construct C = A * B on the chart line (A is the left factor).

    Raises:
        OffLineError: if A or B is off the line
        AuxOnLineError: if the auxiliary point is on the line
    """
    _require_on_line(chart, A, B)
    trace, lo, li, ll = _start(chart, trace)
    la, lb = trace.given("A", A), trace.given("B", B)
    lb1 = _aux(trace, chart, aux)
    b1 = trace[lb1].value
    # step 2
    l_ob1 = trace.record("l_OB1", join(chart.O, b1), "join", (lo, lb1))
    l_ib1 = trace.record("l_IB1", join(chart.I, b1), "join", (li, lb1))
    m1 = trace.record("m_A", parallel_through(trace[l_ib1].value, A), "parallel", (l_ib1, la))
    p1, lp1 = _meet_point(trace, "P1", m1, l_ob1)
    # step 3
    l_bb1 = trace.record("l_BB1", join(B, b1), "join", (lb, lb1))
    m2 = trace.record("m_P1", parallel_through(trace[l_bb1].value, p1), "parallel", (l_bb1, lp1))
    c, _ = _meet_point(trace, "C", m2, ll)
    logger.debug(f"geo_mul: {A} * {B} = {c}")
    return c, trace


def geo_neg(chart: Chart, A: Point, aux: AuxChoice = "auto",
            trace: Optional[ConstructionTrace] = None) -> Tuple[Point, ConstructionTrace]:
    """
    Construct -A: build P1 as for A + X, then transport OP1 through B1.

    Raises:
        OffLineError: if A is off the line
    """
    _require_on_line(chart, A)
    trace, lo, li, ll = _start(chart, trace)
    la = trace.given("A", A)
    lb1 = _aux(trace, chart, aux)
    b1 = trace[lb1].value
    l_ob1 = trace.record("l_OB1", join(chart.O, b1), "join", (lo, lb1))
    m1 = trace.record("m_B1", parallel_through(chart.line, b1), "parallel", (ll, lb1))
    m2 = trace.record("m_A", parallel_through(trace[l_ob1].value, A), "parallel", (l_ob1, la))
    p1, lp1 = _meet_point(trace, "P1", m1, m2)
    l_op1 = trace.record("l_OP1", join(chart.O, p1), "join", (lo, lp1))
    m3 = trace.record("m_B1'", parallel_through(trace[l_op1].value, b1), "parallel", (l_op1, lb1))
    c, _ = _meet_point(trace, "N", m3, ll)
    return c, trace


def geo_inv(chart: Chart, A: Point, aux: AuxChoice = "auto",
            trace: Optional[ConstructionTrace] = None) -> Tuple[Point, ConstructionTrace]:
    """
    Construct A^-1: build P1 as for A * X, then the parallel to P1 I through B1.

    Raises:
        OffLineError: if A is off the line
        ZeroPointError: if A = O
    """
    _require_on_line(chart, A)
    if A == chart.O:
        raise ZeroPointError("O has no multiplicative inverse on the chart")
    trace, lo, li, ll = _start(chart, trace)
    la = trace.given("A", A)
    lb1 = _aux(trace, chart, aux)
    b1 = trace[lb1].value
    l_ob1 = trace.record("l_OB1", join(chart.O, b1), "join", (lo, lb1))
    l_ib1 = trace.record("l_IB1", join(chart.I, b1), "join", (li, lb1))
    m1 = trace.record("m_A", parallel_through(trace[l_ib1].value, A), "parallel", (l_ib1, la))
    p1, lp1 = _meet_point(trace, "P1", m1, l_ob1)
    l_p1i = trace.record("l_P1I", join(p1, chart.I), "join", (lp1, li))
    m2 = trace.record("m_B1'", parallel_through(trace[l_p1i].value, b1), "parallel", (l_p1i, lb1))
    c, _ = _meet_point(trace, "J", m2, ll)
    return c, trace


def geo_sub(chart: Chart, A: Point, B: Point, aux: AuxChoice = "auto",
            trace: Optional[ConstructionTrace] = None) -> Tuple[Point, ConstructionTrace]:
    """A - B as A + (-B)."""
    neg_b, trace = geo_neg(chart, B, aux, trace)
    return geo_add(chart, A, neg_b, aux, trace)


def geo_div_left(chart: Chart, A: Point, B: Point, aux: AuxChoice = "auto",
                 trace: Optional[ConstructionTrace] = None) -> Tuple[Point, ConstructionTrace]:
    """B^-1 * A."""
    inv_b, trace = geo_inv(chart, B, aux, trace)
    return geo_mul(chart, inv_b, A, aux, trace)
