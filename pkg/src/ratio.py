"""Ratios of two and three points on a charted line.

r(A:B)   = B^-1 * A
r(A,B;C) = (B - C)^-1 * (A - C)

Both are built from the ruler constructions in ``src.construct``; scalar
arithmetic is only used by the tests as an oracle.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from src.construct import (
    AuxChoice,
    Chart,
    ConstructionTrace,
    chart_coordinate,
    chart_point,
    geo_add,
    geo_inv,
    geo_mul,
    geo_sub,
)
from src.errors import CoincidentPointsError, OffLineError, ZeroDenominatorError
from src.geometry import Point

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RatioContext:
    chart: Chart
    aux: AuxChoice = "auto"

    @property
    def O(self) -> Point:
        return self.chart.O

    @property
    def I(self) -> Point:
        return self.chart.I

    def require_on_line(self, *points: Point) -> None:
        for p in points:
            if not self.chart.line.contains(p):
                raise OffLineError(f"point {p} is not on the chart line {self.chart.line}")

    def add(self, A: Point, B: Point) -> Point:
        return geo_add(self.chart, A, B, self.aux)[0]

    def mul(self, A: Point, B: Point) -> Point:
        return geo_mul(self.chart, A, B, self.aux)[0]

    def inv(self, A: Point) -> Point:
        return geo_inv(self.chart, A, self.aux)[0]

    def sub(self, A: Point, B: Point) -> Point:
        return geo_sub(self.chart, A, B, self.aux)[0]


def construct_ratio2(ctx: RatioContext, A: Point, B: Point,
                     trace: Optional[ConstructionTrace] = None) -> Tuple[Point, ConstructionTrace]:
    """
    Build r(A:B) and return it with the full construction trace.

    Raises:
        ZeroDenominatorError: if B = O
        OffLineError: if A or B is off the chart line
    """
    ctx.require_on_line(A, B)
    if B == ctx.O:
        raise ZeroDenominatorError("r(A:B) needs B != O")
    inv_b, trace = geo_inv(ctx.chart, B, ctx.aux, trace)
    trace.relabel_last("B_inv")
    result, trace = geo_mul(ctx.chart, inv_b, A, ctx.aux, trace)
    trace.relabel_last("R")
    return result, trace


def construct_ratio3(ctx: RatioContext, A: Point, B: Point, C: Point,
                     trace: Optional[ConstructionTrace] = None) -> Tuple[Point, ConstructionTrace]:
    """
    Build r(A,B;C) and return it with the full construction trace.

    Raises:
        CoincidentPointsError: if B = C
        OffLineError: if any point is off the chart line
    """
    ctx.require_on_line(A, B, C)
    if B == C:
        raise CoincidentPointsError("r(A,B;C) needs B != C")
    num, trace = geo_sub(ctx.chart, A, C, ctx.aux, trace)
    trace.relabel_last("A_C")
    den, trace = geo_sub(ctx.chart, B, C, ctx.aux, trace)
    trace.relabel_last("B_C")
    inv_den, trace = geo_inv(ctx.chart, den, ctx.aux, trace)
    trace.relabel_last("B_C_inv")
    result, trace = geo_mul(ctx.chart, inv_den, num, ctx.aux, trace)
    trace.relabel_last("R")
    return result, trace


def ratio2(ctx: RatioContext, A: Point, B: Point) -> Point:
    """r(A:B) = B^-1 A. A = O gives O, A = B gives I."""
    return construct_ratio2(ctx, A, B)[0]


def ratio3(ctx: RatioContext, A: Point, B: Point, C: Point) -> Point:
    """r(A,B;C) = (B-C)^-1 (A-C). A = C gives O, A = B gives I."""
    return construct_ratio3(ctx, A, B, C)[0]


def ratio2_solve(ctx: RatioContext, R: Point, B: Point) -> Point:
    """
    The unique A with r(A:B) = R, namely B * R.

    Raises:
        ZeroDenominatorError: if B = O
    """
    ctx.require_on_line(R, B)
    if B == ctx.O:
        raise ZeroDenominatorError("r(A:B) needs B != O")
    return ctx.mul(B, R)


def ratio3_solve(ctx: RatioContext, R: Point, B: Point, C: Point) -> Point:
    """The unique A with r(A,B;C) = R, namely C + (B - C) * R."""
    ctx.require_on_line(R, B, C)
    if B == C:
        raise CoincidentPointsError("r(A,B;C) needs B != C")
    return ctx.add(C, ctx.mul(ctx.sub(B, C), R))


class RatioMap:
    """
    X -> r(X:B) or X -> r(X,B;C) as a callable bijection of the chart line.

    ``inverse`` is the two-sided inverse; ``image`` lists images of all line
    points on finite models.
    """

    def __init__(self, ctx: RatioContext, B: Point, C: Optional[Point] = None):
        ctx.require_on_line(B, *(() if C is None else (C,)))
        if C is None and B == ctx.O:
            raise ZeroDenominatorError("ratio map r(.:B) needs B != O")
        if C is not None and B == C:
            raise CoincidentPointsError("ratio map r(.,B;C) needs B != C")
        self.ctx = ctx
        self.B = B
        self.C = C

    @property
    def arity(self) -> int:
        return 2 if self.C is None else 3

    def __call__(self, X: Point) -> Point:
        if self.C is None:
            return ratio2(self.ctx, X, self.B)
        return ratio3(self.ctx, X, self.B, self.C)

    def inverse(self, R: Point) -> Point:
        if self.C is None:
            return ratio2_solve(self.ctx, R, self.B)
        return ratio3_solve(self.ctx, R, self.B, self.C)

    def domain(self) -> List[Point]:
        """All points of the chart line (finite models only)."""
        return [chart_point(self.ctx.chart, x) for x in self.ctx.O.model.elements()]

    def image(self) -> List[Point]:
        return [self(X) for X in self.domain()]

    def is_bijective(self) -> bool:
        """Exhaustive permutation check with the inverse as witness."""
        points = self.domain()
        images = [self(X) for X in points]
        if len(set(images)) != len(points) or set(images) != set(points):
            return False
        return all(self.inverse(Y) == X for X, Y in zip(points, images))

    def coordinate_form(self) -> Callable:
        """The map expressed on chart coordinates, for reporting."""
        chart = self.ctx.chart

        def on_coords(x):
            return chart_coordinate(chart, self(chart_point(chart, x)))

        return on_coords


def ratio_map2(ctx: RatioContext, B: Point) -> RatioMap:
    return RatioMap(ctx, B)


def ratio_map3(ctx: RatioContext, B: Point, C: Point) -> RatioMap:
    return RatioMap(ctx, B, C)
