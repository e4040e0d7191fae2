"""Line transforms, plane maps, and the ratio invariance/preservation checks.

Line transforms act on the points of one charted line:
    inversion j_P(X) = P * X
    natural translation phi_P(X) = P + X
    natural dilatation delta_n(X) = X + ... + X (n terms)
    mobius2 m(X) = r(X:B), mobius3 mu(X) = r(X,B;C)

Plane maps act on the whole plane:
    translation X -> X + v
    dilatation X -> V + lam*(X - V), lam != 0
    parallel projection X -> (parallel to direction through X) meet target
"""
import logging
from dataclasses import dataclass
from typing import Dict, Literal, Optional, Sequence, Tuple

from src.construct import Chart, chart_coordinate
from src.errors import (
    DegenerateImageError,
    NonComposableError,
    OffLineError,
    ParameterError,
    PreconditionError,
    ProjectionUndefinedError,
)
from src.geometry import Line, Point, is_parallel, join, meet, parallel_through
from src.ratio import RatioContext, RatioMap, ratio2, ratio3
from src.scalar import Scalar, s_inv

logger = logging.getLogger(__name__)

LineKind = Literal["inversion", "natural-translation", "natural-dilatation", "mobius2", "mobius3"]
MapKind = Literal["translation", "dilatation", "parallel-projection", "composite"]

THEOREMS: Dict[str, str] = {
    "inv2.natdil": "ratio of 2 points is invariant under natural dilatation",
    "inv2.inversion": "ratio of 2 points is invariant under inversion with a given point",
    "inv2.mobius": "ratio of 2 points is invariant under the Mobius transform r(.:B)",
    "inv3.nattrans": "ratio of 3 points is invariant under natural translation",
    "inv3.natdil": "ratio of 3 points is invariant under natural dilatation",
    "inv3.inversion": "ratio of 3 points is invariant under inversion with a given point",
    "inv3.mobius": "ratio of 3 points is invariant under the Mobius transform r(.,B;C)",
    "rel.2to3": "r(A:B) equals r(P+A, P+B; P)",
    "pres2.pproj": "parallel projection preserves the ratio of 2 points",
    "pres2.trans": "translation preserves the ratio of 2 points",
    "pres2.dil": "dilatation preserves the ratio of 2 points",
    "pres3.trans": "translation preserves the ratio of 3 points",
    "pres3.pproj": "parallel projection preserves the ratio of 3 points",
    "pres3.dil": "dilatation preserves the ratio of 3 points",
}
THEOREM_IDS: Tuple[str, ...] = tuple(THEOREMS)


# --- Line transforms --------------------------------------------------------

@dataclass(frozen=True)
class LineTransform:
    kind: LineKind
    context: RatioContext
    P: Optional[Point] = None
    n: Optional[int] = None
    B: Optional[Point] = None
    C: Optional[Point] = None

    def __post_init__(self):
        ctx = self.context
        for name in ("P", "B", "C"):
            point = getattr(self, name)
            if point is not None and not ctx.chart.line.contains(point):
                raise ParameterError(f"{self.kind}: parameter {name}={point} is off the chart line")
        if self.kind in ("inversion", "natural-translation") and self.P is None:
            raise ParameterError(f"{self.kind} needs a parameter point P")
        if self.kind == "inversion" and self.P == ctx.O:
            raise ParameterError("inversion needs P != O")
        if self.kind == "mobius2" and (self.B is None or self.B == ctx.O):
            raise ParameterError("mobius2 needs B != O")
        if self.kind == "mobius3" and (self.B is None or self.C is None or self.B == self.C):
            raise ParameterError("mobius3 needs B != C")
        if self.kind == "natural-dilatation":
            if self.n is None or self.n < 1:
                raise ParameterError("natural dilatation needs a positive integer n")
            model = ctx.O.model
            if model.is_finite and self.n % model.modulus == 0:
                raise ParameterError(f"natural dilatation n={self.n} vanishes in {model.label}")

    def __call__(self, X: Point) -> Point:
        return apply_line_transform(self, X)

    def __str__(self) -> str:
        params = {"P": self.P, "n": self.n, "B": self.B, "C": self.C}
        shown = ", ".join(f"{k}={v}" for k, v in params.items() if v is not None)
        return f"{self.kind}({shown})"


def inversion(ctx: RatioContext, P: Point) -> LineTransform:
    return LineTransform("inversion", ctx, P=P)


def natural_translation(ctx: RatioContext, P: Point) -> LineTransform:
    return LineTransform("natural-translation", ctx, P=P)


def natural_dilatation(ctx: RatioContext, n: int) -> LineTransform:
    return LineTransform("natural-dilatation", ctx, n=n)


def mobius2(ctx: RatioContext, B: Point) -> LineTransform:
    return LineTransform("mobius2", ctx, B=B)


def mobius3(ctx: RatioContext, B: Point, C: Point) -> LineTransform:
    return LineTransform("mobius3", ctx, B=B, C=C)


def apply_line_transform(t: LineTransform, X: Point) -> Point:
    """
    Image of a line point, computed with the ruler constructions.

    Raises:
        OffLineError: if X is off the chart line
    """
    ctx = t.context
    ctx.require_on_line(X)
    if t.kind == "inversion":
        return ctx.mul(t.P, X)
    if t.kind == "natural-translation":
        return ctx.add(t.P, X)
    if t.kind == "natural-dilatation":
        total = X
        for _ in range(t.n - 1):
            total = ctx.add(total, X)
        return total
    if t.kind == "mobius2":
        return RatioMap(ctx, t.B)(X)
    return RatioMap(ctx, t.B, t.C)(X)


def check_invariance_2(t: LineTransform, A: Point, B: Point) -> bool:
    """
    True iff r(t(A):t(B)) = r(A:B).

    Raises:
        PreconditionError: if B or t(B) is O
    """
    ctx = t.context
    if B == ctx.O:
        raise PreconditionError("r(A:B) is undefined for B = O")
    tA, tB = t(A), t(B)
    if tB == ctx.O:
        raise PreconditionError(f"r(t(A):t(B)) is undefined: {t} sends B to O")
    return ratio2(ctx, tA, tB) == ratio2(ctx, A, B)


def check_invariance_3(t: LineTransform, A: Point, B: Point, C: Point) -> bool:
    """
    True iff r(t(A),t(B);t(C)) = r(A,B;C).

    Raises:
        PreconditionError: if B = C or t(B) = t(C)
    """
    ctx = t.context
    if B == C:
        raise PreconditionError("r(A,B;C) is undefined for B = C")
    tA, tB, tC = t(A), t(B), t(C)
    if tB == tC:
        raise PreconditionError(f"r(t(A),t(B);t(C)) is undefined: {t} identifies B and C")
    return ratio3(ctx, tA, tB, tC) == ratio3(ctx, A, B, C)


def check_relation_2to3(ctx: RatioContext, P: Point, A: Point, B: Point) -> bool:
    """
    True iff r(A:B) = r(P+A, P+B; P).

    Raises:
        PreconditionError: if B = O
    """
    if B == ctx.O:
        raise PreconditionError("r(A:B) is undefined for B = O")
    shift = natural_translation(ctx, P)
    return ratio2(ctx, A, B) == ratio3(ctx, shift(A), shift(B), P)


# --- Plane maps -------------------------------------------------------------

@dataclass(frozen=True)
class PlaneMap:
    """
    A translation, dilatation, parallel projection or a chain of them.

    ``parts`` of a composite are listed in application order.
    """

    kind: MapKind
    vector: Optional[Point] = None
    center: Optional[Point] = None
    factor: Optional[Scalar] = None
    source: Optional[Line] = None
    target: Optional[Line] = None
    direction: Optional[Line] = None
    parts: Tuple["PlaneMap", ...] = ()

    def __call__(self, X: Point) -> Point:
        return apply_plane_map(self, X)

    @property
    def is_projection(self) -> bool:
        return self.kind == "parallel-projection"

    def affine_form(self) -> Tuple[Scalar, Point]:
        """(lam, c) with the map equal to X -> lam*X + c; translations and dilatations only."""
        if self.kind == "translation":
            return self.vector.x.one_like(), self.vector
        if self.kind == "dilatation":
            return self.factor, self.center - self.center.scaled(self.factor)
        raise NonComposableError(f"{self.kind} has no affine form")

    def __str__(self) -> str:
        if self.kind == "translation":
            return f"translation{self.vector}"
        if self.kind == "dilatation":
            return f"dilatation(center={self.center}, factor={self.factor})"
        if self.kind == "parallel-projection":
            return f"pproj({self.source} -> {self.target} along {self.direction})"
        return " then ".join(str(p) for p in self.parts)


def translation(v: Point) -> PlaneMap:
    return PlaneMap("translation", vector=v)


def dilatation(V: Point, factor: Scalar) -> PlaneMap:
    """
    X -> V + factor*(X - V). factor = 1 is the identity.

    Raises:
        ParameterError: if factor is zero
    """
    if factor.is_zero:
        raise ParameterError("dilatation factor must be non-zero")
    return PlaneMap("dilatation", center=V, factor=factor)


def parallel_projection(source: Line, target: Line, direction: Line) -> PlaneMap:
    """
    Raises:
        ParameterError: if the direction is parallel to the source or the target
    """
    if is_parallel(direction, source) or is_parallel(direction, target):
        raise ParameterError("projection direction must not be parallel to the source or target line")
    return PlaneMap("parallel-projection", source=source, target=target, direction=direction)


def apply_plane_map(m: PlaneMap, X: Point) -> Point:
    """
    Raises:
        OffLineError: if a projection gets a point off its source line
        ProjectionUndefinedError: if the transported line misses the target
    """
    if m.kind == "translation":
        return X + m.vector
    if m.kind == "dilatation":
        return m.center + (X - m.center).scaled(m.factor)
    if m.kind == "parallel-projection":
        if not m.source.contains(X):
            raise OffLineError(f"point {X} is not on the projection source {m.source}")
        return project_point(X, m.target, m.direction)
    for part in m.parts:
        X = apply_plane_map(part, X)
    return X


def project_point(X: Point, target: Line, direction: Line) -> Point:
    """
    Where the parallel to ``direction`` through X meets ``target``.

    Raises:
        ProjectionUndefinedError: if the direction is parallel to the target
    """
    if is_parallel(direction, target):
        raise ProjectionUndefinedError(f"direction {direction} is parallel to the target line {target}")
    return meet(parallel_through(direction, X), target).point


def image_chart(m: PlaneMap, ch: Chart) -> Chart:
    """
    The chart O' = m(O), I' = m(I) on the image line.

    Raises:
        DegenerateImageError: if m collapses O and I
    """
    O2, I2 = m(ch.O), m(ch.I)
    if O2 == I2:
        raise DegenerateImageError(f"{m} sends O and I to the same point {O2}")
    return Chart.from_points(O2, I2)


def check_preservation(m: PlaneMap, ch: Chart, points: Sequence[Point], aux="auto") -> bool:
    """
    True iff m(ratio in ch) equals the ratio of the images in image_chart(m, ch).

    Two points give r(A:B), three give r(A,B;C).

    Raises:
        PreconditionError: if the points are off the chart or the ratio is undefined
    """
    if len(points) not in (2, 3):
        raise PreconditionError("preservation is stated for 2 or 3 points")
    if not all(ch.line.contains(p) for p in points):
        raise PreconditionError("all points must lie on the chart line")
    if m.is_projection and m.source != ch.line:
        raise PreconditionError("projection source must be the chart line")
    ctx = RatioContext(ch, aux)
    image_ctx = RatioContext(image_chart(m, ch), aux)
    images = [m(p) for p in points]
    if len(points) == 2:
        if points[1] == ch.O:
            raise PreconditionError("r(A:B) is undefined for B = O")
        before = ratio2(ctx, *points)
        after = ratio2(image_ctx, *images)
    else:
        if points[1] == points[2]:
            raise PreconditionError("r(A,B;C) is undefined for B = C")
        before = ratio3(ctx, *points)
        after = ratio3(image_ctx, *images)
    preserved = m(before) == after
    if not preserved:
        logger.warning(f"{m} does not preserve the ratio of {[str(p) for p in points]}")
    return preserved


def check_morphism(m: PlaneMap, ch: Chart, A: Point, B: Point) -> bool:
    """True iff m carries the chart's addition and multiplication to those of the image chart."""
    ctx = RatioContext(ch)
    image_ctx = RatioContext(image_chart(m, ch))
    add_ok = m(ctx.add(A, B)) == image_ctx.add(m(A), m(B))
    mul_ok = m(ctx.mul(A, B)) == image_ctx.mul(m(A), m(B))
    return add_ok and mul_ok


def coordinate_automorphism(m: PlaneMap, ch: Chart, X: Point) -> Tuple[Scalar, Scalar]:
    """(x, x') where x is X's coordinate in ch and x' is m(X)'s coordinate in the image chart."""
    return chart_coordinate(ch, X), chart_coordinate(image_chart(m, ch), m(X))


def segment_parallel(m: PlaneMap, P: Point, Q: Point) -> bool:
    """Defining property of dilatations: m(P)m(Q) is parallel to PQ. False if m collapses P and Q."""
    mP, mQ = m(P), m(Q)
    if mP == mQ:
        return False
    return is_parallel(join(mP, mQ), join(P, Q))


def connectors_parallel(m: PlaneMap, A: Point, B: Point) -> bool:
    """Defining property of parallel projections: A m(A) is parallel to B m(B)."""
    mA, mB = m(A), m(B)
    if A == mA or B == mB:
        # a fixed point has no connector; the other must then run along the direction
        moved = [(p, q) for p, q in ((A, mA), (B, mB)) if p != q]
        return all(is_parallel(join(p, q), m.direction) for p, q in moved)
    return is_parallel(join(A, mA), join(B, mB))


def compose_plane_maps(m1: PlaneMap, m2: PlaneMap) -> PlaneMap:
    """
    m1 after m2.

    Translations and dilatations compose in the affine form X -> lam*X + c and
    come back as a translation (lam = 1) or a dilatation with centre
    (1 - lam)^-1 c. Chains involving projections come back as composites.

    Raises:
        NonComposableError: if a projection's source is not the previous image line
    """
    if not (m1.kind in ("translation", "dilatation") and m2.kind in ("translation", "dilatation")):
        first_target = _output_line(m2)
        if m1.is_projection and first_target is not None and first_target != m1.source:
            raise NonComposableError(f"cannot follow {m2} with a projection from {m1.source}")
        return PlaneMap("composite", parts=_flatten(m2) + _flatten(m1))
    lam1, c1 = m1.affine_form()
    lam2, c2 = m2.affine_form()
    lam = lam1 * lam2
    c = c2.scaled(lam1) + c1
    if lam.is_one:
        return translation(c)
    return dilatation(c.scaled(s_inv(lam.one_like() - lam)), lam)


def _output_line(m: PlaneMap) -> Optional[Line]:
    if m.is_projection:
        return m.target
    if m.kind == "composite":
        return _output_line(m.parts[-1])
    return None


def _flatten(m: PlaneMap) -> Tuple[PlaneMap, ...]:
    return m.parts if m.kind == "composite" else (m,)
