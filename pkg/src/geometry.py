"""Coordinate model of the Desargues affine plane over a skew field.

Points are pairs of scalars. Lines are ``{base + t*dir : t in K}`` with the
scalar acting on the LEFT. Lines are stored canonically (direction scaled so its
first non-zero coordinate is 1, base reduced modulo the direction) so line
equality is structural equality.
"""
import itertools
import logging
import random
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field
from tenacity import RetryError, retry, retry_if_exception_type, stop_after_attempt

from src.errors import (
    CoincidentPointsError,
    DegenerateLineError,
    DegenerateSampleError,
    GeneratorExhaustedError,
    MalformedConfigError,
    ModelMismatchError,
    ScopeTooLargeError,
)
from src.scalar import ModelConfig, Scalar, s_inv, s_mul

logger = logging.getLogger(__name__)

DEFAULT_SAMPLE_RETRIES = 64
EXHAUSTIVE_LIMIT = 13


@dataclass(frozen=True)
class Point:
    """A point (or, when used as a direction, a vector) of the coordinate plane."""

    x: Scalar
    y: Scalar

    def __post_init__(self):
        if self.x.kind != self.y.kind or self.x.p != self.y.p:
            raise ModelMismatchError("point coordinates come from different models")

    @classmethod
    def of(cls, model: ModelConfig, x, y) -> "Point":
        """Convenience constructor from ints or literal strings."""
        def _coerce(v):
            if isinstance(v, Scalar):
                return v
            if isinstance(v, int):
                return model.from_int(v)
            return model.parse_scalar(str(v))
        return cls(_coerce(x), _coerce(y))

    @property
    def model(self) -> ModelConfig:
        return self.x.model

    @property
    def is_zero(self) -> bool:
        return self.x.is_zero and self.y.is_zero

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def scaled(self, factor: Scalar) -> "Point":
        """Left scalar action ``factor * (x, y)``."""
        return Point(s_mul(factor, self.x), s_mul(factor, self.y))

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


def left_factor(vector: Point, target: Point) -> Optional[Scalar]:
    """Return ``lam`` with ``target == lam * vector``, or None. ``vector`` must be non-zero."""
    if not vector.x.is_zero:
        lam = s_mul(target.x, s_inv(vector.x))
        return lam if s_mul(lam, vector.y) == target.y else None
    if not target.x.is_zero:
        return None
    return s_mul(target.y, s_inv(vector.y))


@dataclass(frozen=True)
class Line:
    """A line ``{base + t*dir}``, canonicalized on construction."""

    base: Point
    dir: Point

    def __post_init__(self):
        if self.dir.is_zero:
            raise DegenerateLineError("line direction must be non-zero")
        d, b = self.dir, self.base
        if not d.x.is_zero:
            slope = s_mul(s_inv(d.x), d.y)
            one = d.x.one_like()
            canon_dir = Point(one, slope)
            canon_base = Point(one - one, b.y - s_mul(b.x, slope))
        else:
            zero = d.x.zero_like()
            canon_dir = Point(zero, zero.one_like())
            canon_base = Point(b.x, zero)
        object.__setattr__(self, "dir", canon_dir)
        object.__setattr__(self, "base", canon_base)

    @property
    def model(self) -> ModelConfig:
        return self.base.model

    def point_at(self, t: Scalar) -> Point:
        return self.base + self.dir.scaled(t)

    def contains(self, point: Point) -> bool:
        return left_factor(self.dir, point - self.base) is not None

    def __str__(self) -> str:
        return f"[{self.base} + t{self.dir}]"


@dataclass(frozen=True)
class MeetResult:
    status: Literal["point", "parallel", "identical"]
    point: Optional[Point] = None


def join(p: Point, q: Point) -> Line:
    """
    The unique line through two points.

    Raises:
        CoincidentPointsError: if p == q
    """
    if p == q:
        raise CoincidentPointsError(f"join needs two distinct points, got {p} twice")
    return Line(p, q - p)


def is_parallel(l1: Line, l2: Line) -> bool:
    # canonical directions are equal exactly when one is a left multiple of the other
    return l1.dir == l2.dir


def parallel_through(line: Line, point: Point) -> Line:
    return Line(point, line.dir)


def on_line(point: Point, line: Line) -> bool:
    return line.contains(point)


def meet(l1: Line, l2: Line) -> MeetResult:
    """
    Intersect two lines by explicit non-commutative elimination.

    Solves ``t*d - s*e = q - p`` for the unknowns ``t, s`` (both on the left of
    their coefficients), pivoting on the first invertible coordinate of ``d``.
    The resulting point is re-checked against both lines.
    """
    if is_parallel(l1, l2):
        return MeetResult("identical" if l1 == l2 else "parallel")
    p, d = l1.base, l1.dir
    q, e = l2.base, l2.dir
    r = q - p
    if not d.x.is_zero:
        ratio = s_mul(s_inv(d.x), d.y)
        coefficient = s_mul(e.x, ratio) - e.y
        s = s_mul(r.y - s_mul(r.x, ratio), s_inv(coefficient))
    else:
        s = -s_mul(r.x, s_inv(e.x))
    point = q + e.scaled(s)
    if not (l1.contains(point) and l2.contains(point)):
        raise AssertionError(f"meet substitution check failed for {l1} and {l2}")
    return MeetResult("point", point)


def collinear(a: Point, b: Point, c: Point) -> bool:
    if a == b or a == c or b == c:
        return True
    return join(a, b).contains(c)


# --- Axiom checks ---------------------------------------------------------

class Certificate(BaseModel):
    """Counterexample to an axiom clause."""

    model: str
    clause: str
    points: List[str] = Field(default_factory=list)
    lines: List[str] = Field(default_factory=list)

    def to_text(self) -> str:
        parts = [f"model={self.model}", f"clause={self.clause}"]
        if self.points:
            parts.append("points=" + "; ".join(self.points))
        if self.lines:
            parts.append("lines=" + "; ".join(self.lines))
        return " | ".join(parts)


class AxiomReport(BaseModel):
    model: str
    scope: str
    points: Optional[int] = None
    lines: Optional[int] = None
    checks: int = 0
    violations: List[Certificate] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def enumerate_points(model: ModelConfig) -> List[Point]:
    elements = list(model.elements())
    return [Point(x, y) for x in elements for y in elements]


def enumerate_lines(model: ModelConfig) -> Dict[Line, frozenset]:
    """Every line of a finite plane with its point set."""
    elements = list(model.elements())
    zero, one = model.zero(), model.one()
    lines: Dict[Line, frozenset] = {}
    directions = [Point(one, m) for m in elements] + [Point(zero, one)]
    for point in enumerate_points(model):
        for direction in directions:
            line = Line(point, direction)
            if line not in lines:
                lines[line] = frozenset(line.point_at(t) for t in elements)
    return lines


def check_axioms(
    model: ModelConfig,
    scope: Literal["exhaustive", "sampled"] = "sampled",
    n: int = 500,
    seed: int = 0,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> AxiomReport:
    """
    Check affine plane axioms 1-3 (unique join, Playfair, three non-collinear points).

    Args:
        model: scalar model of the plane
        scope: "exhaustive" (finite models only) or "sampled"
        n: number of samples in sampled scope
        seed: sampling seed
        exhaustive_limit: largest prime accepted for exhaustive scope

    Returns:
        AxiomReport with zero violations or counterexample certificates

    Raises:
        ScopeTooLargeError: exhaustive scope on an infinite or too-large model
    """
    if scope == "exhaustive":
        if model.kind != "gf" or model.modulus > exhaustive_limit:
            raise ScopeTooLargeError(
                f"exhaustive axiom check needs gf(p) with p <= {exhaustive_limit}, got {model.label}"
            )
        return _check_axioms_exhaustive(model)
    return _check_axioms_sampled(model, n, seed)


def _check_axioms_exhaustive(model: ModelConfig) -> AxiomReport:
    points = enumerate_points(model)
    lines = enumerate_lines(model)
    report = AxiomReport(model=model.label, scope="exhaustive", points=len(points), lines=len(lines))
    label = model.label

    # axiom 1: every pair of distinct points lies on exactly one line
    pair_count: Dict[frozenset, int] = {}
    for members in lines.values():
        for pair in itertools.combinations(members, 2):
            key = frozenset(pair)
            pair_count[key] = pair_count.get(key, 0) + 1
    expected_pairs = len(points) * (len(points) - 1) // 2
    report.checks += expected_pairs
    if len(pair_count) != expected_pairs:
        report.violations.append(Certificate(model=label, clause="1: some pair lies on no line"))
    for pair, count in pair_count.items():
        if count != 1:
            report.violations.append(
                Certificate(model=label, clause=f"1: pair on {count} lines", points=sorted(str(p) for p in pair))
            )

    # axiom 2: exactly one line through P missing l, for P off l
    by_point: Dict[Point, List[Line]] = {p: [] for p in points}
    for line, members in lines.items():
        for p in members:
            by_point[p].append(line)
    for line, members in lines.items():
        for p in points:
            if p in members:
                continue
            report.checks += 1
            missing = [m for m in by_point[p] if not (lines[m] & members)]
            if len(missing) != 1:
                report.violations.append(
                    Certificate(
                        model=label,
                        clause=f"2: {len(missing)} lines through P miss l",
                        points=[str(p)],
                        lines=[str(line)],
                    )
                )
            elif missing[0] != parallel_through(line, p):
                report.violations.append(
                    Certificate(model=label, clause="2: parallel_through disagrees", points=[str(p)], lines=[str(line)])
                )

    report.checks += 1
    if not _has_triangle(model):
        report.violations.append(Certificate(model=label, clause="3: no three non-collinear points"))
    logger.info(f"Exhaustive axiom check {label}: {len(points)} points, {len(lines)} lines, "
                f"{len(report.violations)} violations")
    return report


def _has_triangle(model: ModelConfig) -> bool:
    zero, one = model.zero(), model.one()
    return not collinear(Point(zero, zero), Point(one, zero), Point(zero, one))


def random_point(model: ModelConfig, rng: random.Random, **bounds) -> Point:
    return Point(model.random_scalar(rng, **bounds), model.random_scalar(rng, **bounds))


def random_direction(model: ModelConfig, rng: random.Random, **bounds) -> Point:
    while True:
        d = random_point(model, rng, **bounds)
        if not d.is_zero:
            return d


def _check_axioms_sampled(model: ModelConfig, n: int, seed: int) -> AxiomReport:
    rng = random.Random(seed)
    report = AxiomReport(model=model.label, scope=f"sampled(n={n}, seed={seed})")
    label = model.label
    for _ in range(n):
        p, q = random_point(model, rng), random_point(model, rng)
        if p == q:
            continue
        report.checks += 1
        line = join(p, q)
        other = line.point_at(model.random_scalar(rng))
        if not (line.contains(p) and line.contains(q)) or line != join(q, p):
            report.violations.append(Certificate(model=label, clause="1: join incidence", points=[str(p), str(q)]))
        if other != p and join(p, other) != line:
            report.violations.append(
                Certificate(model=label, clause="1: join not unique", points=[str(p), str(q), str(other)])
            )
        r = random_point(model, rng)
        if line.contains(r):
            continue
        report.checks += 1
        par = parallel_through(line, r)
        if not par.contains(r) or meet(par, line).status != "parallel":
            report.violations.append(
                Certificate(model=label, clause="2: parallel through P meets l", points=[str(r)], lines=[str(line)])
            )
        s = random_point(model, rng)
        if s != r:
            through = join(r, s)
            if through != par and meet(through, line).status != "point":
                report.violations.append(
                    Certificate(model=label, clause="2: second line through P misses l",
                                points=[str(r), str(s)], lines=[str(line)])
                )
    report.checks += 1
    if not _has_triangle(model):
        report.violations.append(Certificate(model=label, clause="3: no three non-collinear points"))
    return report


# --- Desargues configurations ---------------------------------------------

@dataclass(frozen=True)
class DesarguesConfig:
    """Two triangles ABC and A'B'C' in Desargues position (primed names end in ``p``)."""

    A: Point
    B: Point
    C: Point
    Ap: Point
    Bp: Point
    Cp: Point
    axis_kind: Literal["parallel", "concurrent"]
    center: Optional[Point] = None

    def validate(self) -> None:
        """
        Check the hypothesis bundle of Desargues' axiom.

        Raises:
            MalformedConfigError: if any hypothesis fails
        """
        def fail(reason: str):
            raise MalformedConfigError(f"malformed Desargues configuration: {reason}")

        if self.A == self.C or self.Ap == self.Cp:
            fail("A = C or A' = C'")
        pairs = ((self.A, self.Ap), (self.B, self.Bp), (self.C, self.Cp))
        if any(x == y for x, y in pairs) or self.A == self.B or self.B == self.C or self.Ap == self.Bp or self.Bp == self.Cp:
            fail("coincident vertices")
        connectors = [join(x, y) for x, y in pairs]
        if len(set(connectors)) != 3:
            fail("connecting lines are not pairwise distinct")
        if self.axis_kind == "parallel":
            if not (is_parallel(connectors[0], connectors[1]) and is_parallel(connectors[1], connectors[2])):
                fail("connecting lines are not parallel")
        else:
            if self.center is None or not all(c.contains(self.center) for c in connectors):
                fail("connecting lines are not concurrent in the centre")
        ab, apbp = join(self.A, self.B), join(self.Ap, self.Bp)
        bc, bpcp = join(self.B, self.C), join(self.Bp, self.Cp)
        if not is_parallel(ab, apbp) or ab == apbp:
            fail("AB and A'B' are not distinct parallels")
        if not is_parallel(bc, bpcp) or bc == bpcp:
            fail("BC and B'C' are not distinct parallels")


def check_desargues(cfg: DesarguesConfig) -> bool:
    """Conclusion of Desargues' axiom: AC is parallel to A'C'."""
    cfg.validate()
    return is_parallel(join(cfg.A, cfg.C), join(cfg.Ap, cfg.Cp))


def _meet_point(l1: Line, l2: Line) -> Point:
    result = meet(l1, l2)
    if result.status != "point":
        raise DegenerateSampleError(f"lines {result.status}")
    return result.point


def _draw_config(model: ModelConfig, axis_kind: str, rng: random.Random) -> DesarguesConfig:
    a, b, c = (random_point(model, rng) for _ in range(3))
    if collinear(a, b, c):
        raise DegenerateSampleError("collinear triangle")
    center = None
    if axis_kind == "parallel":
        d = random_direction(model, rng)
        ap = a + d.scaled(model.random_nonzero(rng))
        ray_b = Line(b, d)
        ray_c = Line(c, d)
    else:
        center = random_point(model, rng)
        if center in (a, b, c):
            raise DegenerateSampleError("centre on a vertex")
        ap = center + (a - center).scaled(model.random_nonzero(rng))
        ray_b = join(center, b)
        ray_c = join(center, c)
    if ap == a:
        raise DegenerateSampleError("A' = A")
    bp = _meet_point(ray_b, parallel_through(join(a, b), ap))
    cp = _meet_point(ray_c, parallel_through(join(b, c), bp))
    cfg = DesarguesConfig(a, b, c, ap, bp, cp, axis_kind, center)
    try:
        cfg.validate()
    except MalformedConfigError as e:
        raise DegenerateSampleError(str(e)) from e
    return cfg


def sample_desargues_config(
    model: ModelConfig,
    axis_kind: Literal["parallel", "concurrent"],
    seed: int,
    retries: int = DEFAULT_SAMPLE_RETRIES,
) -> DesarguesConfig:
    """
    Draw a random configuration satisfying every hypothesis of Desargues' axiom.

    Raises:
        GeneratorExhaustedError: after ``retries`` degenerate draws
    """
    rng = random.Random(f"desargues:{model.label}:{axis_kind}:{seed}")

    @retry(
        stop=stop_after_attempt(retries),
        retry=retry_if_exception_type(DegenerateSampleError),
    )
    def _attempt() -> DesarguesConfig:
        return _draw_config(model, axis_kind, rng)

    try:
        return _attempt()
    except RetryError as e:
        raise GeneratorExhaustedError(
            f"no valid {axis_kind} Desargues configuration in {model.label} after {retries} draws"
        ) from e
