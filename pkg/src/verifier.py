"""Verifier class: seeded and exhaustive runs of the theorem suites."""
import itertools
import logging
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt

from src.construct import Chart, chart_coordinate, chart_point, geo_add, geo_mul, geo_neg
from src.errors import (
    DegenerateSampleError,
    DesarguesError,
    GeneratorExhaustedError,
    PreconditionError,
    ScalarSyntaxError,
    ScopeTooLargeError,
)
from src.geometry import (
    Line,
    Point,
    check_axioms,
    check_desargues,
    is_parallel,
    parallel_through,
    random_direction,
    random_point,
    sample_desargues_config,
)
from src.ratio import RatioContext, ratio2, ratio3
from src.scalar import ModelConfig
from src.schemas import CHECK_IDS, TheoremResult, VerificationReport
from src.transforms import (
    THEOREMS,
    check_invariance_2,
    check_invariance_3,
    check_morphism,
    check_preservation,
    check_relation_2to3,
    compose_plane_maps,
    connectors_parallel,
    coordinate_automorphism,
    dilatation,
    inversion,
    mobius2,
    mobius3,
    natural_dilatation,
    natural_translation,
    parallel_projection,
    segment_parallel,
    translation,
)

logger = logging.getLogger(__name__)

Sample = Dict[str, Any]
# variable kinds: pt (line point), nz (non-zero line point), n (natural count),
# sc (non-zero scalar), vec (plane vector), plane (plane point), off (point off the line)
LINE_KINDS = ("pt", "nz", "n")


def _never(model: ModelConfig) -> bool:
    return False


def _always(model: ModelConfig) -> bool:
    return True


def _noncommutative(model: ModelConfig) -> bool:
    return not model.is_commutative


def _has_counterexamples(model: ModelConfig) -> bool:
    # gf(2) is too small for the negative controls to fire
    return not (model.kind == "gf" and model.modulus == 2)


@dataclass(frozen=True)
class Check:
    """One case of a suite: variables to draw, a predicate, and its expectation."""

    id: str
    case: str
    variables: Tuple[Tuple[str, str], ...]
    holds: Callable[[RatioContext, Sample], bool]
    require: Optional[Callable[[RatioContext, Sample], bool]] = None
    extra: Optional[Callable[[ModelConfig, random.Random, RatioContext, Sample, Dict[str, int]], None]] = None
    expect_failure: Callable[[ModelConfig], bool] = _never
    applies: Callable[[ModelConfig], bool] = _always
    single: bool = False
    optional_extra: bool = False  # exhaustive runs may skip ``extra``
    # known counterexamples ("A=1 B=i"), coordinates on the standard chart;
    # tried before the random trials when the case is expected to fail
    witnesses: Tuple[str, ...] = ()

    @property
    def enumerable(self) -> bool:
        return (self.extra is None or self.optional_extra) and all(kind in LINE_KINDS for _, kind in self.variables)


def _vars(spec: str) -> Tuple[Tuple[str, str], ...]:
    """'A:pt B:nz n:n' -> (('A', 'pt'), ('B', 'nz'), ('n', 'n'))."""
    return tuple(tuple(item.split(":")) for item in spec.split())


def _b_ne_c(ctx: RatioContext, s: Sample) -> bool:
    return s["B"] != s["C"]


def _coord(ctx: RatioContext, X: Point):
    return chart_coordinate(ctx.chart, X)


def _neg(ctx: RatioContext, X: Point) -> Point:
    return geo_neg(ctx.chart, X, ctx.aux)[0]


# --- projection draws -----------------------------------------------------

def _off_line_point(model: ModelConfig, rng: random.Random, line: Line, bounds: Dict[str, int]) -> Point:
    point = random_point(model, rng, **bounds)
    if line.contains(point):
        raise DegenerateSampleError("point on the line")
    return point


def _transversal(model: ModelConfig, rng: random.Random, lines: Sequence[Line], bounds: Dict[str, int]) -> Line:
    d = random_direction(model, rng, **bounds)
    candidate = Line(random_point(model, rng, **bounds), d)
    if any(is_parallel(candidate, line) for line in lines):
        raise DegenerateSampleError("direction parallel to a projection line")
    return candidate


def _projection_extra(kind: str):
    def draw(model, rng, ctx, s, bounds):
        source = ctx.chart.line
        if kind == "parallel":
            target = parallel_through(source, _off_line_point(model, rng, source, bounds))
        else:
            target = _transversal(model, rng, [source], bounds)
        direction = _transversal(model, rng, [source, target], bounds)
        s["map"] = parallel_projection(source, target, direction)
    return draw


def _projection_chain_extra(model, rng, ctx, s, bounds):
    source = ctx.chart.line
    middle = _transversal(model, rng, [source], bounds)
    last = _transversal(model, rng, [middle], bounds)
    d1 = _transversal(model, rng, [source, middle], bounds)
    d2 = _transversal(model, rng, [middle, last], bounds)
    s["first"] = parallel_projection(source, middle, d1)
    s["second"] = parallel_projection(middle, last, d2)


def _twist_extra(model, rng, ctx, s, bounds):
    # make r(A:B) = r(B:A) cases frequent: B := A or B := -A
    twist = rng.randrange(3)
    if twist == 1:
        s["B"] = s["A"]
    elif twist == 2:
        s["B"] = chart_point(ctx.chart, -_coord(ctx, s["A"]))


# --- suite registry ---------------------------------------------------------

def _dil_center(ctx: RatioContext, s: Sample) -> Point:
    return s.get("V", ctx.O)


def _units_witness(ctx: RatioContext, s: Sample) -> bool:
    model = ctx.O.model
    i, j, k = model.quaternion(b=1), model.quaternion(c=1), model.quaternion(d=1)
    Pi, Pj = chart_point(ctx.chart, i), chart_point(ctx.chart, j)
    ij = _coord(ctx, ctx.mul(Pi, Pj))
    ji = _coord(ctx, ctx.mul(Pj, Pi))
    return ij == k and ji == -k


def build_registry() -> Dict[str, List[Check]]:
    checks: List[Check] = []
    add = checks.append

    # ratio invariance under line transforms
    add(Check("inv2.natdil", "default", _vars("A:pt B:nz n:n"),
              lambda c, s: check_invariance_2(natural_dilatation(c, s["n"]), s["A"], s["B"])))
    add(Check("inv2.inversion", "default", _vars("P:nz A:pt B:nz"),
              lambda c, s: check_invariance_2(inversion(c, s["P"]), s["A"], s["B"])))
    add(Check("inv2.mobius", "default", _vars("M:nz A:pt B:nz"),
              lambda c, s: check_invariance_2(mobius2(c, s["M"]), s["A"], s["B"])))
    add(Check("inv3.nattrans", "default", _vars("P:pt A:pt B:pt C:pt"),
              lambda c, s: check_invariance_3(natural_translation(c, s["P"]), s["A"], s["B"], s["C"]),
              require=_b_ne_c))
    add(Check("inv3.natdil", "default", _vars("n:n A:pt B:pt C:pt"),
              lambda c, s: check_invariance_3(natural_dilatation(c, s["n"]), s["A"], s["B"], s["C"]),
              require=_b_ne_c))
    add(Check("inv3.inversion", "default", _vars("P:nz A:pt B:pt C:pt"),
              lambda c, s: check_invariance_3(inversion(c, s["P"]), s["A"], s["B"], s["C"]),
              require=_b_ne_c))
    add(Check("inv3.mobius", "default", _vars("M:pt N:pt A:pt B:pt C:pt"),
              lambda c, s: check_invariance_3(mobius3(c, s["M"], s["N"]), s["A"], s["B"], s["C"]),
              require=lambda c, s: s["M"] != s["N"] and s["B"] != s["C"]))
    add(Check("rel.2to3", "default", _vars("P:pt A:pt B:nz"),
              lambda c, s: check_relation_2to3(c, s["P"], s["A"], s["B"])))

    # ratio preservation under plane maps
    for arity, names in ((2, "A:pt B:nz"), (3, "A:pt B:pt C:pt")):
        req = _b_ne_c if arity == 3 else None

        def pts(s, arity=arity):
            return [s["A"], s["B"]] + ([s["C"]] if arity == 3 else [])

        add(Check(f"pres{arity}.trans", "default", _vars(f"v:vec {names}"),
                  lambda c, s, pts=pts: check_preservation(translation(s["v"]), c.chart, pts(s), c.aux),
                  require=req))
        for case, center in (("center-origin", ""), ("center-on-line", "V:nz "), ("center-off-line", "V:off ")):
            add(Check(f"pres{arity}.dil", case, _vars(f"{center}lam:sc {names}"),
                      lambda c, s, pts=pts: check_preservation(
                          dilatation(_dil_center(c, s), s["lam"]), c.chart, pts(s), c.aux),
                      require=req))
        for case in ("intersecting", "parallel"):
            add(Check(f"pres{arity}.pproj", case, _vars(names),
                      lambda c, s, pts=pts: check_preservation(s["map"], c.chart, pts(s), c.aux),
                      require=req, extra=_projection_extra(case)))

    # constructed operations against the scalar oracle and the skew-field laws
    add(Check("field.oracle", "add", _vars("A:pt B:pt"),
              lambda c, s: _coord(c, c.add(s["A"], s["B"])) == _coord(c, s["A"]) + _coord(c, s["B"])))
    add(Check("field.oracle", "mul", _vars("A:pt B:pt"),
              lambda c, s: _coord(c, c.mul(s["A"], s["B"])) == _coord(c, s["A"]) * _coord(c, s["B"])))
    add(Check("field.axioms", "add-assoc", _vars("A:pt B:pt C:pt"),
              lambda c, s: c.add(c.add(s["A"], s["B"]), s["C"]) == c.add(s["A"], c.add(s["B"], s["C"]))))
    add(Check("field.axioms", "add-commutes", _vars("A:pt B:pt"),
              lambda c, s: c.add(s["A"], s["B"]) == c.add(s["B"], s["A"])))
    add(Check("field.axioms", "mul-assoc", _vars("A:pt B:pt C:pt"),
              lambda c, s: c.mul(c.mul(s["A"], s["B"]), s["C"]) == c.mul(s["A"], c.mul(s["B"], s["C"]))))
    add(Check("field.axioms", "left-distrib", _vars("A:pt B:pt C:pt"),
              lambda c, s: c.mul(s["A"], c.add(s["B"], s["C"]))
              == c.add(c.mul(s["A"], s["B"]), c.mul(s["A"], s["C"]))))
    add(Check("field.axioms", "right-distrib", _vars("A:pt B:pt C:pt"),
              lambda c, s: c.mul(c.add(s["A"], s["B"]), s["C"])
              == c.add(c.mul(s["A"], s["C"]), c.mul(s["B"], s["C"]))))
    add(Check("field.axioms", "identities", _vars("A:pt"),
              lambda c, s: c.add(c.O, s["A"]) == s["A"] == c.add(s["A"], c.O)
              and c.mul(c.I, s["A"]) == s["A"] == c.mul(s["A"], c.I)))
    add(Check("field.axioms", "add-inverse", _vars("A:pt"),
              lambda c, s: c.add(s["A"], _neg(c, s["A"])) == c.O == c.add(_neg(c, s["A"]), s["A"])))
    add(Check("field.axioms", "mul-inverse", _vars("A:nz"),
              lambda c, s: c.mul(s["A"], c.inv(s["A"])) == c.I == c.mul(c.inv(s["A"]), s["A"])))

    def aux_seed(model, rng, ctx, s, bounds):
        s["aux"] = rng.randrange(10 ** 9)

    add(Check("aux.independence", "add", _vars("A:pt B:pt"),
              lambda c, s: geo_add(c.chart, s["A"], s["B"], s["aux"])[0] == c.add(s["A"], s["B"]),
              extra=aux_seed))
    add(Check("aux.independence", "mul", _vars("A:pt B:pt"),
              lambda c, s: geo_mul(c.chart, s["A"], s["B"], s["aux"])[0] == c.mul(s["A"], s["B"]),
              extra=aux_seed))

    # ratio identities
    add(Check("ratio2.identities", "inverse-symmetry", _vars("A:nz B:nz"),
              lambda c, s: c.inv(ratio2(c, s["A"], s["B"])) == ratio2(c, s["B"], s["A"])))
    add(Check("ratio2.identities", "left-additivity", _vars("A:pt B:pt C:nz"),
              lambda c, s: ratio2(c, c.add(s["A"], s["B"]), s["C"])
              == c.add(ratio2(c, s["A"], s["C"]), ratio2(c, s["B"], s["C"]))))
    add(Check("ratio2.identities", "right-factor", _vars("A:pt B:pt C:nz"),
              lambda c, s: ratio2(c, c.mul(s["A"], s["B"]), s["C"]) == c.mul(ratio2(c, s["A"], s["C"]), s["B"])))
    add(Check("ratio2.identities", "denominator-product", _vars("A:pt B:nz C:nz"),
              lambda c, s: ratio2(c, s["A"], c.mul(s["B"], s["C"])) == c.mul(c.inv(s["C"]), ratio2(c, s["A"], s["B"]))))
    add(Check("ratio2.identities", "equality-criterion", _vars("A:nz B:nz"),
              lambda c, s: (ratio2(c, s["A"], s["B"]) == ratio2(c, s["B"], s["A"]))
              == (s["A"] == s["B"] or s["A"] == _neg(c, s["B"])),
              extra=_twist_extra, optional_extra=True))
    add(Check("ratio3.identities", "sign-invariance", _vars("A:pt B:pt C:pt"),
              lambda c, s: ratio3(c, _neg(c, s["A"]), _neg(c, s["B"]), _neg(c, s["C"]))
              == ratio3(c, s["A"], s["B"], s["C"]),
              require=_b_ne_c))
    add(Check("ratio3.identities", "swap-inverse", _vars("A:pt B:pt C:pt"),
              lambda c, s: c.inv(ratio3(c, s["A"], s["B"], s["C"])) == ratio3(c, s["B"], s["A"], s["C"]),
              require=lambda c, s: s["B"] != s["C"] and s["A"] != s["C"]))
    add(Check("ratio3.identities", "conjugation", _vars("A:nz B:nz C:nz"),
              lambda c, s: ratio3(c, c.inv(s["A"]), c.inv(s["B"]), c.inv(s["C"]))
              == c.mul(c.mul(s["B"], ratio3(c, s["A"], s["B"], s["C"])), c.inv(s["A"])),
              require=_b_ne_c))

    # witnesses and negative controls
    add(Check("witness.pappian", "product-form", _vars("A:nz B:nz C:nz"),
              lambda c, s: ratio3(c, c.inv(s["A"]), c.inv(s["B"]), c.inv(s["C"]))
              == c.mul(ratio3(c, s["A"], s["B"], s["C"]), ratio3(c, s["B"], s["A"], c.O)),
              require=_b_ne_c, expect_failure=_noncommutative,
              witnesses=("A=1 B=i C=j",)))
    add(Check("witness.noncommutative", "commutes", _vars("A:pt B:pt"),
              lambda c, s: c.mul(s["A"], s["B"]) == c.mul(s["B"], s["A"]),
              expect_failure=_noncommutative,
              witnesses=("A=i B=j",)))
    add(Check("witness.noncommutative", "units", (), _units_witness,
              applies=lambda m: m.kind == "quaternion", single=True))
    add(Check("control.inv2.nattrans", "default", _vars("P:nz A:pt B:nz"),
              lambda c, s: check_invariance_2(natural_translation(c, s["P"]), s["A"], s["B"]),
              require=lambda c, s: not (_coord(c, s["P"]) + _coord(c, s["B"])).is_zero,
              expect_failure=_has_counterexamples,
              witnesses=("P=1 A=0 B=1",)))
    add(Check("control.printed", "denominator-product", _vars("A:pt B:nz C:nz"),
              lambda c, s: ratio2(c, s["A"], c.mul(s["B"], s["C"])) == c.mul(c.inv(s["C"]), ratio2(c, s["A"], s["C"])),
              expect_failure=_has_counterexamples,
              witnesses=("A=1 B=1 C=2",)))
    add(Check("control.printed", "equality-criterion", _vars("A:nz B:nz"),
              lambda c, s: (ratio2(c, s["A"], s["B"]) == ratio2(c, s["B"], s["A"])) == (s["A"] == s["B"]),
              extra=_twist_extra, optional_extra=True, expect_failure=_has_counterexamples,
              witnesses=("A=1 B=-1",)))

    # plane maps: defining properties, morphisms, composition
    add(Check("maps.defining", "dilatation", _vars("V:plane lam:sc P:plane Q:plane"),
              lambda c, s: segment_parallel(dilatation(s["V"], s["lam"]), s["P"], s["Q"]),
              require=lambda c, s: s["P"] != s["Q"]))
    add(Check("maps.defining", "translation", _vars("v:vec P:plane Q:plane"),
              lambda c, s: segment_parallel(translation(s["v"]), s["P"], s["Q"]),
              require=lambda c, s: s["P"] != s["Q"]))
    add(Check("maps.defining", "pproj", _vars("A:pt B:pt"),
              lambda c, s: connectors_parallel(s["map"], s["A"], s["B"]),
              extra=_projection_extra("intersecting")))
    add(Check("maps.morphism", "translation", _vars("v:vec A:pt B:pt"),
              lambda c, s: check_morphism(translation(s["v"]), c.chart, s["A"], s["B"])))
    add(Check("maps.morphism", "dilatation", _vars("V:plane lam:sc A:pt B:pt"),
              lambda c, s: check_morphism(dilatation(s["V"], s["lam"]), c.chart, s["A"], s["B"])))
    add(Check("maps.morphism", "pproj", _vars("A:pt B:pt"),
              lambda c, s: check_morphism(s["map"], c.chart, s["A"], s["B"]),
              extra=_projection_extra("intersecting")))

    def inner_automorphism(c, s):
        x, x_image = coordinate_automorphism(dilatation(s["V"], s["lam"]), c.chart, s["A"])
        return x_image == s["lam"] * x * s["lam"].inverse()

    add(Check("maps.morphism", "dilatation-coordinates", _vars("V:plane lam:sc A:pt"), inner_automorphism))

    def composed_translations(c, s):
        return compose_plane_maps(translation(s["v"]), translation(s["w"])) == translation(s["v"] + s["w"])

    def composed_dilatations(c, s):
        m = compose_plane_maps(dilatation(s["V"], s["lam"]), dilatation(s["V"], s["mu"]))
        return m(s["P"]) == dilatation(s["V"], s["lam"] * s["mu"])(s["P"])

    def composed_mixed(c, s):
        t, d = translation(s["v"]), dilatation(s["V"], s["lam"])
        m = compose_plane_maps(t, d)
        return m(s["P"]) == t(d(s["P"])) and segment_parallel(m, s["P"], s["Q"])

    def composed_projections(c, s):
        m = compose_plane_maps(s["second"], s["first"])
        return m.kind == "composite" and m(s["A"]) == s["second"](s["first"](s["A"]))

    add(Check("maps.compose", "translations", _vars("v:vec w:vec"), composed_translations))
    add(Check("maps.compose", "dilatations-same-center", _vars("V:plane lam:sc mu:sc P:plane"), composed_dilatations))
    add(Check("maps.compose", "mixed", _vars("v:vec V:plane lam:sc P:plane Q:plane"), composed_mixed,
              require=lambda c, s: s["P"] != s["Q"]))
    add(Check("maps.compose", "projection-chain", _vars("A:pt"), composed_projections,
              extra=_projection_chain_extra))

    registry: Dict[str, List[Check]] = {}
    for check in checks:
        registry.setdefault(check.id, []).append(check)
    return registry


REGISTRY = build_registry()
# fewest trials worth handing to a worker process
MIN_CHUNK = 25


def lookup_check(check_id: str, case: str) -> Check:
    for check in REGISTRY.get(check_id, []):
        if check.case == case:
            return check
    raise ValueError(f"unknown theorem case: {check_id}[{case}]")


@dataclass
class _Tally:
    trials: int = 0
    failures: int = 0
    skipped: int = 0
    counterexamples: List[Dict[str, str]] = field(default_factory=list)

    def merge(self, other: "_Tally", limit: int) -> None:
        self.trials += other.trials
        self.failures += other.failures
        self.skipped += other.skipped
        room = max(limit - len(self.counterexamples), 0)
        self.counterexamples.extend(other.counterexamples[:room])


def _run_trial_chunk(settings: Dict[str, Any], model: ModelConfig, check_id: str, case: str,
                     seed: int, start: int, stop: int) -> _Tally:
    """Worker process entry. Checks hold lambdas, so they travel as their (id, case) key."""
    return Verifier(settings).run_trials(lookup_check(check_id, case), model, seed, start, stop)


class Verifier:
    """
    Runs theorem suites over one scalar model.

    Responsibilities:
    - Draw seeded samples (one RNG per trial) or enumerate gf tuples
    - Spread sampled trials over worker processes in fixed index chunks
    - Evaluate each case and count failures
    - Keep counterexample certificates for the report
    """

    def __init__(self, settings: Dict[str, Any] = None):
        """
        Args:
            settings: Settings configuration dictionary (from settings.json)
        """
        self.settings = settings or {}
        verification = self.settings.get("verification", {})
        sampling = self.settings.get("sampling", {})
        self.max_counterexamples = verification.get("max_counterexamples", 5)
        self.exhaustive_limit = verification.get("exhaustive_limit", 13)
        self.workers = verification.get("workers", 1) or os.cpu_count() or 1
        self.retries = self.settings.get("construction", {}).get("aux_retries", 64)
        self.bounds = {
            "numerator_bound": sampling.get("rational_numerator_bound", 9),
            "denominator_bound": sampling.get("rational_denominator_bound", 6),
            "component_bound": sampling.get("quaternion_component_bound", 3),
        }
        self._pool: Optional[ProcessPoolExecutor] = None

    def run(self, model: ModelConfig, checks: Sequence[str], trials: int, seed: int,
            exhaustive: bool = False) -> VerificationReport:
        """
        Run every selected suite and collect one TheoremResult per case.

        Raises:
            ScopeTooLargeError: exhaustive run on a non-gf or too-large model
        """
        if exhaustive and (model.kind != "gf" or model.modulus > self.exhaustive_limit):
            raise ScopeTooLargeError(
                f"exhaustive runs need gf(p) with p <= {self.exhaustive_limit}, got {model.label}"
            )
        unknown = [check_id for check_id in checks if check_id not in CHECK_IDS]
        if unknown:
            raise ValueError(f"unknown theorem id: {unknown[0]}")
        report = VerificationReport(model=model.label, seed=seed, trials=trials, exhaustive=exhaustive)
        pool = None
        if self.workers > 1 and trials >= 2 * MIN_CHUNK:
            logger.info(f"Spreading trials over {self.workers} worker processes")
            pool = ProcessPoolExecutor(max_workers=self.workers)
        self._pool = pool
        try:
            for check_id in checks:
                logger.info(f"Running {check_id} on {model.label}")
                if check_id == "axioms":
                    report.results.append(self.run_axioms(model, trials, seed, exhaustive))
                elif check_id == "desargues":
                    report.results.extend(self.run_desargues(model, trials, seed))
                else:
                    for check in REGISTRY[check_id]:
                        if check.applies(model):
                            report.results.append(self.run_check(check, model, trials, seed, exhaustive))
        finally:
            self._pool = None
            if pool is not None:
                pool.shutdown()
        failed = report.failed
        if failed:
            logger.warning(f"{len(failed)} theorem case(s) failed on {model.label}")
        return report

    # --- single case ---

    def run_check(self, check: Check, model: ModelConfig, trials: int, seed: int,
                  exhaustive: bool = False) -> TheoremResult:
        started = time.perf_counter()
        tally = _Tally()
        mode = "exhaustive" if exhaustive and check.enumerable else "sampled"
        if mode == "exhaustive":
            ctx = RatioContext(Chart.standard(model))
            for sample in self._enumerate(model, ctx, check):
                if check.require is not None and not check.require(ctx, sample):
                    continue
                self._evaluate(check, ctx, sample, tally)
        else:
            if check.expect_failure(model):
                for ctx, sample in self._witness_samples(check, model):
                    self._evaluate(check, ctx, sample, tally)
            for chunk in self._sampled(check, model, seed, 1 if check.single else trials):
                tally.merge(chunk, self.max_counterexamples)
        vacuous = tally.trials == 0 and tally.skipped > 0
        if tally.skipped:
            logger.warning(
                f"{check.id}[{check.case}] {model.label}: {tally.skipped} trial(s) hit a precondition error"
                + (", none evaluated" if vacuous else "")
            )
        result = TheoremResult(
            id=check.id,
            case=check.case,
            description=THEOREMS.get(check.id, check.id),
            model=model.label,
            mode=mode,
            trials=tally.trials,
            failures=tally.failures,
            skipped=tally.skipped,
            vacuous=vacuous,
            expect_failure=check.expect_failure(model),
            counterexamples=tally.counterexamples,
            seconds=round(time.perf_counter() - started, 3),
        )
        status = "✓" if result.passed else "✗"
        logger.info(f"{status} {check.id}[{check.case}] {model.label}: {tally.trials} trials, {tally.failures} failures")
        return result

    def run_trials(self, check: Check, model: ModelConfig, seed: int, start: int, stop: int) -> _Tally:
        """Sampled trials with indices in [start, stop); trial i seeds its own RNG."""
        tally = _Tally()
        for i in range(start, stop):
            rng = random.Random(f"{seed}:{check.id}:{check.case}:{i}")
            ctx, sample = self._draw(check, model, rng)
            self._evaluate(check, ctx, sample, tally)
        return tally

    def _sampled(self, check: Check, model: ModelConfig, seed: int, count: int) -> Iterator[_Tally]:
        """Tallies covering trials [0, count), yielded in index order."""
        registered = any(c is check for c in REGISTRY.get(check.id, []))
        if self._pool is None or not registered or count < 2 * MIN_CHUNK:
            yield self.run_trials(check, model, seed, 0, count)
            return
        size = max(MIN_CHUNK, math.ceil(count / (4 * self.workers)))
        futures = [
            self._pool.submit(_run_trial_chunk, self.settings, model, check.id, check.case,
                              seed, start, min(start + size, count))
            for start in range(0, count, size)
        ]
        for future in futures:
            yield future.result()

    def _witness_samples(self, check: Check, model: ModelConfig) -> Iterator[Tuple[RatioContext, Sample]]:
        ctx = RatioContext(Chart.standard(model))
        kinds = dict(check.variables)
        for witness in check.witnesses:
            sample: Sample = {}
            try:
                for item in witness.split():
                    name, literal = item.split("=")
                    if kinds[name] == "n":
                        sample[name] = int(literal)
                    else:
                        sample[name] = chart_point(ctx.chart, model.parse_scalar(literal))
            except ScalarSyntaxError:
                # quaternion units have no meaning in gf(p) or Q
                continue
            if check.require is None or check.require(ctx, sample):
                yield ctx, sample

    def _evaluate(self, check: Check, ctx: RatioContext, sample: Sample, tally: _Tally) -> None:
        try:
            ok = check.holds(ctx, sample)
        except PreconditionError as e:
            logger.debug(f"{check.id}[{check.case}] skipped: {e}")
            tally.skipped += 1
            return
        except DesarguesError as e:
            ok = False
            sample = {**sample, "error": f"{e.code}: {e}"}
        tally.trials += 1
        if ok:
            return
        tally.failures += 1
        if len(tally.counterexamples) < self.max_counterexamples:
            certificate = {"chart": f"O={ctx.O} I={ctx.I}"}
            certificate.update({name: str(value) for name, value in sample.items()})
            tally.counterexamples.append(certificate)
            if not check.expect_failure(ctx.O.model):
                logger.warning(f"Counterexample to {check.id}[{check.case}]: {certificate}")

    # --- sampling ---

    def _draw(self, check: Check, model: ModelConfig, rng: random.Random) -> Tuple[RatioContext, Sample]:
        def attempt() -> Tuple[RatioContext, Sample]:
            ctx = RatioContext(self._random_chart(model, rng) if check.variables else Chart.standard(model))
            sample: Sample = {name: self._draw_value(kind, model, rng, ctx) for name, kind in check.variables}
            if check.extra is not None:
                check.extra(model, rng, ctx, sample, self.bounds)
            if check.require is not None and not check.require(ctx, sample):
                raise DegenerateSampleError("sample violates the case precondition")
            return ctx, sample

        try:
            for attempt_state in Retrying(
                stop=stop_after_attempt(self.retries),
                retry=retry_if_exception_type(DegenerateSampleError),
            ):
                with attempt_state:
                    drawn = attempt()
            return drawn
        except RetryError as e:
            raise GeneratorExhaustedError(
                f"no admissible sample for {check.id}[{check.case}] after {self.retries} draws"
            ) from e

    def _random_chart(self, model: ModelConfig, rng: random.Random) -> Chart:
        O = random_point(model, rng, **self.bounds)
        return Chart.from_points(O, O + random_direction(model, rng, **self.bounds))

    def _draw_value(self, kind: str, model: ModelConfig, rng: random.Random, ctx: RatioContext) -> Any:
        if kind == "pt":
            return chart_point(ctx.chart, model.random_scalar(rng, **self.bounds))
        if kind == "nz":
            return chart_point(ctx.chart, model.random_nonzero(rng, **self.bounds))
        if kind == "n":
            return rng.randint(1, model.modulus - 1) if model.is_finite else rng.randint(1, 6)
        if kind == "sc":
            return model.random_nonzero(rng, **self.bounds)
        if kind in ("vec", "plane"):
            return random_point(model, rng, **self.bounds)
        if kind == "off":
            return _off_line_point(model, rng, ctx.chart.line, self.bounds)
        raise ValueError(f"unknown variable kind: {kind}")

    # --- exhaustive ---

    def _enumerate(self, model: ModelConfig, ctx: RatioContext, check: Check) -> Iterator[Sample]:
        elements = list(model.elements())
        domains = {
            "pt": [chart_point(ctx.chart, x) for x in elements],
            "nz": [chart_point(ctx.chart, x) for x in elements if not x.is_zero],
            "n": list(range(1, model.modulus)),
        }
        names = [name for name, _ in check.variables]
        for values in itertools.product(*(domains[kind] for _, kind in check.variables)):
            yield dict(zip(names, values))

    # --- suites with their own generators ---

    def run_axioms(self, model: ModelConfig, trials: int, seed: int, exhaustive: bool) -> TheoremResult:
        started = time.perf_counter()
        scope = "exhaustive" if exhaustive else "sampled"
        report = check_axioms(model, scope=scope, n=trials, seed=seed, exhaustive_limit=self.exhaustive_limit)
        return TheoremResult(
            id="axioms",
            case="1-3",
            description="affine plane axioms: unique join, unique parallel, a triangle exists",
            model=model.label,
            mode=scope,
            trials=report.checks,
            failures=len(report.violations),
            counterexamples=[{"certificate": c.to_text()} for c in report.violations[: self.max_counterexamples]],
            seconds=round(time.perf_counter() - started, 3),
        )

    def run_desargues(self, model: ModelConfig, trials: int, seed: int) -> List[TheoremResult]:
        results = []
        for axis_kind in ("parallel", "concurrent"):
            started = time.perf_counter()
            tally = _Tally()
            for i in range(trials):
                try:
                    cfg = sample_desargues_config(model, axis_kind, seed=seed * 100003 + i, retries=self.retries)
                except GeneratorExhaustedError as e:
                    # gf(2) and gf(3) have no room for some configurations
                    logger.debug(f"desargues[{axis_kind}] trial {i} skipped: {e}")
                    tally.skipped += 1
                    continue
                tally.trials += 1
                if not check_desargues(cfg):
                    tally.failures += 1
                    if len(tally.counterexamples) < self.max_counterexamples:
                        tally.counterexamples.append(
                            {name: str(getattr(cfg, name)) for name in ("A", "B", "C", "Ap", "Bp", "Cp")}
                        )
            results.append(TheoremResult(
                id="desargues",
                case=axis_kind,
                description="Desargues' axiom: AB||A'B' and BC||B'C' force AC||A'C'",
                model=model.label,
                trials=tally.trials,
                failures=tally.failures,
                skipped=tally.skipped,
                counterexamples=tally.counterexamples,
                seconds=round(time.perf_counter() - started, 3),
            ))
        return results
