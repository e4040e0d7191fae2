"""
Pydantic schemas for run configuration, figure requests and verification reports.

Strict validation so a bad flag or settings value fails loud before any trial runs.
"""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, computed_field, field_validator, model_validator

from src.scalar import ModelConfig
from src.transforms import THEOREM_IDS

EXTRA_SUITE_IDS = (
    "axioms",
    "desargues",
    "field.oracle",
    "field.axioms",
    "aux.independence",
    "ratio2.identities",
    "ratio3.identities",
    "witness.noncommutative",
    "witness.pappian",
    "control.inv2.nattrans",
    "control.printed",
    "maps.defining",
    "maps.morphism",
    "maps.compose",
)
CHECK_IDS = THEOREM_IDS + EXTRA_SUITE_IDS

FigureKind = Literal["add", "mul", "ratio2", "ratio3", "pproj", "translation", "dilatation"]

FIGURE_INPUTS: Dict[str, Dict[str, Optional[str]]] = {
    # name -> default (None means required)
    "add": {"a": None, "b": None},
    "mul": {"a": None, "b": None},
    "ratio2": {"a": None, "b": None},
    "ratio3": {"a": None, "b": None, "c": None},
    "pproj": {"a": None, "b": None, "c": "0", "slope": "1", "offset": "0", "dir_x": "0", "dir_y": "1"},
    "translation": {"a": None, "b": None, "vx": "1", "vy": "2"},
    "dilatation": {"a": None, "b": None, "vx": "0", "vy": "1", "factor": "2"},
}


# --- Run configuration ---

class RunConfig(BaseModel):
    """Resolved options of one `verify` run."""
    model: str = Field(description="Scalar model: gf:<p>, rational or quaternion")
    trials: int = Field(ge=1, description="Seeded trials per theorem case")
    seed: int = Field(description="Base seed; every trial derives its own")
    checks: List[str] = Field(default_factory=lambda: list(CHECK_IDS), description="Theorem or suite ids")
    exhaustive: bool = Field(default=False, description="Enumerate all admissible tuples (gf only)")
    out: Optional[str] = Field(default=None, description="Path of the JSON report")

    @field_validator("model")
    @classmethod
    def _known_model(cls, value: str) -> str:
        return ModelConfig.parse(value).label

    @field_validator("checks")
    @classmethod
    def _known_checks(cls, value: List[str]) -> List[str]:
        if value == ["all"]:
            return list(CHECK_IDS)
        unknown = [v for v in value if v not in CHECK_IDS]
        if unknown:
            raise ValueError(f"unknown theorem id(s): {', '.join(unknown)}")
        return value

    @property
    def scalar_model(self) -> ModelConfig:
        return ModelConfig.parse(self.model)


class FigureSpec(BaseModel):
    """A figure request: construction kind, scalar inputs and canvas."""
    kind: FigureKind
    model: str = "gf:7"
    inputs: Dict[str, str] = Field(default_factory=dict, description="Scalar literals keyed by input name")
    canvas_size: int = Field(default=480, ge=64)

    @field_validator("model")
    @classmethod
    def _known_model(cls, value: str) -> str:
        return ModelConfig.parse(value).label

    @model_validator(mode="after")
    def _complete_inputs(self) -> "FigureSpec":
        expected = FIGURE_INPUTS[self.kind]
        unknown = set(self.inputs) - set(expected)
        if unknown:
            raise ValueError(f"figure {self.kind} does not take input(s) {sorted(unknown)}")
        missing = [name for name, default in expected.items() if default is None and name not in self.inputs]
        if missing:
            raise ValueError(f"figure {self.kind} needs input(s) {missing}")
        self.inputs = {name: self.inputs.get(name, default) for name, default in expected.items()}
        return self


# --- Reports ---

class TheoremResult(BaseModel):
    """Outcome of one theorem case."""
    id: str
    case: str = "default"
    description: str = ""
    model: str
    mode: Literal["sampled", "exhaustive"] = "sampled"
    trials: int = 0
    failures: int = 0
    skipped: int = 0
    vacuous: bool = Field(default=False, description="Every trial hit a precondition error, so nothing was checked")
    expect_failure: bool = Field(default=False, description="Negative control: passes iff a counterexample is found")
    counterexamples: List[Dict[str, str]] = Field(default_factory=list)
    seconds: float = 0.0

    @computed_field
    @property
    def passed(self) -> bool:
        if self.vacuous:
            return False
        if self.expect_failure:
            return self.failures > 0
        return self.failures == 0


class VerificationReport(BaseModel):
    model: str
    seed: int
    trials: int
    exhaustive: bool = False
    results: List[TheoremResult] = Field(default_factory=list)

    @computed_field
    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> List[TheoremResult]:
        return [r for r in self.results if not r.passed]


class EnumerationReport(BaseModel):
    """Finite plane over gf(p): counts, axioms and constructed tables against GF(p)."""
    p: int
    points: int
    lines: int
    expected_points: int
    expected_lines: int
    axioms_ok: bool
    axiom_violations: List[str] = Field(default_factory=list)
    add_table: List[List[int]] = Field(default_factory=list)
    mul_table: List[List[int]] = Field(default_factory=list)
    add_matches: bool = False
    mul_matches: bool = False

    @computed_field
    @property
    def ok(self) -> bool:
        return (
            self.points == self.expected_points
            and self.lines == self.expected_lines
            and self.axioms_ok
            and self.add_matches
            and self.mul_matches
        )
