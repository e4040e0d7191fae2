"""Reporter class for text and JSON reports of verification, enumeration and script runs."""
import json
import logging
from pathlib import Path
from typing import List

import pandas as pd
from jinja2 import Environment, FileSystemLoader
from pydantic import BaseModel

from src.dsl import valid_emit_name
from src.errors import InvalidNameError
from src.interpreter import RunReport
from src.schemas import EnumerationReport, VerificationReport

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"


class Reporter:
    """
    Formats engine results for people and for CI.

    Responsibilities:
    - Summarize theorem results per identifier (pandas)
    - Render text reports from jinja2 templates
    - Write machine-readable JSON and run artifacts to disk
    """

    def __init__(self, templates_dir: Path = None):
        self.env = Environment(
            loader=FileSystemLoader(str(templates_dir or TEMPLATES_DIR)),
            autoescape=False,
            trim_blocks=True,
            lstrip_blocks=True,
        )

    def summarize(self, report: VerificationReport) -> pd.DataFrame:
        """
        One row per theorem identifier, cases folded together.

        Returns:
            DataFrame with columns id, cases, trials, failures, skipped, passed
        """
        columns = ["id", "cases", "trials", "failures", "skipped", "passed"]
        if not report.results:
            return pd.DataFrame(columns=columns)
        df = pd.DataFrame([
            {
                "id": r.id,
                "case": r.case,
                "trials": r.trials,
                "failures": r.failures,
                "skipped": r.skipped,
                "passed": r.passed,
            }
            for r in report.results
        ])
        summary = (
            df.groupby("id", sort=False)
            .agg(
                cases=("case", "count"),
                trials=("trials", "sum"),
                failures=("failures", "sum"),
                skipped=("skipped", "sum"),
                passed=("passed", "all"),
            )
            .reset_index()
        )
        return summary[columns]

    def render_verification(self, report: VerificationReport) -> str:
        summary = self.summarize(report)
        template = self.env.get_template("verify_report.txt.j2")
        return template.render(
            report=report,
            rows=summary.to_dict(orient="records"),
            total_trials=int(summary["trials"].sum()) if len(summary) else 0,
            failed=report.failed,
            controls=[r for r in report.results if r.expect_failure and r.passed],
        )

    def render_enumeration(self, report: EnumerationReport) -> str:
        template = self.env.get_template("enumeration_report.txt.j2")
        return template.render(report=report)

    def render_run(self, report: RunReport, source: str = "") -> str:
        template = self.env.get_template("run_report.txt.j2")
        return template.render(report=report, source=source)

    def write_json(self, report: BaseModel, path: Path) -> Path:
        """Write any report model as indented JSON; parent directories are created."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info(f"Saved report to {path}")
        return path

    def write_artifacts(self, report: RunReport, out_dir: Path) -> List[Path]:
        """
        Save every emitted figure as ``<name>.svg`` and ``<name>.trace.json``.

        Args:
            report: RunReport from the interpreter
            out_dir: Target directory (created if missing)

        Returns:
            Paths written, in emit order

        Raises:
            InvalidNameError: if an artifact name is not a plain file name
        """
        out_dir = Path(out_dir)
        for artifact in report.artifacts:
            if not valid_emit_name(artifact.name):
                raise InvalidNameError(f"artifact name '{artifact.name}' is not a file name inside {out_dir}")
        out_dir.mkdir(parents=True, exist_ok=True)
        written: List[Path] = []
        for artifact in report.artifacts:
            svg_path = out_dir / f"{artifact.name}.svg"
            svg_path.write_text(artifact.svg, encoding="utf-8")
            trace_path = out_dir / f"{artifact.name}.trace.json"
            trace_path.write_text(artifact.trace_json() + "\n", encoding="utf-8")
            written.extend([svg_path, trace_path])
        summary_path = out_dir / "run_report.json"
        summary_path.write_text(
            json.dumps(report.model_dump(exclude={"artifacts"}), indent=2) + "\n", encoding="utf-8"
        )
        written.append(summary_path)
        logger.info(f"Saved {len(report.artifacts)} artifact(s) to {out_dir}")
        return written

    def write_svg(self, svg: str, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(svg, encoding="utf-8")
        logger.info(f"Saved figure to {path}")
        return path
