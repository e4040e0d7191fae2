#!/usr/bin/env python3
"""Main entry point for the Desargues plane ratio engine.

Subcommands:
    verify     run theorem suites over one scalar model
    run        parse and evaluate a construction script
    figure     draw one construction as SVG
    enumerate  count and check the affine plane over gf(p)

Exit codes: 0 success, 1 failed theorem/assertion/run, 2 usage or configuration error.
"""
import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

sys.path.insert(0, str(Path(__file__).parent))

from src.config_validator import CONFIG_DIR, load_settings
from src.dsl import DSLParseError, parse
from src.enumeration import enumerate_plane
from src.errors import DesarguesError, FigureSpecError, InvalidNameError, MalformedConfigError
from src.figures import FigureRenderer, build_figure_trace
from src.interpreter import evaluate
from src.reporter import Reporter
from src.schemas import CHECK_IDS, FigureSpec, RunConfig
from src.verifier import Verifier

logger = logging.getLogger("desargues")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
SEED_ENV = "DESARGUES_SEED"


def resolve_seed(flag: Optional[int], settings: Dict[str, Any]) -> int:
    """--seed wins over DESARGUES_SEED, which wins over settings.json."""
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV, "").strip()
    if env:
        try:
            return int(env)
        except ValueError as e:
            raise MalformedConfigError(f"{SEED_ENV} must be an integer, got '{env}'") from e
    return settings["verification"]["seed"]


def _split_checks(values: Optional[List[str]]) -> List[str]:
    if not values:
        return ["all"]
    return [item.strip() for value in values for item in value.split(",") if item.strip()]


def _parse_inputs(pairs: List[str]) -> Dict[str, str]:
    inputs: Dict[str, str] = {}
    for pair in pairs:
        if "=" not in pair:
            raise FigureSpecError(f"figure input '{pair}' must look like name=value")
        name, value = pair.split("=", 1)
        inputs[name.strip().lower()] = value.strip()
    return inputs


def cmd_verify(args, settings: Dict[str, Any], reporter: Reporter) -> int:
    try:
        cfg = RunConfig(
            model=args.model,
            trials=args.trials if args.trials is not None else settings["verification"]["trials"],
            seed=resolve_seed(args.seed, settings),
            checks=_split_checks(args.check),
            exhaustive=args.exhaustive,
            out=args.out,
        )
    except ValidationError as e:
        print(f"✗ Invalid verify options:\n{e}", file=sys.stderr)
        print(f"  known checks: all, {', '.join(CHECK_IDS)}", file=sys.stderr)
        return EXIT_USAGE

    if args.workers is not None:
        if args.workers < 0:
            print(f"✗ --workers must be >= 0, got {args.workers}", file=sys.stderr)
            return EXIT_USAGE
        settings = {**settings, "verification": {**settings["verification"], "workers": args.workers}}
    verifier = Verifier(settings)
    try:
        report = verifier.run(cfg.scalar_model, cfg.checks, cfg.trials, cfg.seed, cfg.exhaustive)
    except DesarguesError as e:
        print(f"✗ {e} [{e.code}]", file=sys.stderr)
        return EXIT_USAGE
    print(reporter.render_verification(report))
    if cfg.out:
        reporter.write_json(report, Path(cfg.out))
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_run(args, settings: Dict[str, Any], reporter: Reporter) -> int:
    path = Path(args.script)
    if not path.is_file():
        print(f"✗ Script not found: {path}", file=sys.stderr)
        return EXIT_USAGE
    source = path.read_text(encoding="utf-8")
    try:
        script = parse(source)
    except DSLParseError as e:
        for diagnostic in e.diagnostics:
            print(f"✗ {path}:{diagnostic}", file=sys.stderr)
        return EXIT_USAGE
    report = evaluate(script, settings)
    print(reporter.render_run(report, str(path)))
    if args.out:
        try:
            reporter.write_artifacts(report, Path(args.out))
        except InvalidNameError as e:
            print(f"✗ {e} [{e.code}]", file=sys.stderr)
            return EXIT_USAGE
    return report.exit_code


def cmd_figure(args, settings: Dict[str, Any], reporter: Reporter) -> int:
    try:
        spec = FigureSpec(
            kind=args.kind,
            model=args.model,
            inputs=_parse_inputs(args.inputs),
            canvas_size=args.canvas or settings["figures"]["canvas_size"],
        )
        trace, model = build_figure_trace(spec)
    except (ValidationError, FigureSpecError) as e:
        print(f"✗ Invalid figure: {e}", file=sys.stderr)
        return EXIT_USAGE
    svg = FigureRenderer(settings).render(trace, model, title=f"{spec.kind} in {model.label}",
                                          canvas_size=spec.canvas_size)
    if args.out:
        reporter.write_svg(svg, Path(args.out))
        print(f"✓ {spec.kind} figure: {len(trace)} trace step(s) -> {args.out}")
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def cmd_enumerate(args, settings: Dict[str, Any], reporter: Reporter) -> int:
    try:
        report = enumerate_plane(args.p, settings["verification"]["exhaustive_limit"])
    except DesarguesError as e:
        print(f"✗ {e} [{e.code}]", file=sys.stderr)
        return EXIT_USAGE
    print(reporter.render_enumeration(report))
    if args.out:
        reporter.write_json(report, Path(args.out))
    return EXIT_OK if report.ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Desargues affine plane ratio engine")
    parser.add_argument("--settings", type=Path, default=CONFIG_DIR / "settings.json",
                        help="Settings file (default: config/settings.json)")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Run theorem suites")
    verify.add_argument("--model", default="gf:7", help="gf:<p>, rational or quaternion (default: gf:7)")
    verify.add_argument("--trials", type=int, default=None, help="Trials per theorem case")
    verify.add_argument("--seed", type=int, default=None, help=f"Base seed (overrides {SEED_ENV})")
    verify.add_argument("--check", action="append", default=None,
                        help="Theorem ids, comma separated or repeated; 'all' runs everything")
    verify.add_argument("--exhaustive", action="store_true", help="Enumerate all tuples (gf only)")
    verify.add_argument("--workers", type=int, default=None,
                        help="Worker processes for sampled trials (0: one per CPU; default from settings)")
    verify.add_argument("--out", default=None, help="Write the JSON report here")

    run = sub.add_parser("run", help="Evaluate a construction script")
    run.add_argument("script", help="Path of the .dsl script")
    run.add_argument("--out", default=None, help="Directory for emitted figures and the JSON report")

    figure = sub.add_parser("figure", help="Draw a construction as SVG")
    figure.add_argument("kind", help="add, mul, ratio2, ratio3, pproj, translation or dilatation")
    figure.add_argument("inputs", nargs="*", help="Scalar inputs as name=value, e.g. a=3 b=5")
    figure.add_argument("--model", default="gf:7", help="gf:<p>, rational or quaternion (default: gf:7)")
    figure.add_argument("--canvas", type=int, default=None, help="Canvas size in pixels")
    figure.add_argument("--out", default=None, help="SVG path (default: standard output)")

    enum = sub.add_parser("enumerate", help="Enumerate the affine plane over gf(p)")
    enum.add_argument("p", type=int, help="Prime modulus (<= exhaustive_limit)")
    enum.add_argument("--out", default=None, help="Write the JSON report here")
    return parser


COMMANDS = {
    "verify": cmd_verify,
    "run": cmd_run,
    "figure": cmd_figure,
    "enumerate": cmd_enumerate,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, load settings and dispatch; returns the exit code."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(args.settings)
    except MalformedConfigError as e:
        print(f"✗ Configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    level = "DEBUG" if args.verbose else settings.get("logging", {}).get("level", "INFO").upper()
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.command](args, settings, Reporter())
    except MalformedConfigError as e:
        print(f"✗ Configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
