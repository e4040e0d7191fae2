"""Finite planes over gf(p): counts, axioms and constructed operation tables."""
import logging
from typing import List

from src.construct import Chart, chart_coordinate, chart_point, geo_add, geo_mul
from src.errors import ScopeTooLargeError
from src.geometry import EXHAUSTIVE_LIMIT, check_axioms, enumerate_lines, enumerate_points
from src.scalar import ModelConfig
from src.schemas import EnumerationReport

logger = logging.getLogger(__name__)


def _residue(chart: Chart, point) -> int:
    return int(chart_coordinate(chart, point).payload[0])


def constructed_tables(model: ModelConfig) -> tuple[List[List[int]], List[List[int]]]:
    """Addition and multiplication tables of the standard chart, built by ruler constructions."""
    chart = Chart.standard(model)
    points = [chart_point(chart, x) for x in model.elements()]
    add_table = [[_residue(chart, geo_add(chart, A, B)[0]) for B in points] for A in points]
    mul_table = [[_residue(chart, geo_mul(chart, A, B)[0]) for B in points] for A in points]
    return add_table, mul_table


def enumerate_plane(p: int, limit: int = EXHAUSTIVE_LIMIT) -> EnumerationReport:
    """
    Enumerate the affine plane over gf(p).

    Args:
        p: prime modulus
        limit: largest prime accepted

    Returns:
        EnumerationReport comparing counts with p^2 / p^2+p and tables with GF(p)

    Raises:
        InvalidModelError: if p is not prime
        ScopeTooLargeError: if p exceeds the limit
    """
    model = ModelConfig.parse(f"gf:{p}")
    if p > limit:
        raise ScopeTooLargeError(f"enumeration is limited to p <= {limit}, got {p}")
    points = enumerate_points(model)
    lines = enumerate_lines(model)
    axioms = check_axioms(model, scope="exhaustive", exhaustive_limit=limit)
    add_table, mul_table = constructed_tables(model)
    report = EnumerationReport(
        p=p,
        points=len(points),
        lines=len(lines),
        expected_points=p * p,
        expected_lines=p * p + p,
        axioms_ok=axioms.ok,
        axiom_violations=[c.to_text() for c in axioms.violations],
        add_table=add_table,
        mul_table=mul_table,
        add_matches=all(add_table[a][b] == (a + b) % p for a in range(p) for b in range(p)),
        mul_matches=all(mul_table[a][b] == (a * b) % p for a in range(p) for b in range(p)),
    )
    logger.info(f"gf({p}): {report.points} points, {report.lines} lines, ok={report.ok}")
    return report
