#!/usr/bin/env python3
"""Tests for line transforms, plane maps and the invariance/preservation checks."""
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from src.construct import Chart, chart_point
from src.errors import (
    DegenerateImageError,
    NonComposableError,
    OffLineError,
    ParameterError,
    PreconditionError,
    ProjectionUndefinedError,
)
from src.geometry import Point, join
from src.ratio import RatioContext
from src.scalar import ModelConfig
from src.transforms import (
    PlaneMap,
    THEOREM_IDS,
    check_invariance_2,
    check_invariance_3,
    check_morphism,
    check_preservation,
    check_relation_2to3,
    compose_plane_maps,
    connectors_parallel,
    coordinate_automorphism,
    dilatation,
    image_chart,
    inversion,
    mobius2,
    mobius3,
    natural_dilatation,
    natural_translation,
    parallel_projection,
    project_point,
    segment_parallel,
    translation,
)

GF7 = ModelConfig.parse("gf:7")
RATIONAL = ModelConfig.parse("rational")
QUATERNION = ModelConfig.parse("quaternion")


def context(model):
    return RatioContext(Chart.standard(model))


def pt(ctx, text):
    return chart_point(ctx.chart, ctx.O.model.parse_scalar(text))


def test_theorem_ids():
    assert len(THEOREM_IDS) == 14
    assert "rel.2to3" in THEOREM_IDS and "pres3.pproj" in THEOREM_IDS


def test_line_transforms_gf7():
    ctx = context(GF7)
    X = pt(ctx, "3")
    assert inversion(ctx, pt(ctx, "2"))(X) == pt(ctx, "6")
    assert natural_translation(ctx, pt(ctx, "5"))(X) == pt(ctx, "1")
    assert natural_dilatation(ctx, 3)(X) == pt(ctx, "2")
    assert mobius2(ctx, pt(ctx, "2"))(X) == pt(ctx, "5")
    assert mobius3(ctx, pt(ctx, "2"), pt(ctx, "1"))(X) == pt(ctx, "2")


def test_line_transform_parameters():
    ctx = context(GF7)
    with pytest.raises(ParameterError):
        inversion(ctx, ctx.O)
    with pytest.raises(ParameterError):
        natural_dilatation(ctx, 7)
    with pytest.raises(ParameterError):
        natural_dilatation(ctx, 0)
    with pytest.raises(ParameterError):
        mobius3(ctx, ctx.I, ctx.I)
    with pytest.raises(ParameterError):
        natural_translation(ctx, Point.of(GF7, 1, 1))


def test_invariance_in_quaternions():
    ctx = context(QUATERNION)
    A, B, C = pt(ctx, "1+i"), pt(ctx, "j-2k"), pt(ctx, "1/2+k")
    P = pt(ctx, "2-j")
    assert check_invariance_2(inversion(ctx, P), A, B)
    assert check_invariance_2(natural_dilatation(ctx, 4), A, B)
    assert check_invariance_3(natural_translation(ctx, P), A, B, C)
    assert check_invariance_3(inversion(ctx, P), A, B, C)
    assert check_invariance_3(mobius3(ctx, B, C), A, P, C)
    assert check_relation_2to3(ctx, P, A, B)
    print("✓ PASS: ratio invariance in the quaternion model")


def test_natural_translation_breaks_two_point_ratio():
    ctx = context(GF7)
    # r(1:2) = 4 but r(2:3) = 3
    assert not check_invariance_2(natural_translation(ctx, ctx.I), pt(ctx, "1"), pt(ctx, "2"))


def test_invariance_preconditions():
    ctx = context(GF7)
    with pytest.raises(PreconditionError):
        check_invariance_2(inversion(ctx, ctx.I), ctx.I, ctx.O)
    with pytest.raises(PreconditionError):
        check_invariance_2(natural_translation(ctx, pt(ctx, "1")), ctx.I, pt(ctx, "6"))
    with pytest.raises(PreconditionError):
        check_invariance_3(inversion(ctx, ctx.I), ctx.I, ctx.O, ctx.O)


def test_plane_maps_rational():
    A = Point.of(RATIONAL, 1, 2)
    assert translation(Point.of(RATIONAL, 3, -1))(A) == Point.of(RATIONAL, 4, 1)
    assert dilatation(Point.of(RATIONAL, 1, 1), RATIONAL.parse_scalar("1/2"))(A) == Point.of(RATIONAL, 1, "3/2")
    with pytest.raises(ParameterError):
        dilatation(A, RATIONAL.zero())


def test_parallel_projection():
    source = Chart.standard(RATIONAL).line
    target = join(Point.of(RATIONAL, 0, 1), Point.of(RATIONAL, 1, 2))
    direction = join(Point.of(RATIONAL, 0, 0), Point.of(RATIONAL, 0, 1))
    m = parallel_projection(source, target, direction)
    assert m(Point.of(RATIONAL, 2, 0)) == Point.of(RATIONAL, 2, 3)
    assert project_point(Point.of(RATIONAL, 5, 5), target, direction) == Point.of(RATIONAL, 5, 6)
    with pytest.raises(OffLineError):
        m(Point.of(RATIONAL, 2, 1))
    with pytest.raises(ProjectionUndefinedError):
        project_point(Point.of(RATIONAL, 2, 0), target, target)
    with pytest.raises(ParameterError):
        parallel_projection(source, target, source)
    assert connectors_parallel(m, Point.of(RATIONAL, 2, 0), Point.of(RATIONAL, -3, 0))


def test_preservation_each_map():
    ch = Chart.from_points(Point.of(QUATERNION, 1, 0), Point.of(QUATERNION, "1+i", "j"))
    ctx = RatioContext(ch)
    A, B, C = pt(ctx, "2+k"), pt(ctx, "i-j"), pt(ctx, "3")
    maps = [
        translation(Point.of(QUATERNION, "i", "2")),
        dilatation(Point.of(QUATERNION, 0, 0), QUATERNION.parse_scalar("1+j")),
        dilatation(ch.I, QUATERNION.parse_scalar("2k")),
        dilatation(Point.of(QUATERNION, "5", "k"), QUATERNION.parse_scalar("-1+i")),
        parallel_projection(ch.line, join(Point.of(QUATERNION, 0, 3), Point.of(QUATERNION, 1, "3+i")),
                            join(Point.of(QUATERNION, 0, 0), Point.of(QUATERNION, 1, 2))),
    ]
    for m in maps:
        assert check_preservation(m, ch, [A, B])
        assert check_preservation(m, ch, [A, B, C])
        assert check_morphism(m, ch, A, B)


def test_dilatation_coordinates_conjugate():
    ch = Chart.standard(QUATERNION)
    lam = QUATERNION.parse_scalar("1+2j")
    m = dilatation(Point.of(QUATERNION, "i", "k"), lam)
    X = chart_point(ch, QUATERNION.parse_scalar("3i-k"))
    x, x_image = coordinate_automorphism(m, ch, X)
    assert x_image == lam * x * lam.inverse()
    assert x_image != x


def test_image_chart():
    ch = Chart.standard(RATIONAL)
    shifted = image_chart(translation(Point.of(RATIONAL, 0, 2)), ch)
    assert shifted.O == Point.of(RATIONAL, 0, 2) and shifted.I == Point.of(RATIONAL, 1, 2)
    assert image_chart(dilatation(ch.O, RATIONAL.one()), ch) == ch
    # a projection along its own source line sends every point to one place
    vertical = Chart.from_points(Point.of(RATIONAL, 0, 1), Point.of(RATIONAL, 0, 2))
    flat = PlaneMap("parallel-projection", source=vertical.line, target=ch.line, direction=vertical.line)
    with pytest.raises(DegenerateImageError):
        image_chart(flat, vertical)


def test_composition():
    v, w = Point.of(RATIONAL, 1, 2), Point.of(RATIONAL, -3, 5)
    assert compose_plane_maps(translation(v), translation(w)) == translation(v + w)
    V = Point.of(RATIONAL, 2, 2)
    two, half = RATIONAL.from_int(2), RATIONAL.parse_scalar("1/2")
    identity = compose_plane_maps(dilatation(V, two), dilatation(V, half))
    assert identity.kind == "translation" and identity.vector == Point.of(RATIONAL, 0, 0)
    mixed = compose_plane_maps(translation(v), dilatation(V, two))
    assert mixed.kind == "dilatation" and mixed.factor == two
    P = Point.of(RATIONAL, 7, -1)
    assert mixed(P) == translation(v)(dilatation(V, two)(P))
    assert segment_parallel(mixed, P, Point.of(RATIONAL, 0, 3))


def test_projection_chain_composition():
    x_axis = Chart.standard(RATIONAL).line
    diagonal = join(Point.of(RATIONAL, 0, 0), Point.of(RATIONAL, 1, 1))
    y_shift = join(Point.of(RATIONAL, 0, 4), Point.of(RATIONAL, 1, 4))
    up = join(Point.of(RATIONAL, 0, 0), Point.of(RATIONAL, 0, 1))
    first = parallel_projection(x_axis, diagonal, up)
    second = parallel_projection(diagonal, y_shift, up)
    chain = compose_plane_maps(second, first)
    assert chain.kind == "composite" and len(chain.parts) == 2
    assert chain(Point.of(RATIONAL, 3, 0)) == Point.of(RATIONAL, 3, 4)
    with pytest.raises(NonComposableError):
        compose_plane_maps(first, second)


if __name__ == "__main__":
    test_line_transforms_gf7()
    test_invariance_in_quaternions()
