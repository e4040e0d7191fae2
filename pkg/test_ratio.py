#!/usr/bin/env python3
"""Tests for two- and three-point ratios and ratio maps."""
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from src.construct import Chart, chart_coordinate, chart_point
from src.errors import CoincidentPointsError, OffLineError, ZeroDenominatorError
from src.geometry import Point
from src.ratio import (
    RatioContext,
    RatioMap,
    construct_ratio2,
    construct_ratio3,
    ratio2,
    ratio2_solve,
    ratio3,
    ratio3_solve,
    ratio_map2,
    ratio_map3,
)
from src.scalar import ModelConfig

GF5 = ModelConfig.parse("gf:5")
GF7 = ModelConfig.parse("gf:7")
QUATERNION = ModelConfig.parse("quaternion")


def context(model):
    return RatioContext(Chart.standard(model))


def pt(ctx, text):
    return chart_point(ctx.chart, ctx.O.model.parse_scalar(text))


def test_ratio2_gf7():
    ctx = context(GF7)
    assert ratio2(ctx, pt(ctx, "6"), pt(ctx, "2")) == pt(ctx, "3")
    assert ratio2(ctx, ctx.O, pt(ctx, "4")) == ctx.O
    assert ratio2(ctx, pt(ctx, "4"), pt(ctx, "4")) == ctx.I
    print("✓ PASS: r(6:2) = 3 in gf(7)")


def test_ratio3_gf7():
    ctx = context(GF7)
    A, B, C = pt(ctx, "6"), pt(ctx, "2"), pt(ctx, "4")
    assert ratio3(ctx, A, B, C) == pt(ctx, "6")
    assert ratio3(ctx, C, B, C) == ctx.O
    assert ratio3(ctx, B, B, C) == ctx.I


def test_ratio_preconditions():
    ctx = context(GF7)
    with pytest.raises(ZeroDenominatorError):
        ratio2(ctx, pt(ctx, "3"), ctx.O)
    with pytest.raises(CoincidentPointsError):
        ratio3(ctx, pt(ctx, "1"), pt(ctx, "2"), pt(ctx, "2"))
    with pytest.raises(OffLineError):
        ratio2(ctx, Point.of(GF7, 1, 1), pt(ctx, "2"))


def test_quaternion_ratio_is_left_quotient():
    ctx = context(QUATERNION)
    R = ratio2(ctx, pt(ctx, "k"), pt(ctx, "i"))
    assert R == pt(ctx, "j")
    assert ratio2_solve(ctx, R, pt(ctx, "i")) == pt(ctx, "k")


def test_ratio_traces_are_labelled():
    ctx = context(GF7)
    _, trace2 = construct_ratio2(ctx, pt(ctx, "6"), pt(ctx, "2"))
    assert "B_inv" in trace2 and "R" in trace2
    _, trace3 = construct_ratio3(ctx, pt(ctx, "6"), pt(ctx, "2"), pt(ctx, "4"))
    for label in ("A_C", "B_C", "B_C_inv", "R"):
        assert label in trace3


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.integers(1, 6), st.integers(0, 6))
def test_solve_inverts_ratios(a, b, c):
    ctx = context(GF7)
    A, B, C = (chart_point(ctx.chart, GF7.from_int(v)) for v in (a, b, c))
    assert ratio2_solve(ctx, ratio2(ctx, A, B), B) == A
    if B != C:
        assert ratio3_solve(ctx, ratio3(ctx, A, B, C), B, C) == A


def test_ratio_maps_are_bijections():
    ctx = context(GF5)
    for b in range(1, 5):
        m = ratio_map2(ctx, pt(ctx, str(b)))
        assert m.arity == 2 and m.is_bijective()
    m3 = ratio_map3(ctx, pt(ctx, "3"), pt(ctx, "1"))
    assert m3.arity == 3 and m3.is_bijective()
    assert sorted(chart_coordinate(ctx.chart, X).payload[0] for X in m3.image()) == [0, 1, 2, 3, 4]


def test_ratio_map_coordinate_form_and_closure():
    ctx = context(GF5)
    m = RatioMap(ctx, pt(ctx, "2"))
    on_coords = m.coordinate_form()
    assert on_coords(GF5.from_int(4)) == GF5.from_int(2)
    image = set(m.image())
    for X in image:
        for Y in image:
            assert ctx.add(X, Y) in image and ctx.mul(X, Y) in image


def test_ratio_map_rejects_bad_parameters():
    ctx = context(GF5)
    with pytest.raises(ZeroDenominatorError):
        RatioMap(ctx, ctx.O)
    with pytest.raises(CoincidentPointsError):
        RatioMap(ctx, ctx.I, ctx.I)


if __name__ == "__main__":
    test_ratio2_gf7()
    test_quaternion_ratio_is_left_quotient()
