#!/usr/bin/env python3
"""Tests for the construction-script parser, checker and printer."""
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from src.dsl import (
    KEYWORDS,
    Assert,
    DSLParseError,
    Emit,
    Let,
    ModelDecl,
    PointLit,
    Ref,
    Script,
    parse,
    print_script,
    split_statements,
)

SCRIPTS_DIR = Path(__file__).parent / "data" / "scripts"

SAMPLE = (
    "model gf(7); let O=point(0,0); let I=point(1,0); let L=chart(O,I); "
    "let A=point(3,0); let B=point(5,0); let C=add(A,B) on L; "
    'assert eq(C, point(1,0)); emit "fig-add"'
)


def diagnostics_of(source):
    with pytest.raises(DSLParseError) as excinfo:
        parse(source)
    return excinfo.value.diagnostics


def test_sample_script():
    script = parse(SAMPLE)
    assert script.model == ModelDecl("gf(7)")
    # model header plus eight statements
    assert 1 + len(script.statements) == 9
    add = script.statements[5]
    assert add == Let("C", "add", (Ref("A"), Ref("B")), Ref("L"))
    assert script.statements[6] == Assert("eq", (Ref("C"), PointLit("1", "0")))
    assert script.statements[7] == Emit("fig-add")
    assert [b.name for b in script.bindings] == ["O", "I", "L", "A", "B", "C"]
    print("✓ PASS: sample script parses into 8 statements")


def test_minimal_script():
    script = parse("model gf(7)\nlet O = point(0,0)")
    assert len(script.bindings) == 1
    assert print_script(script) == "model gf(7)\nlet O = point(0, 0)\n"


def test_split_statements():
    chunks = split_statements('let A = point(1, 0); emit "a;b" # trailing; comment\n\n  # only a comment\n')
    assert [c.text.strip() for c in chunks] == ["let A = point(1, 0)", 'emit "a;b"']
    assert chunks[1].line == 1 and chunks[1].column == 21


def test_scalar_literals_are_normalized():
    script = parse("model quaternion\nlet A = point(1 + 2i - 3/4 j, -k)\nlet T = translate(A, 1/2, - i)")
    assert script.statements[0] == Let("A", "point", ("1+2i-3/4j", "-k"))
    assert script.statements[1].args[1:] == ("1/2", "-i")


def test_model_header_required():
    diagnostics = diagnostics_of("let O = point(0, 0)\nlet X = meet(a, b)")
    assert diagnostics[0].message == "model header required"
    assert diagnostics[0].code == "model-header" and diagnostics[0].line == 1
    # unknown identifiers are reported in the same pass
    assert [d.token for d in diagnostics if d.code == "unknown-identifier"] == ["a", "b"]


def test_model_header_only_once():
    diagnostics = diagnostics_of("model gf(7)\nlet A = point(1, 0)\nmodel rational")
    assert [(d.line, d.code) for d in diagnostics] == [(3, "model-header")]


def test_invalid_model():
    diagnostics = diagnostics_of("model gf(4)\nlet O = point(0, 0)")
    assert diagnostics[0].code == "invalid-model" and diagnostics[0].line == 1


def test_lexical_error():
    diagnostics = diagnostics_of("model rational\nlet A = point(1, 0) $")
    assert diagnostics[0].code == "lexical"
    assert diagnostics[0].token == "$" and diagnostics[0].line == 2


def test_reserved_word_as_name():
    diagnostics = diagnostics_of("model rational\nlet point = point(1, 0)")
    assert diagnostics[0].line == 2
    assert "reserved word" in diagnostics[0].message
    assert "point" in KEYWORDS


def test_statement_ends_too_early():
    diagnostics = diagnostics_of("model rational\nlet A =")
    assert diagnostics[0].message == "statement ends too early"


def test_unknown_and_duplicate_are_batched():
    diagnostics = diagnostics_of((SCRIPTS_DIR / "unknown_identifier.dsl").read_text(encoding="utf-8"))
    assert [(d.line, d.column, d.code) for d in diagnostics] == [
        (3, 17, "unknown-identifier"),
        (4, 5, "duplicate-binding"),
    ]
    assert str(diagnostics[0]) == "3:17: error: unknown identifier 'Z' near 'Z' [unknown-identifier]"


def test_use_before_binding():
    diagnostics = diagnostics_of("model rational\nlet l = join(A, point(1, 1))\nlet A = point(0, 0)")
    assert [d.token for d in diagnostics] == ["A"]


def test_comments_are_dropped_by_printer():
    source = "model rational # plane\nlet A = point(1/2, 0)  # half\nassert on(A, A)\n"
    printed = print_script(parse(source))
    assert "#" not in printed
    assert printed == "model rational\nlet A = point(1/2, 0)\nassert on(A, A)\n"


def test_corpus_round_trip():
    for path in sorted(SCRIPTS_DIR.glob("*.dsl")):
        try:
            script = parse(path.read_text(encoding="utf-8"))
        except DSLParseError:
            continue
        printed = print_script(script)
        assert parse(printed) == script, path.name
        assert print_script(parse(printed)) == printed


def test_emit_names_must_be_file_names():
    diagnostics = diagnostics_of((SCRIPTS_DIR / "escaping_emit.dsl").read_text(encoding="utf-8"))
    assert [(d.line, d.column, d.code) for d in diagnostics] == [(5, 6, "invalid-name"), (6, 6, "invalid-name")]
    assert diagnostics[0].token == '"../outside"'
    for name in ("", "a b", "..", "x..y", "a/b"):
        assert [d.code for d in diagnostics_of(f'model gf(7)\nemit "{name}"')] == ["invalid-name"], name
    assert parse('model gf(7)\nemit "fig_2.v-1"').statements == (Emit("fig_2.v-1"),)


# --- generated scripts --------------------------------------------------------------

scalar_text = st.sampled_from(["0", "1", "-1", "3", "1/2", "-7/3", "i", "-k", "1+2j", "2i-3/4k"])
emit_text = st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789-_", min_size=1, max_size=12)

OPERAND_ARITY = {
    "join": 2, "meet": 2, "parallel": 2, "chart": 2, "pproj": 3,
    "add": 2, "mul": 2, "ratio2": 2, "neg": 1, "inv": 1, "ratio3": 3,
}
PREDICATE_ARITY = {"eq": 2, "collinear": 3, "parallel": 2, "on": 2}


@st.composite
def scripts(draw):
    model = draw(st.sampled_from(["rational", "quaternion", "gf(2)", "gf(7)", "gf(13)"]))
    names = []
    statements = []

    def operand():
        if names and draw(st.booleans()):
            return Ref(draw(st.sampled_from(names)))
        return PointLit(draw(scalar_text), draw(scalar_text))

    for index in range(draw(st.integers(0, 12))):
        kind = draw(st.sampled_from(["point", "op", "translate", "dilate", "assert", "emit"]))
        name = f"P{index}"
        if kind == "point" or (kind == "op" and not names):
            statements.append(Let(name, "point", (draw(scalar_text), draw(scalar_text))))
        elif kind == "op":
            op = draw(st.sampled_from(sorted(OPERAND_ARITY)))
            args = tuple(operand() for _ in range(OPERAND_ARITY[op]))
            on = Ref(draw(st.sampled_from(names))) if op in ("add", "mul", "neg", "inv", "ratio2", "ratio3") else None
            statements.append(Let(name, op, args, on))
        elif kind == "translate":
            statements.append(Let(name, "translate", (operand(), draw(scalar_text), draw(scalar_text))))
        elif kind == "dilate":
            statements.append(Let(name, "dilate", (operand(), operand(), draw(scalar_text))))
        elif kind == "assert":
            pred = draw(st.sampled_from(sorted(PREDICATE_ARITY)))
            statements.append(Assert(pred, tuple(operand() for _ in range(PREDICATE_ARITY[pred]))))
            continue
        else:
            statements.append(Emit(draw(emit_text)))
            continue
        names.append(name)
    return Script(ModelDecl(model), tuple(statements))


@settings(max_examples=1000, deadline=None)
@given(scripts())
def test_printed_scripts_parse_back(script):
    assert parse(print_script(script)) == script


if __name__ == "__main__":
    test_sample_script()
    test_corpus_round_trip()
    print("\n✓ dsl tests done")
