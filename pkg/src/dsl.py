"""Construction-script language: statement splitting, parsing, checks and printing.

A script is a model header followed by ``let``, ``assert`` and ``emit``
statements, one per line or separated by ``;``. ``#`` starts a comment that
runs to the end of the line; comments are not preserved by ``print_script``.
"""
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken
from pydantic import BaseModel

from src.errors import InvalidModelError
from src.scalar import ModelConfig

logger = logging.getLogger(__name__)

GRAMMAR_PATH = Path(__file__).resolve().parent.parent / "grammar" / "construction.lark"
# emitted names become file names under the output directory
EMIT_NAME = re.compile(r"[A-Za-z0-9_.-]+")

KEYWORDS = frozenset({
    "model", "let", "assert", "emit", "on", "point", "join", "meet", "parallel", "chart",
    "add", "mul", "neg", "inv", "ratio2", "ratio3", "translate", "dilate", "pproj",
    "eq", "collinear", "rational", "quaternion", "gf",
})
CHART_OPS = ("add", "mul", "neg", "inv", "ratio2", "ratio3")


class Diagnostic(BaseModel):
    """A positioned message about the source text (1-based line and column)."""
    severity: str = "error"
    line: int
    column: int
    message: str
    token: str = ""
    code: str = "syntax"

    def __str__(self) -> str:
        near = f" near '{self.token}'" if self.token else ""
        return f"{self.line}:{self.column}: {self.severity}: {self.message}{near} [{self.code}]"


class DSLParseError(ValueError):
    """Raised by ``parse`` with every diagnostic of the script."""

    def __init__(self, diagnostics: List[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


# --- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Pos:
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Ref:
    name: str
    pos: Pos = field(default=Pos(), compare=False)


@dataclass(frozen=True)
class PointLit:
    x: str
    y: str
    pos: Pos = field(default=Pos(), compare=False)


Operand = Union[Ref, PointLit]


@dataclass(frozen=True)
class ModelDecl:
    spec: str  # "rational", "quaternion" or "gf(p)"
    pos: Pos = field(default=Pos(), compare=False)


@dataclass(frozen=True)
class Let:
    name: str
    op: str
    args: Tuple[Union[Operand, str], ...]  # scalars are kept as literal text
    on: Optional[Ref] = None
    pos: Pos = field(default=Pos(), compare=False)


@dataclass(frozen=True)
class Assert:
    pred: str
    args: Tuple[Operand, ...]
    pos: Pos = field(default=Pos(), compare=False)


@dataclass(frozen=True)
class Emit:
    name: str
    pos: Pos = field(default=Pos(), compare=False)


Statement = Union[ModelDecl, Let, Assert, Emit]


@dataclass(frozen=True)
class Script:
    model: ModelDecl
    statements: Tuple[Statement, ...]

    @property
    def bindings(self) -> List[Let]:
        return [s for s in self.statements if isinstance(s, Let)]


# --- splitting ------------------------------------------------------------------

@dataclass(frozen=True)
class Chunk:
    text: str
    line: int
    column: int  # 1-based column of text[0]


def split_statements(source: str) -> List[Chunk]:
    """Split on newlines and ';' outside string literals, dropping comments and blanks."""
    chunks: List[Chunk] = []
    for line_no, raw in enumerate(source.splitlines(), start=1):
        start, in_string = 0, False
        for i, ch in enumerate(raw + ";"):
            if ch == '"':
                in_string = not in_string
            elif not in_string and ch in ";#":
                piece = raw[start:i]
                if piece.strip():
                    chunks.append(Chunk(piece, line_no, start + 1))
                start = i + 1
                if ch == "#":
                    break
    return chunks


# --- parser -----------------------------------------------------------------------

def _normalize_scalar(token: Token) -> str:
    return "".join(str(token).split())


@v_args(inline=True)
class _ToAST(Transformer):
    """Turns a statement tree into AST nodes; positions are chunk-relative."""

    def _pos(self, token) -> Pos:
        return Pos(getattr(token, "line", 0) or 0, getattr(token, "column", 0) or 0)

    def rational(self):
        return "rational"

    def quaternion(self):
        return "quaternion"

    def gf(self, p):
        return f"gf({int(p)})"

    def model_stmt(self, spec):
        return ModelDecl(spec)

    def point_lit(self, x, y):
        return PointLit(_normalize_scalar(x), _normalize_scalar(y), self._pos(x))

    def ref(self, name):
        return Ref(str(name), self._pos(name))

    def operand(self, value):
        return value

    def expr(self, value):
        # bare point literal
        return ("point", (value.x, value.y), None)

    def _op(name):
        def build(self, *items):
            on = None
            if name in CHART_OPS:
                *items, on_token = items
                on = Ref(str(on_token), self._pos(on_token))
            args = tuple(_normalize_scalar(a) if isinstance(a, Token) else a for a in items)
            return (name, args, on)
        return build

    join = _op("join")
    meet = _op("meet")
    parallel = _op("parallel")
    chart = _op("chart")
    add = _op("add")
    mul = _op("mul")
    neg = _op("neg")
    inv = _op("inv")
    ratio2 = _op("ratio2")
    ratio3 = _op("ratio3")
    translate = _op("translate")
    dilate = _op("dilate")
    pproj = _op("pproj")
    eq = _op("eq")
    collinear = _op("collinear")
    on = _op("on")
    del _op

    def let_stmt(self, name, expr):
        op, args, on = expr
        return Let(str(name), op, args, on, self._pos(name))

    def assert_stmt(self, pred):
        op, args, _ = pred
        return Assert(op, args)

    def emit_stmt(self, text):
        return Emit(str(text)[1:-1], self._pos(text))

    def statement(self, node):
        return node


class ScriptParser:
    """Parses construction scripts, batching every diagnostic it can find."""

    def __init__(self, grammar_path: Path = GRAMMAR_PATH):
        self._lark = Lark(
            grammar_path.read_text(encoding="utf-8"),
            start="start",
            parser="lalr",
            propagate_positions=True,
        )

    def parse_statement(self, chunk: Chunk) -> Statement:
        tree = self._lark.parse(chunk.text)
        node = _ToAST().transform(tree)
        return _shift(node, chunk)

    def parse(self, source: str) -> Script:
        """
        Parse a whole script.

        Raises:
            DSLParseError: with positioned diagnostics (lexical, syntax, model header,
                reserved words, duplicate bindings, unknown identifiers, emit names)
        """
        diagnostics: List[Diagnostic] = []
        statements: List[Tuple[Chunk, Statement]] = []
        chunks = split_statements(source)
        for chunk in chunks:
            try:
                statements.append((chunk, self.parse_statement(chunk)))
            except UnexpectedInput as e:
                diagnostics.append(_diagnostic_from_lark(e, chunk))

        model: Optional[ModelDecl] = None
        body: List[Statement] = []
        for chunk, stmt in statements:
            if isinstance(stmt, ModelDecl):
                if model is None and chunk == chunks[0]:
                    model = stmt
                    diagnostics.extend(_check_model(stmt))
                else:
                    diagnostics.append(Diagnostic(
                        line=chunk.line, column=chunk.column, message="model header must appear exactly once, first",
                        token="model", code="model-header",
                    ))
                continue
            body.append(stmt)
        header_attempted = bool(chunks) and chunks[0].text.split()[0] == "model"
        if model is None and not header_attempted:
            first = chunks[0] if chunks else Chunk("", 1, 1)
            diagnostics.append(Diagnostic(
                line=first.line, column=first.column, message="model header required", code="model-header",
            ))

        diagnostics.extend(check_scope(body))
        if diagnostics:
            diagnostics.sort(key=lambda d: (d.line, d.column))
            raise DSLParseError(diagnostics)
        return Script(model, tuple(body))


def _check_model(decl: ModelDecl) -> List[Diagnostic]:
    try:
        ModelConfig.parse(decl.spec)
    except InvalidModelError as e:
        return [Diagnostic(line=decl.pos.line, column=decl.pos.column, message=str(e),
                           token=decl.spec, code="invalid-model")]
    return []


def _shift(node, chunk: Chunk):
    """Move chunk-relative positions to source positions (chunks never span lines)."""
    leading = len(chunk.text) - len(chunk.text.lstrip())

    def fix(pos: Pos) -> Pos:
        if pos.line == 0:
            return Pos(chunk.line, chunk.column + leading)
        return Pos(chunk.line, chunk.column + pos.column - 1)

    def walk(value):
        if isinstance(value, (Ref, PointLit)):
            return type(value)(**{**value.__dict__, "pos": fix(value.pos)})
        return value

    if isinstance(node, Let):
        return Let(node.name, node.op, tuple(walk(a) for a in node.args), walk(node.on) if node.on else None, fix(node.pos))
    if isinstance(node, Assert):
        return Assert(node.pred, tuple(walk(a) for a in node.args), fix(node.pos))
    if isinstance(node, (Emit, ModelDecl)):
        return type(node)(**{**node.__dict__, "pos": fix(node.pos)})
    return node


def _diagnostic_from_lark(e: UnexpectedInput, chunk: Chunk) -> Diagnostic:
    raw_column = getattr(e, "column", 1)
    column = chunk.column + (raw_column - 1 if isinstance(raw_column, int) and raw_column > 0 else 0)
    if isinstance(e, UnexpectedCharacters):
        token = chunk.text[e.pos_in_stream] if e.pos_in_stream < len(chunk.text) else ""
        return Diagnostic(line=chunk.line, column=column, message="unexpected character", token=token, code="lexical")
    if isinstance(e, UnexpectedEOF) or (isinstance(e, UnexpectedToken) and e.token.type == "$END"):
        return Diagnostic(line=chunk.line, column=chunk.column + len(chunk.text.rstrip()),
                          message="statement ends too early", code="syntax")
    if isinstance(e, UnexpectedToken):
        token = str(e.token)
        if token in KEYWORDS:
            message = f"'{token}' is a reserved word here"
        else:
            expected = ", ".join(sorted(e.expected)[:6])
            message = f"unexpected token (expected {expected})"
        return Diagnostic(line=chunk.line, column=column, message=message, token=token, code="syntax")
    return Diagnostic(line=chunk.line, column=column, message=str(e), code="syntax")


def _operands(stmt: Statement):
    if isinstance(stmt, Let):
        yield from (a for a in stmt.args if isinstance(a, Ref))
        if stmt.on is not None:
            yield stmt.on
    elif isinstance(stmt, Assert):
        yield from (a for a in stmt.args if isinstance(a, Ref))


def valid_emit_name(name: str) -> bool:
    return EMIT_NAME.fullmatch(name) is not None and ".." not in name


def check_scope(statements: List[Statement]) -> List[Diagnostic]:
    """
    Identifiers must be bound before use, exactly once, and not be reserved words.
    Emitted names must be plain file names.
    """
    diagnostics: List[Diagnostic] = []
    bound = set()
    for stmt in statements:
        if isinstance(stmt, Emit) and not valid_emit_name(stmt.name):
            diagnostics.append(Diagnostic(
                line=stmt.pos.line, column=stmt.pos.column,
                message=f"emit name '{stmt.name}' may only use letters, digits, '_', '-' and '.' (no '..')",
                token=f'"{stmt.name}"', code="invalid-name",
            ))
        for ref in _operands(stmt):
            if ref.name not in bound:
                diagnostics.append(Diagnostic(
                    line=ref.pos.line, column=ref.pos.column, message=f"unknown identifier '{ref.name}'",
                    token=ref.name, code="unknown-identifier",
                ))
        if isinstance(stmt, Let):
            if stmt.name in KEYWORDS:
                diagnostics.append(Diagnostic(
                    line=stmt.pos.line, column=stmt.pos.column, message=f"'{stmt.name}' is a reserved word",
                    token=stmt.name, code="reserved-word",
                ))
            elif stmt.name in bound:
                diagnostics.append(Diagnostic(
                    line=stmt.pos.line, column=stmt.pos.column, message=f"'{stmt.name}' is already bound",
                    token=stmt.name, code="duplicate-binding",
                ))
            bound.add(stmt.name)
    return diagnostics


# --- printer ----------------------------------------------------------------------

def _print_operand(value: Union[Operand, str]) -> str:
    if isinstance(value, Ref):
        return value.name
    if isinstance(value, PointLit):
        return f"point({value.x}, {value.y})"
    return value


def print_statement(stmt: Statement) -> str:
    if isinstance(stmt, ModelDecl):
        return f"model {stmt.spec}"
    if isinstance(stmt, Emit):
        return f'emit "{stmt.name}"'
    if isinstance(stmt, Assert):
        return f"assert {stmt.pred}({', '.join(_print_operand(a) for a in stmt.args)})"
    args = ", ".join(_print_operand(a) for a in stmt.args)
    suffix = f" on {stmt.on.name}" if stmt.on is not None else ""
    return f"let {stmt.name} = {stmt.op}({args}){suffix}"


def print_script(script: Script) -> str:
    """Canonical text: one statement per line, single spaces, no comments."""
    lines = [print_statement(script.model)] + [print_statement(s) for s in script.statements]
    return "\n".join(lines) + "\n"


_default_parser: Optional[ScriptParser] = None


def parse(source: str) -> Script:
    """Parse with a shared ScriptParser (the grammar is compiled once)."""
    global _default_parser
    if _default_parser is None:
        _default_parser = ScriptParser()
    return _default_parser.parse(source)
