"""Exact skew-field arithmetic for three interchangeable scalar models.

- ``rational``: the field Q, payload ``(Fraction,)``.
- ``gf``: the prime field GF(p), payload ``(residue,)`` with ``0 <= residue < p``.
- ``quaternion``: Hamilton quaternions with rational components, payload
  ``(a, b, c, d)`` for ``a + bi + cj + dk``. This is the non-commutative model.

Scalars are immutable and always stored in canonical form, so equality of two
scalars is plain structural equality.
"""
import logging
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterator, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from src.errors import (
    InvalidModelError,
    ModelMismatchError,
    ParameterError,
    ScalarSyntaxError,
    ZeroInverseError,
)

logger = logging.getLogger(__name__)

ModelKind = Literal["rational", "gf", "quaternion"]
Components = Tuple[Fraction, Fraction, Fraction, Fraction]

_UNITS = ("", "i", "j", "k")
_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?([ijk]?)")
_MODEL_SPEC = re.compile(r"^\s*gf\s*[:(]\s*(\d+)\s*\)?\s*$")


def is_prime(n: int) -> bool:
    """Trial division; moduli are desk-sized."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class ModelConfig(BaseModel):
    """Which skew field the plane is built over."""

    model_config = ConfigDict(frozen=True)

    kind: ModelKind
    p: Optional[int] = None

    @model_validator(mode="after")
    def _check_modulus(self) -> "ModelConfig":
        if self.kind == "gf":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"gf(p) requires a prime modulus, got p={self.p}")
        elif self.p is not None:
            raise ValueError(f"model '{self.kind}' takes no modulus")
        return self

    @classmethod
    def parse(cls, text: str) -> "ModelConfig":
        """
        Parse a model spec: ``rational``, ``quaternion``, ``gf:7`` or ``gf(7)``.

        Raises:
            InvalidModelError: unknown kind or composite modulus
        """
        spec = text.strip().lower()
        if spec in ("rational", "quaternion"):
            return cls(kind=spec)
        match = _MODEL_SPEC.match(spec)
        if not match:
            raise InvalidModelError(f"Unknown model '{text}' (expected gf:<p>, rational or quaternion)")
        p = int(match.group(1))
        if not is_prime(p):
            raise InvalidModelError(f"gf({p}) rejected: {p} is not prime", {"p": p})
        return cls(kind="gf", p=p)

    @property
    def label(self) -> str:
        return f"gf({self.p})" if self.kind == "gf" else self.kind

    @property
    def is_commutative(self) -> bool:
        return self.kind != "quaternion"

    @property
    def is_finite(self) -> bool:
        return self.kind == "gf"

    @property
    def modulus(self) -> int:
        return self.p or 0

    def zero(self) -> "Scalar":
        return self.from_int(0)

    def one(self) -> "Scalar":
        return self.from_int(1)

    def from_int(self, n: int) -> "Scalar":
        if self.kind == "gf":
            return Scalar(self.kind, self.modulus, (n % self.modulus,))
        if self.kind == "rational":
            return Scalar(self.kind, 0, (Fraction(n),))
        return Scalar(self.kind, 0, (Fraction(n), Fraction(0), Fraction(0), Fraction(0)))

    def from_components(self, comps: Components) -> "Scalar":
        """
        Build a scalar from literal components ``a + bi + cj + dk``.

        Raises:
            ScalarSyntaxError: imaginary parts outside the quaternion model, or a
                fraction whose denominator vanishes mod p
        """
        comps = tuple(Fraction(c) for c in comps)
        if self.kind == "quaternion":
            return Scalar(self.kind, 0, comps)
        if any(comps[1:]):
            raise ScalarSyntaxError(f"quaternion literal not allowed in model {self.label}")
        value = comps[0]
        if self.kind == "rational":
            return Scalar(self.kind, 0, (value,))
        p = self.modulus
        if value.denominator % p == 0:
            raise ScalarSyntaxError(f"denominator {value.denominator} vanishes in {self.label}")
        residue = value.numerator * pow(value.denominator, -1, p) % p
        return Scalar(self.kind, p, (residue,))

    def quaternion(self, a=0, b=0, c=0, d=0) -> "Scalar":
        return self.from_components((Fraction(a), Fraction(b), Fraction(c), Fraction(d)))

    def parse_scalar(self, text: str) -> "Scalar":
        return self.from_components(parse_components(text))

    def elements(self) -> Iterator["Scalar"]:
        """All field elements; only finite models are enumerable."""
        if self.kind != "gf":
            raise InvalidModelError(f"model {self.label} is not finite")
        for r in range(self.modulus):
            yield Scalar(self.kind, self.modulus, (r,))

    def random_scalar(
        self,
        rng: random.Random,
        numerator_bound: int = 9,
        denominator_bound: int = 6,
        component_bound: int = 3,
    ) -> "Scalar":
        if self.kind == "gf":
            return Scalar(self.kind, self.modulus, (rng.randrange(self.modulus),))
        if self.kind == "rational":
            value = Fraction(rng.randint(-numerator_bound, numerator_bound), rng.randint(1, denominator_bound))
            return Scalar(self.kind, 0, (value,))
        comps = tuple(
            Fraction(rng.randint(-component_bound, component_bound), rng.choice((1, 1, 2)))
            for _ in range(4)
        )
        return Scalar(self.kind, 0, comps)

    def random_nonzero(self, rng: random.Random, **bounds) -> "Scalar":
        while True:
            value = self.random_scalar(rng, **bounds)
            if not value.is_zero:
                return value


@lru_cache(maxsize=None)
def model_for(kind: str, p: int) -> ModelConfig:
    """Shared ModelConfig per (kind, modulus); scalars ask for theirs on hot paths."""
    return ModelConfig(kind=kind, p=p or None)


@dataclass(frozen=True)
class Scalar:
    """An element of the active skew field. Use the ModelConfig factories to build one."""

    kind: str
    p: int
    payload: tuple

    @property
    def model(self) -> ModelConfig:
        return model_for(self.kind, self.p)

    @property
    def is_zero(self) -> bool:
        return not any(self.payload)

    def zero_like(self) -> "Scalar":
        if self.kind == "gf":
            return Scalar(self.kind, self.p, (0,))
        return Scalar(self.kind, self.p, (Fraction(0),) * len(self.payload))

    def one_like(self) -> "Scalar":
        if self.kind == "gf":
            return Scalar(self.kind, self.p, (1,))
        return Scalar(self.kind, self.p, (Fraction(1),) + (Fraction(0),) * (len(self.payload) - 1))

    @property
    def is_one(self) -> bool:
        return self.payload[0] == 1 and not any(self.payload[1:])

    def components(self) -> Components:
        """Literal components ``(a, b, c, d)``; gf residues become integers."""
        comps = [Fraction(c) for c in self.payload]
        comps += [Fraction(0)] * (4 - len(comps))
        return tuple(comps)

    def __add__(self, other: "Scalar") -> "Scalar":
        return s_add(self, other)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return s_add(self, s_neg(other))

    def __mul__(self, other: "Scalar") -> "Scalar":
        return s_mul(self, other)

    def __neg__(self) -> "Scalar":
        return s_neg(self)

    def inverse(self) -> "Scalar":
        return s_inv(self)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __str__(self) -> str:
        return format_components(self.components())

    def __repr__(self) -> str:
        return f"Scalar<{self.model.label}>({self})"

    def to_float(self) -> float:
        """Render-time projection; never used for decisions."""
        a, b, c, d = self.components()
        return float(a) + float(b) / 2 + float(c) / 4 + float(d) / 8


def _same_model(a: Scalar, b: Scalar) -> None:
    if a.kind != b.kind or a.p != b.p:
        raise ModelMismatchError(
            f"model mismatch: {a.model.label} vs {b.model.label}",
            {"left": a.model.label, "right": b.model.label},
        )


def s_add(a: Scalar, b: Scalar) -> Scalar:
    _same_model(a, b)
    if a.kind == "gf":
        return Scalar(a.kind, a.p, ((a.payload[0] + b.payload[0]) % a.p,))
    return Scalar(a.kind, a.p, tuple(x + y for x, y in zip(a.payload, b.payload)))


def s_neg(a: Scalar) -> Scalar:
    if a.kind == "gf":
        return Scalar(a.kind, a.p, ((-a.payload[0]) % a.p,))
    return Scalar(a.kind, a.p, tuple(-x for x in a.payload))


def s_sub(a: Scalar, b: Scalar) -> Scalar:
    return s_add(a, s_neg(b))


def s_mul(a: Scalar, b: Scalar) -> Scalar:
    """Product with ``a`` on the left; order matters in the quaternion model."""
    _same_model(a, b)
    if a.kind == "gf":
        return Scalar(a.kind, a.p, (a.payload[0] * b.payload[0] % a.p,))
    if a.kind == "rational":
        return Scalar(a.kind, a.p, (a.payload[0] * b.payload[0],))
    a1, b1, c1, d1 = a.payload
    a2, b2, c2, d2 = b.payload
    return Scalar(a.kind, a.p, (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ))


def s_inv(a: Scalar) -> Scalar:
    """
    Two-sided multiplicative inverse.

    Raises:
        ZeroInverseError: if ``a`` is zero
    """
    if a.is_zero:
        raise ZeroInverseError(f"zero has no inverse in {a.model.label}")
    if a.kind == "gf":
        return Scalar(a.kind, a.p, (pow(a.payload[0], -1, a.p),))
    if a.kind == "rational":
        return Scalar(a.kind, a.p, (1 / a.payload[0],))
    w, x, y, z = a.payload
    norm = w * w + x * x + y * y + z * z
    return Scalar(a.kind, a.p, (w / norm, -x / norm, -y / norm, -z / norm))


def s_nat(n: int, a: Scalar) -> Scalar:
    """
    n-fold sum ``a + a + ... + a``. Integer multiples are central.

    Raises:
        ParameterError: if n < 1
    """
    if n < 1:
        raise ParameterError(f"natural multiple requires n >= 1, got {n}")
    if a.kind == "gf":
        return Scalar(a.kind, a.p, (n * a.payload[0] % a.p,))
    return Scalar(a.kind, a.p, tuple(n * x for x in a.payload))


def parse_components(text: str) -> Components:
    """
    Parse a scalar literal: ``3``, ``-2/5``, ``i``, ``1+2i-3/4j+k``.

    Whitespace is ignored.

    Raises:
        ScalarSyntaxError: malformed literal or zero denominator
    """
    source = "".join(text.split())
    if not source:
        raise ScalarSyntaxError("empty scalar literal")
    comps = [Fraction(0)] * 4
    pos = 0
    while pos < len(source):
        match = _TERM.match(source, pos)
        sign, number, unit = match.groups()
        if not number and not unit:
            raise ScalarSyntaxError(f"malformed scalar literal '{text}' at offset {pos}")
        if pos > 0 and not sign:
            raise ScalarSyntaxError(f"missing sign between terms in '{text}'")
        try:
            value = Fraction(number) if number else Fraction(1)
        except ZeroDivisionError:
            raise ScalarSyntaxError(f"zero denominator in '{text}'") from None
        if sign == "-":
            value = -value
        comps[_UNITS.index(unit)] += value
        pos = match.end()
    return tuple(comps)


def format_components(comps: Components) -> str:
    """Canonical literal text; ``parse_components`` inverts it."""
    parts = []
    for value, unit in zip(comps, _UNITS):
        if value == 0:
            continue
        if unit and abs(value) == 1:
            coefficient = "-" if value < 0 else ""
        else:
            coefficient = str(value)
        parts.append(coefficient + unit)
    if not parts:
        return "0"
    text = parts[0]
    for part in parts[1:]:
        text += part if part.startswith("-") else "+" + part
    return text
