"""Exact-value parsing and byte-deterministic JSON output."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from numbers import Rational

from .errors import InputValidationError


def parse_rational(value) -> Fraction:
    """Accept ints, Fractions, decimal/``"p/q"`` strings; floats convert exactly."""
    if isinstance(value, bool):
        raise InputValidationError(f"not a number: {value!r}")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InputValidationError(f"non-finite number: {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputValidationError(f"cannot parse rational {value!r}") from exc
    raise InputValidationError(f"not a number: {value!r}")


def parse_real(value) -> float:
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InputValidationError(f"non-finite number: {value!r}")
        return value
    return float(parse_rational(value))


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    if x == 0.0:
        return "0.0"
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _encode(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, Fraction):
        _encode(format_rational(obj), out)
    elif isinstance(obj, str):
        out.append(_json_string(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(",")
            out.append(_json_string(str(key)))
            out.append(":")
            _encode(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _encode(item, out)
        out.append("]")
    elif hasattr(obj, "item"):  # numpy scalar
        _encode(obj.item(), out)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _json_string(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def dumps(obj) -> str:
    """Compact JSON with sorted keys and floats at 17 significant digits."""
    out: list[str] = []
    _encode(obj, out)
    return "".join(out)


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]
