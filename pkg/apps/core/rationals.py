"""
Exact rational scalars.

All scalars are elements of sympy's ``QQ`` domain. Text in and out always
uses the ``"p/q"`` form.
"""

import re
from typing import Union

from sympy import QQ

from .exceptions import ParseError

RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")

Rational = type(QQ(0))
ZERO = QQ(0)
ONE = QQ(1)


def parse_rational(value: Union[int, str]) -> Rational:
    """Parse an integer or a ``"p/q"`` string; floats are rejected."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"floating-point value {value!r} is not allowed")
    if isinstance(value, int):
        return QQ(value)
    if not isinstance(value, str):
        raise ParseError(f"cannot read {value!r} as a rational")
    match = RATIONAL_PATTERN.match(value)
    if not match:
        raise ParseError(f"cannot read {value!r} as a rational")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) else 1
    if denominator == 0:
        raise ParseError(f"zero denominator in {value!r}")
    return QQ(numerator, denominator)


def to_rational(value) -> Rational:
    if isinstance(value, (int, str)) and not isinstance(value, bool):
        return parse_rational(value)
    return QQ.convert(value)


def format_rational(value) -> str:
    value = QQ.convert(value)
    return f"{int(value.numerator)}/{int(value.denominator)}"


def rational_sqrt(value) -> Union[Rational, None]:
    """Exact square root of a non-negative rational, or None if irrational."""
    from math import isqrt

    value = QQ.convert(value)
    if value < 0:
        return None
    num, den = int(value.numerator), int(value.denominator)
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return QQ(rn, rd)
