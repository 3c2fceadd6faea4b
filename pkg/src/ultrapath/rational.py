"""Exact rationals extended with a single positive infinity.

Distances are ``fractions.Fraction`` throughout. ``INF`` only supports
comparison; adding or multiplying it raises ``TypeError``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union


class _Infinity:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __hash__(self) -> int:
        return hash("ultrapath.INF")

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

ExtRational = Union[Fraction, _Infinity]


def is_inf(x) -> bool:
    return x is INF


def to_rational(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would smuggle rounding into equality tests.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in ("inf", "+inf", "infinity"):
            raise ValueError("infinity is not allowed here")
        try:
            return Fraction(text)
        except ValueError:
            raise ValueError(f"not a rational: {value!r}") from None
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def to_ext_rational(value) -> ExtRational:
    if value is INF:
        return INF
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    return to_rational(value)


def format_rational(value: ExtRational) -> str:
    if value is INF:
        return "inf"
    return str(value)
