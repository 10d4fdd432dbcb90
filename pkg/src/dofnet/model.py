"""Message indices, antenna configurations and exact DoF tuples."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "MessageIndex",
    "MESSAGE_ORDER",
    "AntennaConfig",
    "DofTuple",
    "parse_fraction",
    "format_fraction",
    "parse_messages",
]

Rational = Union[Fraction, int, str]


class MessageIndex(Enum):
    """The nine messages of the 2x2 network.

    ``W<r><t>`` is private from transmitter t to receiver r, ``W0<r>`` is
    known at both transmitters and wanted at receiver r, ``W<t>`` is sent by
    transmitter t to both receivers and ``W0`` is known everywhere and
    wanted everywhere.
    """

    W11 = "11"
    W21 = "21"
    W12 = "12"
    W22 = "22"
    W1 = "1"
    W2 = "2"
    W01 = "01"
    W02 = "02"
    W0 = "0"

    @property
    def tag(self) -> str:
        return self.value

    @property
    def label(self) -> str:
        return "d" + self.value

    @property
    def tx_set(self) -> frozenset[int]:
        v = self.value
        if len(v) == 2 and v[0] != "0":
            return frozenset({int(v[1])})
        if v in ("1", "2"):
            return frozenset({int(v)})
        return frozenset({1, 2})

    @property
    def rx_set(self) -> frozenset[int]:
        v = self.value
        if len(v) == 2:
            return frozenset({int(v[0])}) if v[0] != "0" else frozenset({int(v[1])})
        return frozenset({1, 2})

    @classmethod
    def parse(cls, text: "str | MessageIndex") -> "MessageIndex":
        if isinstance(text, MessageIndex):
            return text
        t = str(text).strip()
        for prefix in ("d", "W", "w"):
            if t.startswith(prefix):
                t = t[len(prefix):]
                break
        try:
            return cls(t)
        except ValueError:
            raise ValueError(f"unknown message index {text!r}") from None

    def __repr__(self) -> str:
        return f"<{self.label}>"


# Coordinate order used for tuples, vertices and tie-breaking.
MESSAGE_ORDER: tuple[MessageIndex, ...] = tuple(MessageIndex)


def parse_messages(items: Iterable["str | MessageIndex"]) -> frozenset[MessageIndex]:
    return frozenset(MessageIndex.parse(x) for x in items)


def parse_fraction(text: Rational) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a number into an exact ``Fraction``."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("floats are not accepted; pass 'p/q' strings")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class AntennaConfig:
    """Antenna counts ``(M1, M2, N1, N2)`` at T1, T2, R1, R2."""

    M1: int
    M2: int
    N1: int
    N2: int

    def __post_init__(self):
        for name in ("M1", "M2", "N1", "N2"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise TypeError(f"{name} must be an int, got {v!r}")
            if v < 1:
                raise ValueError(f"{name} must be >= 1, got {v}")

    @classmethod
    def parse(cls, text: str) -> "AntennaConfig":
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected M1,M2,N1,N2, got {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError as exc:
            raise ValueError(f"bad antenna list {text!r}: {exc}") from None

    def M(self, t: int) -> int:
        return (self.M1, self.M2)[t - 1]

    def N(self, r: int) -> int:
        return (self.N1, self.N2)[r - 1]

    def scaled(self, k: int) -> "AntennaConfig":
        return AntennaConfig(k * self.M1, k * self.M2, k * self.N1, k * self.N2)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.M1, self.M2, self.N1, self.N2)

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.as_tuple())


@dataclass(frozen=True)
class DofTuple:
    """Exact nonnegative DoF values for all nine messages.

    Absent messages simply carry zero.  Values are stored in
    :data:`MESSAGE_ORDER`.
    """

    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != len(MESSAGE_ORDER):
            raise ValueError("a DoF tuple has exactly nine entries")
        vals = tuple(parse_fraction(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise ValueError("DoF entries must be nonnegative")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls) -> "DofTuple":
        return cls((Fraction(0),) * len(MESSAGE_ORDER))

    @classmethod
    def from_mapping(cls, mapping: Mapping["str | MessageIndex", Rational]) -> "DofTuple":
        vals = dict.fromkeys(MESSAGE_ORDER, Fraction(0))
        for key, v in mapping.items():
            vals[MessageIndex.parse(key)] = parse_fraction(v)
        return cls(tuple(vals[m] for m in MESSAGE_ORDER))

    @classmethod
    def from_values(cls, messages: Iterable[MessageIndex],
                    values: Iterable[Rational]) -> "DofTuple":
        messages, values = list(messages), list(values)
        if len(messages) != len(values):
            raise ValueError(f"expected {len(messages)} values, got {len(values)}")
        return cls.from_mapping(dict(zip(messages, values)))

    def __getitem__(self, key: "str | MessageIndex") -> Fraction:
        return self.values[MESSAGE_ORDER.index(MessageIndex.parse(key))]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def items(self) -> Iterator[tuple[MessageIndex, Fraction]]:
        return zip(MESSAGE_ORDER, self.values)

    def as_dict(self, messages: Iterable[MessageIndex] | None = None) -> dict[MessageIndex, Fraction]:
        keep = MESSAGE_ORDER if messages is None else [m for m in MESSAGE_ORDER if m in set(messages)]
        return {m: self[m] for m in keep}

    def restricted(self, messages: Iterable[MessageIndex]) -> tuple[Fraction, ...]:
        keep = set(messages)
        return tuple(v for m, v in self.items() if m in keep)

    @property
    def support(self) -> frozenset[MessageIndex]:
        return frozenset(m for m, v in self.items() if v != 0)

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    @property
    def denominator(self) -> int:
        """Least common denominator of all entries."""
        return math.lcm(*(v.denominator for v in self.values))

    @property
    def is_integer(self) -> bool:
        return self.denominator == 1

    def scaled(self, k: Rational) -> "DofTuple":
        k = parse_fraction(k)
        return DofTuple(tuple(v * k for v in self.values))

    def with_value(self, key: "str | MessageIndex", value: Rational) -> "DofTuple":
        m = MessageIndex.parse(key)
        return DofTuple(tuple(parse_fraction(value) if k is m else v
                              for k, v in self.items()))

    def format(self, messages: Iterable[MessageIndex] | None = None) -> str:
        parts = [f"{m.label}={format_fraction(v)}" for m, v in self.as_dict(messages).items()]
        return "(" + ", ".join(parts) + ")"

    def __str__(self) -> str:
        return self.format(self.support or None)
