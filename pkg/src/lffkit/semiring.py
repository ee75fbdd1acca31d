"""Commutative semirings used as weights.

Only discrete, exactly comparable instances are provided: the Boolean
semiring and the arbitrary precision naturals and integers.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from functools import reduce
from typing import Any, Callable, Iterable

from .errors import ConfigError, SemiringMismatch


@dataclass(frozen=True)
class Semiring:
    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    contains: Callable[[Any], bool]
    parse_value: Callable[[str], Any]
    format_value: Callable[[Any], str]

    def eq(self, x, y) -> bool:
        return x == y

    def is_zero(self, x) -> bool:
        return x == self.zero

    def check(self, x):
        if not self.contains(x):
            raise SemiringMismatch(f"{x!r} is not an element of the {self.name} semiring")
        return x

    def parse(self, text: str):
        try:
            return self.parse_value(text.strip())
        except ValueError:
            raise ConfigError(f"cannot read {text!r} as a {self.name} value") from None

    def format(self, x) -> str:
        return self.format_value(x)

    def __repr__(self):
        return f"Semiring({self.name})"

    # dataclass equality would compare lambdas; the name is the identity.
    def __eq__(self, other):
        return isinstance(other, Semiring) and other.name == self.name

    def __hash__(self):
        return hash(("Semiring", self.name))


def _parse_bool(text):
    if text in ("1", "true", "True"):
        return True
    if text in ("0", "false", "False"):
        return False
    raise ValueError(text)


def _parse_nat(text):
    n = int(text)
    if n < 0:
        raise ValueError(text)
    return n


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


BOOL = Semiring(
    "bool", False, True, operator.or_, operator.and_,
    lambda x: isinstance(x, bool), _parse_bool,
    lambda x: "true" if x else "false",
)
NAT = Semiring(
    "nat", 0, 1, operator.add, operator.mul,
    lambda x: _is_int(x) and x >= 0, _parse_nat, str,
)
INT = Semiring(
    "int", 0, 1, operator.add, operator.mul,
    _is_int, int, str,
)

SEMIRINGS = {s.name: s for s in (BOOL, NAT, INT)}


def make_semiring(name: str) -> Semiring:
    """Look up a semiring instance by name (``bool``, ``nat`` or ``int``)."""
    try:
        return SEMIRINGS[name]
    except KeyError:
        known = ", ".join(SEMIRINGS)
        raise ConfigError(f"unknown semiring {name!r} (expected one of {known})") from None


def sr_fold_sum(S: Semiring, xs: Iterable) -> Any:
    return reduce(S.add, xs, S.zero)


def sr_fold_product(S: Semiring, xs: Iterable) -> Any:
    return reduce(S.mul, xs, S.one)
