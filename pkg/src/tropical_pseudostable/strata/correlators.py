import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import Sequence

from sympy import Rational

from tropical_pseudostable.errors import OutOfRangeError, UnsupportedClassError

__all__ = [
    "CorrelatorKey",
    "correlator",
    "correlator_by_string_equation",
]

logger = logging.getLogger(__name__)

GENUS_ONE_BASE = Rational(1, 24)


@dataclass(frozen=True)
class CorrelatorKey:
    '''the psi-exponents of an integral over a moduli space of smooth curves'''
    genus: int
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponents", tuple(sorted(int(a) for a in self.exponents)))
        if self.genus >= 2:
            raise UnsupportedClassError(f"genus {self.genus} correlators are not supported")
        if self.genus < 0 or any(a < 0 for a in self.exponents):
            raise OutOfRangeError(f"invalid correlator {self}")
        if 2 * self.genus - 2 + len(self.exponents) <= 0:
            raise OutOfRangeError(
                f"genus {self.genus} with {len(self.exponents)} insertions is unstable")

    @property
    def dimension(self) -> int:
        return 3 * self.genus - 3 + len(self.exponents)


def correlator(genus: int, exponents: Sequence[int]) -> Rational:
    '''
    genus 0 by the closed multinomial form, genus 1 by the dilaton and
    string equations down to <tau_1> = 1/24
    '''
    key = CorrelatorKey(genus, tuple(exponents))
    return _correlator(key.genus, key.exponents)


@lru_cache(maxsize=None)
def _correlator(genus: int, exponents: tuple[int, ...]) -> Rational:
    n = len(exponents)
    if sum(exponents) != 3 * genus - 3 + n:
        return Rational(0)
    if genus == 0:
        return Rational(factorial(n - 3), prod(factorial(a) for a in exponents))

    if exponents == (1,):
        return GENUS_ONE_BASE
    if 1 in exponents:
        rest = _without(exponents, 1)
        return (2 * genus - 2 + len(rest)) * _correlator(genus, rest)
    return _string(genus, exponents, _correlator)


def _without(exponents: tuple[int, ...], value: int) -> tuple[int, ...]:
    rest = list(exponents)
    rest.remove(value)
    return tuple(rest)


def _string(genus: int, exponents: tuple[int, ...], recurse) -> Rational:
    rest = _without(exponents, 0)
    total = Rational(0)
    for i, a in enumerate(rest):
        if a > 0:
            lowered = rest[:i] + (a - 1,) + rest[i + 1:]
            total += recurse(genus, tuple(sorted(lowered)))
    return total


def correlator_by_string_equation(genus: int, exponents: Sequence[int]) -> Rational:
    '''
    independent evaluator: string equation first, dilaton only when no
    insertion has exponent zero, base cases <tau_0^3> = 1 and <tau_1> = 1/24
    '''
    key = CorrelatorKey(genus, tuple(exponents))
    return _by_string(key.genus, key.exponents)


@lru_cache(maxsize=None)
def _by_string(genus: int, exponents: tuple[int, ...]) -> Rational:
    n = len(exponents)
    if sum(exponents) != 3 * genus - 3 + n:
        return Rational(0)
    if genus == 0 and exponents == (0, 0, 0):
        return Rational(1)
    if genus == 1 and exponents == (1,):
        return GENUS_ONE_BASE
    if 0 in exponents:
        return _string(genus, exponents, _by_string)
    rest = _without(exponents, 1)
    return (2 * genus - 2 + len(rest)) * _by_string(genus, rest)


def main():
    for genus, exponents in ((0, (0, 0, 0)), (0, (1, 0, 0, 0)), (0, (2, 1, 0, 0, 0, 0)),
                             (1, (1,)), (1, (1, 1, 1)), (1, (2, 0))):
        print(f"<{exponents}>_{genus} = {correlator(genus, exponents)} "
              f"(string first: {correlator_by_string_equation(genus, exponents)})")


if __name__ == "__main__":
    main()
