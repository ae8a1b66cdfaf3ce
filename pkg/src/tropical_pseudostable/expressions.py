'''
A small language for piecewise polynomials on a cone complex.

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*        division by scalars only
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INTEGER)?
    atom   := INTEGER | "(" expr ")" | NAME | CALL

NAME is one of phi0, phi1, Phi0, Phi1 (the functions of the rays rho0 and
rho1). CALL is phi(<cone>) or Phi(<ray>), where the argument is a cone name
understood by ConeComplex.find (c3, origin, rho0, rho1, banana, loop+tail,
rho(1,{2})) or a separating ray written i,{I} as in phi(1,{2}).
'''
import logging
import re
from dataclasses import dataclass
from typing import Sequence

from sympy import Rational

from tropical_pseudostable.complex.complex_utils import ConeComplex
from tropical_pseudostable.errors import ExpressionSyntaxError
from tropical_pseudostable.pwpoly.pp_utils import (
    PiecewisePoly, Phi_ray, constant, phi_cone, phi_ray)

__all__ = [
    "Token",
    "tokenize",
    "ExpressionParser",
    "parse_expression",
    "parse_point",
]

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(?P<call>(?:phi|Phi)\()|(?P<number>\d+)"
                    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")
_SEPARATING_RAY = re.compile(r"^(\d+),\{([\d,]*)\}$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN.match(text, position)
        if match is None:
            raise ExpressionSyntaxError(f"unexpected {text[position:]!r} at {position}")
        kind = match.lastgroup
        start = match.start(kind)
        if kind == "call":
            depth, end = 1, match.end()
            while end < len(text) and depth:
                depth += {"(": 1, ")": -1}.get(text[end], 0)
                end += 1
            if depth:
                raise ExpressionSyntaxError(f"unbalanced parenthesis after {start}")
            tokens.append(Token("call", text[start:end], start))
            position = end
        else:
            tokens.append(Token(kind, match.group(kind), start))
            position = match.end()
    return tokens


class ExpressionParser:
    '''recursive-descent evaluator of piecewise polynomial expressions'''

    def __init__(self, complex: ConeComplex) -> None:
        self._logger = logging.getLogger(self.__class__.__name__)
        self._complex = complex
        self._tokens: list[Token] = []
        self._index = 0

    def parse(self, text: str) -> PiecewisePoly:
        self._tokens = tokenize(text)
        self._index = 0
        if not self._tokens:
            raise ExpressionSyntaxError("empty expression")
        value = self._expr()
        if self._peek() is not None:
            token = self._peek()
            raise ExpressionSyntaxError(f"unexpected {token.text!r} at {token.position}")
        self._logger.debug(f"parsed {text!r}")
        if isinstance(value, PiecewisePoly):
            return value
        return constant(self._complex, value)

    def _peek(self) -> Token | None:
        return self._tokens[self._index] if self._index < len(self._tokens) else None

    def _next(self) -> Token:
        token = self._peek()
        if token is None:
            raise ExpressionSyntaxError("unexpected end of expression")
        self._index += 1
        return token

    def _accept(self, *ops: str) -> Token | None:
        token = self._peek()
        if token is not None and token.kind == "op" and token.text in ops:
            self._index += 1
            return token
        return None

    def _expr(self):
        value = self._term()
        while (op := self._accept("+", "-")) is not None:
            rhs = self._term()
            value = value + rhs if op.text == "+" else value - rhs
        return value

    def _term(self):
        value = self._unary()
        while (op := self._accept("*", "/")) is not None:
            rhs = self._unary()
            if op.text == "*":
                value = value * rhs
            elif isinstance(rhs, PiecewisePoly):
                raise ExpressionSyntaxError(f"division by a function at {op.position}")
            elif rhs == 0:
                raise ExpressionSyntaxError(f"division by zero at {op.position}")
            else:
                value = value / rhs
        return value

    def _unary(self):
        if self._accept("-") is not None:
            return -self._unary()
        if self._accept("+") is not None:
            return self._unary()
        return self._power()

    def _power(self):
        value = self._atom()
        if (op := self._accept("^")) is not None:
            token = self._next()
            if token.kind != "number":
                raise ExpressionSyntaxError(f"exponent must be an integer at {op.position}")
            value = value ** int(token.text)
        return value

    def _atom(self):
        token = self._next()
        if token.kind == "number":
            return Rational(int(token.text))
        if token.kind == "op" and token.text == "(":
            value = self._expr()
            if self._accept(")") is None:
                raise ExpressionSyntaxError(f"missing ')' for '(' at {token.position}")
            return value
        if token.kind == "name":
            return self._named(token)
        if token.kind == "call":
            return self._call(token)
        raise ExpressionSyntaxError(f"unexpected {token.text!r} at {token.position}")

    def _named(self, token: Token) -> PiecewisePoly:
        generators = {"phi0": (phi_ray, "rho0"), "phi1": (phi_ray, "rho1"),
                      "Phi0": (Phi_ray, "rho0"), "Phi1": (Phi_ray, "rho1")}
        if token.text not in generators:
            raise ExpressionSyntaxError(f"unknown name {token.text!r} at {token.position}")
        function, ray = generators[token.text]
        return function(self._complex, ray)

    def _call(self, token: Token) -> PiecewisePoly:
        head, argument = token.text.split("(", 1)
        argument = argument[:-1].replace(" ", "")
        if match := _SEPARATING_RAY.match(argument):
            argument = f"rho({match.group(1)},{{{match.group(2)}}})"
        cone = self._complex.find(argument)
        if head == "Phi":
            return Phi_ray(self._complex, cone)
        return phi_cone(self._complex, cone)


def parse_expression(complex: ConeComplex, text: str) -> PiecewisePoly:
    return ExpressionParser(complex).parse(text)


def parse_point(complex: ConeComplex, text: str) -> tuple[int, tuple[Rational, ...]]:
    '''read "cone=<name>;coords=<x1>,<x2>,..." into a cone id and coordinates'''
    fields = {}
    for part in text.split(";"):
        if "=" not in part:
            raise ExpressionSyntaxError(f"expected key=value in {part!r}")
        key, value = part.split("=", 1)
        fields[key.strip()] = value.strip()
    if set(fields) != {"cone", "coords"}:
        raise ExpressionSyntaxError(f"a point needs cone= and coords=, got {sorted(fields)}")
    try:
        coords: Sequence = tuple(Rational(x) for x in fields["coords"].split(",") if x.strip())
    except (TypeError, ValueError) as e:
        raise ExpressionSyntaxError(f"bad coordinates {fields['coords']!r}") from e
    return complex.find(fields["cone"]), coords
