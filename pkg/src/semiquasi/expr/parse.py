"""Recursive-descent parser for the expression grammar.

Grammar (precedence low to high)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?          # exponent must fold to a rational
    atom   := INT | IDENT | FUNC '(' expr ')' | '(' expr ')'

``^`` is right-associative because its right operand is parsed at the
``unary`` level.
"""

from __future__ import annotations

import keyword
import re
from dataclasses import dataclass, field

from .nodes import FUNCTIONS, Expr, ExprError, Num, Sym, fn, mul, neg, power, add

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class UnknownIdentifierError(ExprError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r} at byte {offset}")
        self.name = name
        self.offset = offset


@dataclass(frozen=True)
class Assumptions:
    positive: bool = False
    nonzero: bool = False


@dataclass(frozen=True)
class SymbolTable:
    """Coordinates (ordered) and parameters with their assumption flags."""

    coordinates: tuple[str, ...] = ()
    parameters: dict[str, Assumptions] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        names = list(self.coordinates) + list(self.parameters)
        for name in names:
            if not valid_identifier(name):
                raise ExprError(f"invalid symbol name {name!r}")
        if len(set(names)) != len(names):
            raise ExprError("coordinate and parameter names must be distinct")

    def __contains__(self, name: str) -> bool:
        return name in self.coordinates or name in self.parameters

    def names(self) -> tuple[str, ...]:
        return self.coordinates + tuple(self.parameters)

    @classmethod
    def of(cls, *coordinates: str, parameters=()) -> SymbolTable:
        return cls(tuple(coordinates), {p: Assumptions() for p in parameters})


def valid_identifier(name: str) -> bool:
    return bool(_IDENT.match(name)) and name not in FUNCTIONS and not keyword.iskeyword(name)


class _Parser:
    def __init__(self, text: str, symbols: SymbolTable | None):
        self.text = text
        self.symbols = symbols
        self.tokens = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text):
        tokens = []
        i = 0
        n = len(text)
        while i < n:
            m = _TOKEN.match(text, i)
            if m is None or m.end() == i:
                j = i
                while j < n and text[j].isspace():
                    j += 1
                if j == n:
                    break
                raise ExprSyntaxError(f"unexpected character {text[j]!r}", _byte_offset(text, j))
            kind = m.lastgroup
            start = m.start(kind)
            tokens.append((kind, m.group(kind), _byte_offset(text, start)))
            i = m.end()
        tokens.append(("end", "", _byte_offset(text, n)))
        return tokens

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        kind, text, offset = self.take()
        if text != value or kind != "op":
            found = "end of input" if kind == "end" else repr(text)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", offset)

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            raise ExprSyntaxError("empty expression", self.peek()[2])
        e = self.expr()
        kind, text, offset = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {text!r}", offset)
        return e

    def expr(self):
        terms = [self.term()]
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            t = self.term()
            terms.append(t if op == "+" else neg(t))
        return add(*terms) if len(terms) > 1 else terms[0]

    def term(self):
        factors = [self.unary()]
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, offset = self.take()
            f = self.unary()
            if op == "/":
                if f.is_zero_constant():
                    raise ExprSyntaxError("division by zero", offset)
                f = power(f, -1)
            factors.append(f)
        return mul(*factors) if len(factors) > 1 else factors[0]

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text in ("-", "+"):
            self.take()
            operand = self.unary()
            return neg(operand) if text == "-" else operand
        return self.power()

    def power(self):
        base = self.atom()
        kind, text, offset = self.peek()
        if kind == "op" and text == "^":
            self.take()
            exp_offset = self.peek()[2]
            exponent = self.unary()
            if not isinstance(exponent, Num):
                raise ExprSyntaxError("exponent must be an integer or rational literal", exp_offset)
            if base.is_zero_constant() and exponent.value < 0:
                raise ExprSyntaxError("division by zero", offset)
            return power(base, exponent.value)
        return base

    def atom(self):
        kind, text, offset = self.take()
        if kind == "int":
            return Num(int(text))
        if kind == "ident":
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return fn(text, arg)
            if self.symbols is not None and text not in self.symbols:
                raise UnknownIdentifierError(text, offset)
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                raise ExprSyntaxError(f"{text!r} is not a function", self.peek()[2])
            return Sym(text)
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"unexpected {found}", offset)


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def parse(text: str, symbols: SymbolTable | None = None) -> Expr:
    """Parse ``text`` into a light-normal expression.

    With ``symbols`` given, every identifier must be a coordinate or a
    parameter of the table.
    """
    return _Parser(text, symbols).parse()
