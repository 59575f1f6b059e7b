"""Immutable expression trees and their smart constructors.

Every tree built through :func:`add`, :func:`mul`, :func:`power` and
:func:`fn` is in *light* normal form: sums and products are flattened and
sorted, numeric parts are folded and like terms are collected.  Nothing is
expanded; full rational-function normalization lives in
:mod:`semiquasi.expr.rational`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt")

# rank of each node class inside structural keys
_NUM, _SYM, _POW, _FN, _MUL, _ADD = range(6)


class ExprError(ValueError):
    """Base class for expression-engine errors."""


class Expr:
    __slots__ = ("_key", "_hash", "_rat", "_degree")

    def __init__(self, key: tuple, degree: Fraction):
        self._key = key
        self._hash = hash(key)
        self._rat = None
        self._degree = degree

    # structural identity -------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return self._hash

    @property
    def sort_key(self) -> tuple:
        """Degree-lexicographic key: total degree first, then structure."""
        return (self._degree, self._key)

    def free_symbols(self) -> frozenset[str]:
        raise NotImplementedError

    def is_zero_constant(self) -> bool:
        return isinstance(self, Num) and self.value == 0

    # arithmetic builds light-normal trees --------------------------------
    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return add(self, neg(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), neg(self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return mul(self, power(_coerce(other), -1))

    def __rtruediv__(self, other):
        return mul(_coerce(other), power(self, -1))

    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        if isinstance(exponent, Num):
            exponent = exponent.value
        if not isinstance(exponent, Rational):
            raise ExprError(f"exponent must be a rational literal, got {exponent!r}")
        return power(self, Fraction(exponent))

    def __repr__(self):
        from .printing import to_text

        return f"Expr({to_text(self)!r})"

    def __str__(self):
        from .printing import to_text

        return to_text(self)


class Num(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        value = Fraction(value)
        self.value = value
        super().__init__((_NUM, value), Fraction(0))

    def free_symbols(self):
        return frozenset()


class Sym(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        super().__init__((_SYM, name), Fraction(1))

    def free_symbols(self):
        return frozenset((self.name,))


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base: Expr, exp: Fraction):
        self.base = base
        self.exp = exp
        super().__init__((_POW, base._key, exp), base._degree * exp)

    def free_symbols(self):
        return self.base.free_symbols()


class Fn(Expr):
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: Expr):
        self.name = name
        self.arg = arg
        super().__init__((_FN, name, arg._key), Fraction(1))

    def free_symbols(self):
        return self.arg.free_symbols()


class Mul(Expr):
    """Product; ``factors[0]`` is the numeric coefficient when it is not 1."""

    __slots__ = ("factors",)

    def __init__(self, factors: tuple):
        self.factors = factors
        super().__init__(
            (_MUL, tuple(f._key for f in factors)),
            sum((f._degree for f in factors), Fraction(0)),
        )

    def free_symbols(self):
        return frozenset().union(*(f.free_symbols() for f in self.factors))


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms: tuple):
        self.terms = terms
        super().__init__((_ADD, tuple(t._key for t in terms)), max(t._degree for t in terms))

    def free_symbols(self):
        return frozenset().union(*(t.free_symbols() for t in self.terms))


ZERO = Num(0)
ONE = Num(1)
MINUS_ONE = Num(-1)


def _coerce(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Num(value)
    raise TypeError(f"cannot use {type(value).__name__} in an expression")


def const(value) -> Num:
    return Num(value)


def sym(name: str) -> Sym:
    return Sym(name)


def split_coeff(e: Expr) -> tuple[Fraction, Expr]:
    """Split ``e`` into ``(c, rest)`` with ``e == c * rest``."""
    if isinstance(e, Num):
        return e.value, ONE
    if isinstance(e, Mul) and isinstance(e.factors[0], Num):
        rest = e.factors[1:]
        return e.factors[0].value, rest[0] if len(rest) == 1 else Mul(rest)
    return Fraction(1), e


def _term_order(e: Expr):
    coeff, rest = split_coeff(e)
    return (rest._degree, rest._key, coeff)


def add(*args) -> Expr:
    collected: dict[Expr, Fraction] = {}
    constant = Fraction(0)
    stack = [_coerce(a) for a in reversed(args)]
    while stack:
        term = stack.pop()
        if isinstance(term, Add):
            stack.extend(reversed(term.terms))
            continue
        if isinstance(term, Num):
            constant += term.value
            continue
        coeff, rest = split_coeff(term)
        collected[rest] = collected.get(rest, Fraction(0)) + coeff
    terms = [_scale(rest, c) for rest, c in collected.items() if c != 0]
    if constant != 0:
        terms.append(Num(constant))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    terms.sort(key=_term_order)
    return Add(tuple(terms))


def _scale(e: Expr, c: Fraction) -> Expr:
    if c == 1:
        return e
    if isinstance(e, Mul):
        return Mul((Num(c),) + e.factors)
    return Mul((Num(c), e))


def _base_exp(e: Expr) -> tuple[Expr, Fraction]:
    if isinstance(e, Pow):
        return e.base, e.exp
    return e, Fraction(1)


def mul(*args) -> Expr:
    coeff = Fraction(1)
    powers: dict[Expr, Fraction] = {}
    stack = [_coerce(a) for a in reversed(args)]
    while stack:
        f = stack.pop()
        if isinstance(f, Mul):
            stack.extend(reversed(f.factors))
            continue
        if isinstance(f, Num):
            coeff *= f.value
            continue
        base, exp = _base_exp(f)
        powers[base] = powers.get(base, Fraction(0)) + exp
    if coeff == 0:
        return ZERO
    factors = []
    regroup = False
    for base, exp in powers.items():
        if exp == 0:
            continue
        f = power(base, exp)
        if isinstance(f, Num):
            coeff *= f.value
        else:
            # e.g. sqrt(x*y)^2 collapses back to a product
            regroup = regroup or isinstance(f, Mul)
            factors.append(f)
    if regroup:
        return mul(Num(coeff), *factors)
    factors.sort(key=lambda f: f._key)
    if coeff != 1:
        factors.insert(0, Num(coeff))
    if not factors:
        return ONE
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(factors))


def neg(e: Expr) -> Expr:
    return mul(MINUS_ONE, e)


def _exact_root(value: Fraction, q: int) -> Fraction | None:
    if value < 0:
        if q % 2 == 0:
            return None
        r = _exact_root(-value, q)
        return None if r is None else -r
    num = _int_root(value.numerator, q)
    den = _int_root(value.denominator, q)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(n: int, q: int) -> int | None:
    if n < 2:
        return n
    r = round(n ** (1.0 / q))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**q == n:
            return cand
    return None


def power(base, exp) -> Expr:
    base = _coerce(base)
    exp = Fraction(exp)
    if exp == 0:
        return ONE
    if exp == 1:
        return base
    if isinstance(base, Num):
        v = base.value
        if v == 0:
            if exp < 0:
                raise ExprError("division by zero")
            return ZERO
        if v == 1:
            return ONE
        if exp.denominator == 1:
            return Num(v ** exp.numerator)
        root = _exact_root(v, exp.denominator)
        if root is not None:
            return Num(root ** exp.numerator)
        return Pow(base, exp)
    if isinstance(base, Pow) and exp.denominator == 1:
        return power(base.base, base.exp * exp)
    if isinstance(base, Mul) and exp.denominator == 1:
        return mul(*(power(f, exp) for f in base.factors))
    return Pow(base, exp)


def fn(name: str, arg) -> Expr:
    arg = _coerce(arg)
    if name not in FUNCTIONS:
        raise ExprError(f"unknown function {name!r}")
    if name == "sqrt":
        return power(arg, Fraction(1, 2))
    if isinstance(arg, Num) and arg.value == 0:
        if name in ("sin", "tan"):
            return ZERO
        if name in ("cos", "exp"):
            return ONE
    if name == "log" and isinstance(arg, Num) and arg.value == 1:
        return ZERO
    return Fn(name, arg)


def sin(x) -> Expr:
    return fn("sin", x)


def cos(x) -> Expr:
    return fn("cos", x)


def tan(x) -> Expr:
    return fn("tan", x)


def exp(x) -> Expr:
    return fn("exp", x)


def log(x) -> Expr:
    return fn("log", x)


def sqrt(x) -> Expr:
    return fn("sqrt", x)


def rebuild(e: Expr) -> Expr:
    """Reconstruct ``e`` bottom-up through the smart constructors.

    The copy shares no cached state with ``e``; tests use it to check that
    normal forms are genuinely stable rather than served from a cache.
    """
    if isinstance(e, Num):
        return Num(e.value)
    if isinstance(e, Sym):
        return Sym(e.name)
    if isinstance(e, Pow):
        return power(rebuild(e.base), e.exp)
    if isinstance(e, Fn):
        return fn(e.name, rebuild(e.arg))
    if isinstance(e, Mul):
        return mul(*(rebuild(f) for f in e.factors))
    return add(*(rebuild(t) for t in e.terms))
